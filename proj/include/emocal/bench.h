/*
 * Copyright 2026 The emocal Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EMOCAL_BENCH_H_
#define EMOCAL_BENCH_H_

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "emocal/error.h"
#include "emocal/metrics.h"
#include "emocal/records.h"

namespace emocal::bench {

struct SubtaskDef {
  std::string name;
  std::string taxonomy_path;
  std::string loop_path;
  std::string records_path;
};

struct Manifest {
  std::string name;
  std::vector<SubtaskDef> subtasks;
  // Group name -> member subtasks, in document order.
  std::vector<std::pair<std::string, std::vector<std::string>>> groups;
};

// Relative paths are resolved against `base_dir`. Throws
// Error("invalid_manifest").
Manifest ManifestFromJson(const Json& doc, const std::string& base_dir = {});
Manifest LoadManifest(const std::string& path);

struct SubtaskResult {
  std::string name;
  metrics::MetricsReport metrics;
  size_t missing_confidence = 0;
  size_t format_failures = 0;
  size_t out_of_taxonomy = 0;
};

struct GroupResult {
  std::string name;
  std::vector<std::string> members;
  double acc = 0.0;
  double macro_f1 = 0.0;
  double ece = 0.0;
  double brier = 0.0;
  std::optional<double> auc;
  size_t auc_members = 0;
};

struct EvalReport {
  std::string name;
  bool weighted = false;
  std::vector<SubtaskResult> subtasks;
  std::vector<GroupResult> groups;
  std::vector<std::string> warnings;
};

struct EvalOptions {
  // Weight group means by sample count instead of one vote per subtask.
  bool weighted = false;
  bool parallel = true;
};

// Scores one subtask's records: the parsed answer is the prediction and a
// missing confidence is evaluated at 0.5.
SubtaskResult EvaluateSubtask(const SubtaskDef& def, std::vector<std::string>* warnings);

EvalReport Evaluate(const Manifest& manifest, const EvalOptions& options = {});

// Means of member metrics; AUC averages over the members that define it.
GroupResult AverageGroup(const std::string& name, const std::vector<std::string>& members,
                         const std::vector<const SubtaskResult*>& results, bool weighted);

Json ReportToJson(const EvalReport& report);
EvalReport ReportFromJson(const nlohmann::json& doc);
// Tables per group with an Average column; metrics x100 with two decimals.
std::string RenderMarkdown(const EvalReport& report, const std::string& system_name = {});

struct SplitRatios {
  uint64_t first = 6;
  uint64_t second = 3;
  uint64_t third = 1;
};

SplitRatios ParseRatios(const std::string& text);

// Sizes floor(n*a/S), floor(n*b/S) and the remainder.
std::array<size_t, 3> SplitSizes(size_t n, const SplitRatios& ratios);

// Fisher-Yates driven by mt19937_64 with rejection-sampled bounds, so the
// permutation depends only on the seed.
std::vector<size_t> SeededPermutation(size_t n, uint64_t seed);

template <typename T>
std::array<std::vector<T>, 3> SplitDataset(const std::vector<T>& items,
                                           const SplitRatios& ratios = {},
                                           uint64_t seed = 0) {
  if (items.empty()) throw Error("empty_input", "cannot split an empty record set");
  const auto sizes = SplitSizes(items.size(), ratios);
  const auto perm = SeededPermutation(items.size(), seed);
  std::array<std::vector<T>, 3> out;
  size_t at = 0;
  for (size_t part = 0; part < 3; ++part) {
    out[part].reserve(sizes[part]);
    for (size_t i = 0; i < sizes[part]; ++i) out[part].push_back(items[perm[at++]]);
  }
  return out;
}

}  // namespace emocal::bench

#endif  // EMOCAL_BENCH_H_
