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

#ifndef EMOCAL_METRICS_H_
#define EMOCAL_METRICS_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "emocal/labels.h"

namespace emocal::metrics {

struct ScoredSample {
  std::string pred;
  std::string gold;
  double confidence = 0.5;
};

// Correctness-and-confidence pair, the input of the calibration kernels.
struct Outcome {
  bool correct = false;
  double confidence = 0.0;
};

struct BinStat {
  size_t count = 0;
  double mean_conf = 0.0;
  double empirical_acc = 0.0;
};

inline constexpr size_t kDefaultBins = 10;

struct CalibrationResult {
  double ece = 0.0;
  std::vector<BinStat> bins;
};

struct MetricsReport {
  double acc = 0.0;
  double macro_f1 = 0.0;
  double ece = 0.0;
  double brier = 0.0;
  std::optional<double> auc;
  size_t n = 0;
  std::vector<BinStat> bin_stats;
};

std::vector<Outcome> ToOutcomes(std::span<const ScoredSample> samples,
                                const LabelMatcher& matcher = LabelMatcher());

// All functions below throw Error("empty_input") on an empty sample set,
// except Auc, which reports absence instead.
double Accuracy(std::span<const ScoredSample> samples,
                const LabelMatcher& matcher = LabelMatcher());

// Classes are gold labels plus in-taxonomy predictions of this set.
// Predictions outside `taxonomy` only count against their gold class.
// `taxonomy` holds canonical (matcher-normalized) labels; an empty set
// accepts every prediction.
double MacroF1(std::span<const ScoredSample> samples, const std::set<std::string>& taxonomy,
               const LabelMatcher& matcher = LabelMatcher());

// Bin b covers [b/B, (b+1)/B); the last bin is closed at 1.
size_t BinIndex(double confidence, size_t bins);

CalibrationResult Ece(std::span<const Outcome> outcomes, size_t bins = kDefaultBins);
CalibrationResult EceParallel(std::span<const Outcome> outcomes, size_t bins = kDefaultBins);

double Brier(std::span<const Outcome> outcomes);

// Mann-Whitney statistic over (correct, incorrect) pairs with ties at 0.5.
// Absent when either class is empty.
std::optional<double> Auc(std::span<const Outcome> outcomes);
std::optional<double> AucParallel(std::span<const Outcome> outcomes);

MetricsReport Evaluate(std::span<const ScoredSample> samples,
                       const std::set<std::string>& taxonomy,
                       const LabelMatcher& matcher = LabelMatcher());

}  // namespace emocal::metrics

#endif  // EMOCAL_METRICS_H_
