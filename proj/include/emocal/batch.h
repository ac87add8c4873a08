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

#ifndef EMOCAL_BATCH_H_
#define EMOCAL_BATCH_H_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "emocal/emoloop.h"
#include "emocal/metrics.h"
#include "emocal/records.h"
#include "emocal/reward.h"

// Record-batch entry points shared by the CLI and host-language bindings.
// Per-record work runs under OpenMP; outputs keep input order and do not
// depend on the thread count.
namespace emocal::batch {

struct ErrorInfo {
  std::string code;
  std::string message;
};

template <typename T>
struct Outcome {
  std::optional<T> value;
  std::optional<ErrorInfo> error;
};

std::vector<Outcome<Record>> AnnotateBatch(std::span<const Record> records,
                                           const EmotionLoop& loop, bool parallel = true);

std::vector<Outcome<RewardBreakdown>> ScoreRecords(std::span<const Record> records,
                                                   const LabelMatcher& matcher,
                                                   ConfVariant variant,
                                                   const RewardWeights& weights = {},
                                                   bool parallel = true);

struct ScoreBatchResult {
  std::vector<RewardBreakdown> rewards;
  // Group-relative advantages of the totals. Records are grouped by their
  // `query_id` field (records without one share a group); a group of one
  // gets advantage 0.
  std::vector<double> advantages;
};

// Fails on the first record that cannot be scored, rethrowing its Error.
ScoreBatchResult ScoreBatch(std::span<const Record> records, const EmotionLoop& loop,
                            ConfVariant variant, bool normalize_advantage,
                            const RewardWeights& weights = {});

// Pass the subtask's taxonomy and matcher to reproduce `eval` exactly.
metrics::MetricsReport MetricsBatch(std::span<const metrics::ScoredSample> samples,
                                    const std::set<std::string>& taxonomy = {},
                                    const LabelMatcher& matcher = LabelMatcher());

}  // namespace emocal::batch

#endif  // EMOCAL_BATCH_H_
