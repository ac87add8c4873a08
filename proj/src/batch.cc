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

#include "emocal/batch.h"

#include <map>

#include "emocal/confidence.h"
#include "emocal/error.h"
#include "emocal/grpo.h"

namespace emocal::batch {
namespace {

template <typename T, typename Fn>
std::vector<Outcome<T>> MapRecords(std::span<const Record> records, bool parallel, Fn fn) {
  std::vector<Outcome<T>> out(records.size());
  const long count = static_cast<long>(records.size());
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (long i = 0; i < count; ++i) {
    try {
      out[i].value = fn(records[i]);
    } catch (const Error& e) {
      out[i].error = ErrorInfo{e.code(), e.what()};
    } catch (const std::exception& e) {
      out[i].error = ErrorInfo{"internal", e.what()};
    }
  }
  return out;
}

}  // namespace

std::vector<Outcome<Record>> AnnotateBatch(std::span<const Record> records,
                                           const EmotionLoop& loop, bool parallel) {
  return MapRecords<Record>(records, parallel,
                            [&](const Record& r) { return AnnotateRecord(r, loop); });
}

std::vector<Outcome<RewardBreakdown>> ScoreRecords(std::span<const Record> records,
                                                   const LabelMatcher& matcher,
                                                   ConfVariant variant,
                                                   const RewardWeights& weights, bool parallel) {
  return MapRecords<RewardBreakdown>(records, parallel, [&](const Record& r) {
    return ScoreRecord(r, matcher, variant, weights);
  });
}

ScoreBatchResult ScoreBatch(std::span<const Record> records, const EmotionLoop& loop,
                            ConfVariant variant, bool normalize_advantage,
                            const RewardWeights& weights) {
  ScoreBatchResult result;
  const auto scored = ScoreRecords(records, loop.matcher(), variant, weights);
  for (const auto& s : scored) {
    if (s.error) throw Error(s.error->code, s.error->message);
    result.rewards.push_back(*s.value);
  }
  std::map<std::string, std::vector<size_t>> groups;
  for (size_t i = 0; i < records.size(); ++i) {
    const auto it = records[i].doc.find("query_id");
    const std::string key = (it != records[i].doc.end() && it->is_string()) ? it->get<std::string>() : "";
    groups[key].push_back(i);
  }
  result.advantages.assign(records.size(), 0.0);
  for (const auto& [key, members] : groups) {
    if (members.size() < 2) continue;
    std::vector<double> totals;
    for (size_t i : members) totals.push_back(result.rewards[i].total);
    const auto adv = grpo::Advantages(totals, normalize_advantage);
    for (size_t j = 0; j < members.size(); ++j) result.advantages[members[j]] = adv[j];
  }
  return result;
}

metrics::MetricsReport MetricsBatch(std::span<const metrics::ScoredSample> samples,
                                    const std::set<std::string>& taxonomy,
                                    const LabelMatcher& matcher) {
  return metrics::Evaluate(samples, taxonomy, matcher);
}

}  // namespace emocal::batch
