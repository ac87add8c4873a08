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

#include "emocal/reward.h"

#include <algorithm>
#include <cmath>

#include "emocal/error.h"

namespace emocal {

std::string_view VariantName(ConfVariant v) {
  return v == ConfVariant::kBrier ? "brier" : "log_likelihood";
}

ConfVariant ParseVariant(std::string_view name) {
  if (name == "log" || name == "log_likelihood") return ConfVariant::kLogLikelihood;
  if (name == "brier") return ConfVariant::kBrier;
  throw Error("invalid_argument", "unknown reward variant '" + std::string(name) + "'");
}

int RewardFormat(const FormatVerdict& verdict) { return verdict.ok ? 1 : 0; }

int RewardCorrect(std::string_view pred, std::string_view gold, const LabelMatcher& matcher) {
  if (TrimView(pred).empty() || TrimView(gold).empty()) return 0;
  return matcher.Match(pred, gold) ? 1 : 0;
}

ConfReward RewardConf(bool correct, double c, ConfVariant variant) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw Error("invalid_argument", "confidence " + std::to_string(c) + " is outside [0, 1]");
  }
  if (variant == ConfVariant::kBrier) {
    const double gap = (correct ? 1.0 : 0.0) - c;
    return {-(gap * gap), false};
  }
  const double p = correct ? c : 1.0 - c;
  const double clamped = std::clamp(p, kConfEpsilon, 1.0 - kConfEpsilon);
  return {std::log(clamped), clamped != p};
}

RewardBreakdown ScoreRecord(const Record& record, const LabelMatcher& matcher,
                            ConfVariant variant, const RewardWeights& weights) {
  const auto gold = record.gold_label();
  if (!gold) throw Error("missing_gold", "record '" + record.id() + "' has no gold_label");
  const ParseResult parsed = record.Parse();
  const Transcript& t = parsed.transcript;

  RewardBreakdown r;
  r.conf_variant = variant;
  r.r_format = (RewardFormat(parsed.verdict) == 1 && t.confidence) ? 1.0 : 0.0;
  const bool correct = t.answer && RewardCorrect(*t.answer, *gold, matcher) == 1;
  r.r_correct = correct ? 1.0 : 0.0;
  const ConfReward conf = RewardConf(correct, t.confidence.value_or(kNeutralConfidence), variant);
  r.r_conf = conf.value;
  r.clamped = conf.clamped;
  r.total = weights.format * r.r_format + weights.correct * r.r_correct + weights.conf * r.r_conf;
  return r;
}

RewardBreakdown ScoreRecord(const Record& record, const EmotionLoop& loop,
                            ConfVariant variant, const RewardWeights& weights) {
  return ScoreRecord(record, loop.matcher(), variant, weights);
}

Json RewardToJson(const RewardBreakdown& r) {
  return Json{{"format", r.r_format},   {"correct", r.r_correct},
              {"conf", r.r_conf},       {"total", r.total},
              {"variant", std::string(VariantName(r.conf_variant))},
              {"clamped", r.clamped}};
}

}  // namespace emocal
