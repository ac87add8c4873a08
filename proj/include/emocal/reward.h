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

#ifndef EMOCAL_REWARD_H_
#define EMOCAL_REWARD_H_

#include <string>
#include <string_view>

#include "emocal/emoloop.h"
#include "emocal/labels.h"
#include "emocal/records.h"
#include "emocal/transcript.h"

namespace emocal {

enum class ConfVariant { kLogLikelihood, kBrier };

std::string_view VariantName(ConfVariant v);
// Accepts "log", "log_likelihood", "brier". Throws Error("invalid_argument").
ConfVariant ParseVariant(std::string_view name);

// Probabilities are clamped to [eps, 1 - eps] before the logarithm.
inline constexpr double kConfEpsilon = 1e-4;
// Stand-in confidence when none can be read from the response.
inline constexpr double kNeutralConfidence = 0.5;

struct RewardWeights {
  double format = 1.0;
  double correct = 1.0;
  double conf = 1.0;
};

struct RewardBreakdown {
  double r_format = 0.0;
  double r_correct = 0.0;
  double r_conf = 0.0;
  double total = 0.0;
  ConfVariant conf_variant = ConfVariant::kLogLikelihood;
  bool clamped = false;
};

struct ConfReward {
  double value = 0.0;
  bool clamped = false;
};

int RewardFormat(const FormatVerdict& verdict);
int RewardCorrect(std::string_view pred, std::string_view gold,
                  const LabelMatcher& matcher = LabelMatcher());

// log(c) / log(1 - c) with clamping, or -(1[correct] - c)^2. Throws
// Error("invalid_argument") when c is outside [0, 1].
ConfReward RewardConf(bool correct, double c, ConfVariant variant);

// Lenient parse, then the three components. A missing or invalid
// confidence zeroes the format reward and scores r_conf at c = 0.5; a
// missing answer zeroes r_correct. Throws Error("missing_gold").
RewardBreakdown ScoreRecord(const Record& record, const LabelMatcher& matcher,
                            ConfVariant variant, const RewardWeights& weights = {});
RewardBreakdown ScoreRecord(const Record& record, const EmotionLoop& loop,
                            ConfVariant variant, const RewardWeights& weights = {});

Json RewardToJson(const RewardBreakdown& r);

}  // namespace emocal

#endif  // EMOCAL_REWARD_H_
