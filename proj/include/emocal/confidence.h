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

#ifndef EMOCAL_CONFIDENCE_H_
#define EMOCAL_CONFIDENCE_H_

#include <string_view>

#include "emocal/emoloop.h"
#include "emocal/records.h"
#include "emocal/transcript.h"

namespace emocal {

struct ConfidenceTarget {
  double value = 0.0;  // two decimals
  bool correct = false;
  double semantic_dist = 0.0;
  double mean_prob = 0.0;
};

// Mean of the response token probabilities, falling back to `mean_prob`.
// Throws Error("no_probabilities") / Error("invalid_probability").
double MeanTokenProb(const Transcript& t);

// Unrounded target: 0.5 * (1 + p) when the prediction matches, otherwise
// 0.5 - d(pred, gold) * p.
double RawConfidenceTarget(bool correct, double semantic_dist, double mean_p);

// Rounded target for a prediction against its gold label on `loop`.
// Throws Error("unknown_label") / Error("invalid_probability").
ConfidenceTarget ComputeConfidenceTarget(std::string_view pred, std::string_view gold,
                                         const EmotionLoop& loop, double mean_p);

// Appends `<confidence>X.XX</confidence>` right after the answer block and
// records the target. The original text is kept under `raw_unannotated`.
// Throws Error with codes "no_answer", "already_annotated", "missing_gold",
// "unknown_label", "no_probabilities".
Record AnnotateRecord(const Record& record, const EmotionLoop& loop);

}  // namespace emocal

#endif  // EMOCAL_CONFIDENCE_H_
