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

#include "emocal/confidence.h"

#include <cmath>

#include "emocal/error.h"
#include "emocal/numeric.h"

namespace emocal {
namespace {

void CheckProbability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error("invalid_probability", "probability " + std::to_string(p) + " is outside [0, 1]");
  }
}

}  // namespace

double MeanTokenProb(const Transcript& t) {
  if (t.token_probs && !t.token_probs->empty()) {
    double sum = 0.0;
    for (double p : *t.token_probs) {
      CheckProbability(p);
      sum += p;
    }
    return sum / static_cast<double>(t.token_probs->size());
  }
  if (t.mean_prob) {
    CheckProbability(*t.mean_prob);
    return *t.mean_prob;
  }
  throw Error("no_probabilities", "record has neither token_probs nor mean_prob");
}

double RawConfidenceTarget(bool correct, double semantic_dist, double mean_p) {
  return correct ? 0.5 * (1.0 + mean_p) : 0.5 - semantic_dist * mean_p;
}

ConfidenceTarget ComputeConfidenceTarget(std::string_view pred, std::string_view gold,
                                         const EmotionLoop& loop, double mean_p) {
  CheckProbability(mean_p);
  ConfidenceTarget out;
  out.semantic_dist = loop.Distance(pred, gold);
  out.correct = loop.matcher().Match(pred, gold);
  out.mean_prob = mean_p;
  out.value = Round2(RawConfidenceTarget(out.correct, out.semantic_dist, mean_p));
  return out;
}

Record AnnotateRecord(const Record& record, const EmotionLoop& loop) {
  const ParseResult parsed = record.Parse();
  if (parsed.has_confidence_tag) {
    throw Error("already_annotated", "record '" + record.id() + "' already has a confidence tag");
  }
  if (!parsed.transcript.answer || !parsed.answer_end) {
    throw Error("no_answer", "record '" + record.id() + "' has no answer");
  }
  const auto gold = record.gold_label();
  if (!gold) throw Error("missing_gold", "record '" + record.id() + "' has no gold_label");

  const double mean_p = MeanTokenProb(parsed.transcript);
  const ConfidenceTarget target =
      ComputeConfidenceTarget(*parsed.transcript.answer, *gold, loop, mean_p);

  const std::string raw = record.raw();
  std::string annotated = raw.substr(0, *parsed.answer_end) + "<confidence>" +
                          FormatFixed2(target.value) + "</confidence>" +
                          raw.substr(*parsed.answer_end);

  Record out = record;
  out.doc["raw"] = annotated;
  out.doc["raw_unannotated"] = raw;
  AddParsedFields(out.doc, ParseTranscript(annotated));
  out.doc["confidence_target"] = Json{{"value", target.value},
                                      {"correct", target.correct},
                                      {"semantic_dist", target.semantic_dist},
                                      {"mean_prob", target.mean_prob}};
  return out;
}

}  // namespace emocal
