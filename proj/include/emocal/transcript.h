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

#ifndef EMOCAL_TRANSCRIPT_H_
#define EMOCAL_TRANSCRIPT_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace emocal {

enum class StepKind { kElement = 0, kHuman, kContext, kInteraction, kAnalysis };

inline constexpr size_t kNumSteps = 5;
inline constexpr std::array<std::string_view, kNumSteps> kStepTags = {
    "element", "human", "context", "interaction", "analysis"};

// A tagged response: five reasoning steps inside <think>, an <answer>, and
// an optional trailing <confidence>.
struct Transcript {
  std::string raw;
  std::array<std::optional<std::string>, kNumSteps> steps;
  std::optional<std::string> answer;
  // Rounded to two decimals when parsed.
  std::optional<double> confidence;
  std::optional<std::vector<double>> token_probs;
  std::optional<double> mean_prob;

  std::optional<std::string>& step(StepKind k) { return steps[static_cast<size_t>(k)]; }
  const std::optional<std::string>& step(StepKind k) const {
    return steps[static_cast<size_t>(k)];
  }
};

// Violation codes are stable strings, e.g. "missing_step:interaction",
// "confidence_out_of_range".
struct FormatVerdict {
  bool ok = false;
  std::vector<std::string> violations;

  bool Has(std::string_view code) const;
};

struct ParseResult {
  Transcript transcript;
  FormatVerdict verdict;
  // Byte offset just past the first top-level </answer>, if any.
  std::optional<size_t> answer_end;
  bool has_confidence_tag = false;
};

// Validates the tagged layout and extracts every recoverable field. With
// `strict`, a failed verdict throws Error("format_violation") whose message
// lists the violations.
ParseResult ParseTranscript(std::string_view raw, bool strict = false);

// Canonical layout, one tag block per line; the confidence (if any) is
// rendered with two decimals and closes the text. Throws
// Error("missing_field") / Error("invalid_field").
std::string SerializeTranscript(const Transcript& t);

}  // namespace emocal

#endif  // EMOCAL_TRANSCRIPT_H_
