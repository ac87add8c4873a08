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

#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "emocal/error.h"
#include "emocal/labels.h"
#include "emocal/numeric.h"
#include "emocal/transcript.h"
#include "transcript_cases.h"

using namespace emocal;
using namespace cases;

namespace {

std::string Trimmed(const std::string& s) { return std::string(TrimView(s)); }

}  // namespace

TEST_CASE("well-formed transcript") {
  const auto r = ParseTranscript(kGood);
  CHECK(r.verdict.ok);
  CHECK(r.verdict.violations.empty());
  CHECK(r.transcript.confidence == 0.87);
  CHECK(r.transcript.answer == "amusement");
  CHECK(r.transcript.step(StepKind::kInteraction) == "The dog chases a ball.");
  CHECK(r.has_confidence_tag);
  REQUIRE(r.answer_end);
  CHECK(kGood.substr(0, *r.answer_end).ends_with("</answer>"));
}

TEST_CASE("confidence is optional") {
  const auto r = ParseTranscript("<think>" + kSteps + "</think><answer>fear</answer>");
  CHECK(r.verdict.ok);
  CHECK_FALSE(r.transcript.confidence);
  CHECK_FALSE(r.has_confidence_tag);
}

TEST_CASE("confidence parsing re-rounds") {
  CHECK(ParseTranscript(Replace(kGood, "0.87", " 0.875 ")).transcript.confidence == 0.88);
  CHECK(ParseTranscript(Replace(kGood, "0.87", "1")).transcript.confidence == 1.0);
  CHECK(ParseTranscript(Replace(kGood, "0.87", ".5")).transcript.confidence == 0.5);
  CHECK(ParseTranscript(Replace(kGood, "0.87", "0")).verdict.ok);
}

TEST_CASE("reference transcripts") {
  const auto missing = ParseTranscript(
      Replace(kGood, "<interaction>The dog chases a ball.</interaction>\n", ""));
  CHECK_FALSE(missing.verdict.ok);
  CHECK(missing.verdict.Has("missing_step:interaction"));
  const auto range = ParseTranscript(Replace(kGood, "0.87", "1.5"));
  CHECK_FALSE(range.verdict.ok);
  CHECK(range.verdict.Has("confidence_out_of_range"));
  CHECK_FALSE(range.transcript.confidence);
}

TEST_CASE("single-defect mutations flip the verdict") {
  const auto muts = Mutations();
  CHECK(muts.size() >= 20);
  for (const auto& m : muts) {
    CAPTURE(m.name);
    const auto r = ParseTranscript(m.text);
    CHECK_FALSE(r.verdict.ok);
    CHECK(r.verdict.Has(m.code));
  }
}

TEST_CASE("lenient parse recovers fields") {
  const auto r = ParseTranscript(kGood + " trailing");
  CHECK_FALSE(r.verdict.ok);
  CHECK(r.transcript.answer == "amusement");
  CHECK(r.transcript.confidence == 0.87);
  const auto inside = ParseTranscript("<think>" + kSteps + "<answer>fear</answer></think>");
  CHECK(inside.transcript.answer == "fear");
  CHECK_FALSE(inside.verdict.ok);
  const auto unclosed = ParseTranscript("<think><element>e<human>h</think><answer>joy</answer>");
  CHECK(unclosed.transcript.step(StepKind::kElement) == "e");
  CHECK(unclosed.verdict.Has("unclosed:element"));
  CHECK(unclosed.transcript.answer == "joy");
}

TEST_CASE("strict mode throws with the violation list") {
  CHECK_NOTHROW(ParseTranscript(kGood, true));
  try {
    ParseTranscript(Replace(kGood, "0.87", "1.5"), true);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "format_violation");
    CHECK(std::string(e.what()).find("confidence_out_of_range") != std::string::npos);
  }
}

TEST_CASE("whitespace between tags does not matter") {
  const std::string packed =
      "<think><element>a</element><human>b</human><context>c</context>"
      "<interaction>d</interaction><analysis>e</analysis></think><answer>f</answer>"
      "<confidence>0.3</confidence>";
  CHECK(ParseTranscript(packed).verdict.ok);
  std::string spread;
  for (char c : packed) {
    if (c == '<') spread += "\n\t  \r\n";
    spread += c;
  }
  CHECK(ParseTranscript(spread + "\n\n").verdict.ok);
  CHECK(ParseTranscript(spread).transcript.answer == "f");
  CHECK(ParseTranscript("  \n" + kGood + "\n  ").verdict.ok);
}

TEST_CASE("text between steps is tolerated") {
  CHECK(ParseTranscript(Replace(kGood, "<human>", "Next, people: <human>")).verdict.ok);
}

TEST_CASE("non-tag angle brackets are content") {
  const auto r = ParseTranscript(Replace(kGood, "A dog runs", "x < y and <b>bold</b>, <answer"));
  CHECK(r.verdict.ok);
  CHECK(r.transcript.step(StepKind::kElement)->find("<b>bold</b>") != std::string::npos);
}

TEST_CASE("serializer layout") {
  Transcript t;
  for (size_t k = 0; k < kNumSteps; ++k) t.steps[k] = "w";
  t.answer = "joy";
  const auto text = SerializeTranscript(t);
  CHECK(ParseTranscript(text).verdict.ok);
  CHECK(text.ends_with("<answer>joy</answer>"));
  t.confidence = 0.9;
  const auto with_conf = SerializeTranscript(t);
  CHECK(with_conf.ends_with("<confidence>0.90</confidence>"));
  CHECK(ParseTranscript(with_conf).transcript.confidence == 0.9);
}

TEST_CASE("serializer errors") {
  Transcript t;
  for (size_t k = 0; k < kNumSteps; ++k) t.steps[k] = "w";
  auto code = [](const Transcript& tr) {
    try {
      SerializeTranscript(tr);
    } catch (const Error& e) {
      return e.code();
    }
    return std::string();
  };
  CHECK(code(t) == "missing_field");
  t.answer = "joy";
  t.steps[2] = "  ";
  CHECK(code(t) == "missing_field");
  t.steps[2] = "has <answer> inside";
  CHECK(code(t) == "invalid_field");
  t.steps[2] = "w";
  t.confidence = 1.2;
  CHECK(code(t) == "invalid_field");
}

TEST_CASE("round trip over random transcripts") {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 2000; ++rep) {
    Transcript t;
    for (size_t k = 0; k < kNumSteps; ++k) t.steps[k] = RandomText(rng);
    t.answer = RandomText(rng);
    if (rep % 3 != 0) t.confidence = u(rng);
    const auto text = SerializeTranscript(t);
    const auto r = ParseTranscript(text);
    CAPTURE(text);
    REQUIRE(r.verdict.ok);
    for (size_t k = 0; k < kNumSteps; ++k) CHECK(r.transcript.steps[k] == Trimmed(*t.steps[k]));
    CHECK(r.transcript.answer == Trimmed(*t.answer));
    if (t.confidence) {
      CHECK(r.transcript.confidence == Round2(*t.confidence));
    } else {
      CHECK_FALSE(r.transcript.confidence);
    }
    CHECK(SerializeTranscript(r.transcript) == text);
  }
}
