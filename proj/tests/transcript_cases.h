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


// Shared transcript fixtures: one well-formed response, single-defect
// mutations of it, and random step text.

#ifndef EMOCAL_TESTS_TRANSCRIPT_CASES_H_
#define EMOCAL_TESTS_TRANSCRIPT_CASES_H_

#include <random>
#include <string>
#include <vector>

namespace cases {

inline const std::string kSteps =
    "<element>A dog runs on a beach.</element>\n"
    "<human>No people are visible.</human>\n"
    "<context>Sunny day, open sea.</context>\n"
    "<interaction>The dog chases a ball.</interaction>\n"
    "<analysis>Bright, playful scene.</analysis>\n";

inline const std::string kGood = "<think>\n" + kSteps + "</think>\n<answer>amusement</answer>\n" +
                          "<confidence>0.87</confidence>";

// An absent `from` leaves the text intact, which the callers then report as
// a mutation that failed to flip the verdict.
inline std::string Replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  if (at == std::string::npos) return s;
  return s.replace(at, from.size(), to);
}

struct Mutation {
  const char* name;
  std::string text;
  const char* code;
};

inline std::vector<Mutation> Mutations() {
  const std::string think = "<think>\n" + kSteps + "</think>\n";
  const std::string answer = "<answer>amusement</answer>\n";
  const std::string conf = "<confidence>0.87</confidence>";
  return {
      {"drop think tags", kSteps + answer + conf, "missing_think"},
      {"duplicate think", think + think + answer + conf, "duplicate_think"},
      {"nested think", Replace(kGood, "<human>", "<think><human>"), "nested_think"},
      {"drop element", Replace(kGood, "<element>A dog runs on a beach.</element>\n", ""),
       "missing_step:element"},
      {"drop human", Replace(kGood, "<human>No people are visible.</human>\n", ""),
       "missing_step:human"},
      {"drop context", Replace(kGood, "<context>Sunny day, open sea.</context>\n", ""),
       "missing_step:context"},
      {"drop interaction",
       Replace(kGood, "<interaction>The dog chases a ball.</interaction>\n", ""),
       "missing_step:interaction"},
      {"drop analysis", Replace(kGood, "<analysis>Bright, playful scene.</analysis>\n", ""),
       "missing_step:analysis"},
      {"duplicate element",
       Replace(kGood, "<human>", "<element>Twice.</element><human>"), "duplicate_step:element"},
      {"empty human", Replace(kGood, "No people are visible.", "  \n "), "empty_step:human"},
      {"swap context and interaction",
       "<think><element>e</element><human>h</human><interaction>i</interaction>"
       "<context>c</context><analysis>a</analysis></think>" + answer + conf,
       "step_order"},
      {"drop answer", think + conf, "missing_answer"},
      {"duplicate answer", think + answer + answer + conf, "duplicate_answer"},
      {"empty answer", Replace(kGood, "amusement", " "), "empty_answer"},
      {"answer before think", answer + think + conf, "answer_before_think"},
      {"duplicate confidence", kGood + conf, "duplicate_confidence"},
      {"confidence before answer", think + conf + answer, "confidence_before_answer"},
      {"confidence not numeric", Replace(kGood, "0.87", "high"), "confidence_not_numeric"},
      {"confidence exponent", Replace(kGood, "0.87", "8.7e-1"), "confidence_not_numeric"},
      {"confidence above one", Replace(kGood, "0.87", "1.5"), "confidence_out_of_range"},
      {"confidence negative", Replace(kGood, "0.87", "-0.1"), "confidence_out_of_range"},
      {"trailing junk", kGood + "\nHope this helps!", "stray_text"},
      {"leading junk", "Sure. " + kGood, "stray_text"},
      {"unclosed answer", Replace(kGood, "</answer>", ""), "unclosed:answer"},
      {"unclosed think", Replace(kGood, "</think>", ""), "unclosed:think"},
      {"stray close", kGood + "</element>", "unmatched_close:element"},
      {"answer inside think", Replace(kGood, "</analysis>", "</analysis><answer>x</answer>"),
       "tag_inside_think:answer"},
      {"step outside think", kGood + "<element>late</element>", "step_outside_think:element"},
      {"wrong-case tag", Replace(Replace(kGood, "<answer>", "<ANSWER>"), "</answer>", "</ANSWER>"),
       "missing_answer"},
      {"empty response", "", "empty_response"},
      {"whitespace response", " \n\t ", "empty_response"},
  };
}

// Words over an alphabet that cannot spell any tag name.
inline std::string RandomText(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "x", "yz", "q", "<", ">", "/", "</", " ", "\n", "\t", ",", ".", "1", "0.5", "\xc3\xa9",
      "\xe2\x9c\x93"};
  std::uniform_int_distribution<size_t> len(1, 12);
  std::uniform_int_distribution<size_t> pick(0, pieces.size() - 1);
  std::string s;
  while (true) {
    s.clear();
    const size_t n = len(rng);
    for (size_t i = 0; i < n; ++i) s += pieces[pick(rng)];
    bool blank = true;
    for (char c : s) blank &= (c == ' ' || c == '\n' || c == '\t');
    if (!blank) return s;
  }
}

}  // namespace cases

#endif  // EMOCAL_TESTS_TRANSCRIPT_CASES_H_
