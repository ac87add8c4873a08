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

#include "emocal/transcript.h"

#include <algorithm>

#include "emocal/error.h"
#include "emocal/labels.h"
#include "emocal/numeric.h"

namespace emocal {
namespace {

enum class Tag { kElement = 0, kHuman, kContext, kInteraction, kAnalysis, kThink, kAnswer, kConfidence };

constexpr std::array<std::string_view, 8> kTagNames = {
    "element", "human", "context", "interaction", "analysis", "think", "answer", "confidence"};

bool IsStep(Tag t) { return static_cast<int>(t) < static_cast<int>(kNumSteps); }
std::string Name(Tag t) { return std::string(kTagNames[static_cast<size_t>(t)]); }

struct Token {
  bool is_tag = false;
  Tag tag = Tag::kThink;
  bool closing = false;
  size_t begin = 0;
  size_t end = 0;
};

// Splits `raw` into exact bare tags and the text between them.
std::vector<Token> Tokenize(std::string_view raw) {
  std::vector<Token> tokens;
  size_t text_begin = 0;
  size_t i = 0;
  auto flush_text = [&](size_t upto) {
    if (upto > text_begin) tokens.push_back({false, Tag::kThink, false, text_begin, upto});
  };
  while ((i = raw.find('<', i)) != std::string_view::npos) {
    const bool closing = i + 1 < raw.size() && raw[i + 1] == '/';
    const size_t name_at = i + (closing ? 2 : 1);
    bool matched = false;
    for (size_t t = 0; t < kTagNames.size(); ++t) {
      const auto name = kTagNames[t];
      if (raw.compare(name_at, name.size(), name) == 0 &&
          name_at + name.size() < raw.size() && raw[name_at + name.size()] == '>') {
        flush_text(i);
        const size_t end = name_at + name.size() + 1;
        tokens.push_back({true, static_cast<Tag>(t), closing, i, end});
        text_begin = end;
        i = end;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  flush_text(raw.size());
  return tokens;
}

struct Block {
  Tag tag;
  size_t open_begin = 0;
  size_t content_begin = 0;
  size_t content_end = 0;
  size_t close_end = 0;
  bool closed = false;
  std::vector<Block> children;
};

class Parser {
 public:
  explicit Parser(std::string_view raw) : raw_(raw) {}

  ParseResult Run() {
    BuildBlocks();
    return Check();
  }

 private:
  void Violation(std::string code) {
    if (std::find(violations_.begin(), violations_.end(), code) == violations_.end()) {
      violations_.push_back(std::move(code));
    }
  }

  void Open(const Token& tok) {
    Block b;
    b.tag = tok.tag;
    b.open_begin = tok.begin;
    b.content_begin = tok.end;
    stack_.push_back(std::move(b));
  }

  // Pops the innermost block, ending its content at `content_end`.
  void Close(size_t content_end, size_t close_end, bool closed) {
    Block b = std::move(stack_.back());
    stack_.pop_back();
    b.content_end = content_end;
    b.close_end = close_end;
    b.closed = closed;
    if (!closed) Violation("unclosed:" + Name(b.tag));
    if (stack_.empty()) {
      top_.push_back(std::move(b));
    } else {
      stack_.back().children.push_back(std::move(b));
    }
  }

  void BuildBlocks() {
    for (const Token& tok : Tokenize(raw_)) {
      if (tok.is_tag) has_confidence_tag_ |= tok.tag == Tag::kConfidence;
      Dispatch(tok);
    }
    while (!stack_.empty()) Close(raw_.size(), raw_.size(), false);
  }

  void Dispatch(const Token& tok) {
    if (stack_.empty()) {
      if (!tok.is_tag) {
        if (!TrimView(raw_.substr(tok.begin, tok.end - tok.begin)).empty()) {
          Violation("stray_text");
        }
        return;
      }
      if (tok.closing) {
        Violation("unmatched_close:" + Name(tok.tag));
        return;
      }
      if (IsStep(tok.tag)) Violation("step_outside_think:" + Name(tok.tag));
      Open(tok);
      return;
    }

    Block& top = stack_.back();
    if (top.tag == Tag::kThink) {
      if (!tok.is_tag) return;
      if (tok.closing) {
        if (tok.tag == Tag::kThink) {
          Close(tok.begin, tok.end, true);
        } else {
          Violation("unmatched_close:" + Name(tok.tag));
        }
        return;
      }
      if (tok.tag == Tag::kThink) {
        Violation("nested_think");
        return;
      }
      if (!IsStep(tok.tag)) Violation("tag_inside_think:" + Name(tok.tag));
      Open(tok);
      return;
    }

    // Inside a leaf block.
    if (!tok.is_tag) return;
    if (tok.closing && tok.tag == top.tag) {
      Close(tok.begin, tok.end, true);
      return;
    }
    const bool closes_ancestor =
        tok.closing && stack_.size() > 1 && stack_[stack_.size() - 2].tag == tok.tag;
    if (!tok.closing || closes_ancestor) {
      if (tok.tag == Tag::kThink && !tok.closing) Violation("nested_think");
      Close(tok.begin, tok.begin, false);
      Dispatch(tok);
      return;
    }
    Violation("unmatched_close:" + Name(tok.tag));
  }

  std::string Content(const Block& b) const {
    return std::string(TrimView(raw_.substr(b.content_begin, b.content_end - b.content_begin)));
  }

  ParseResult Check() {
    ParseResult result;
    Transcript& t = result.transcript;
    t.raw = std::string(raw_);
    if (TrimView(raw_).empty()) Violation("empty_response");

    std::vector<const Block*> thinks, answers, confidences, misplaced_answers;
    for (const Block& b : top_) {
      if (b.tag == Tag::kThink) thinks.push_back(&b);
      if (b.tag == Tag::kAnswer) answers.push_back(&b);
      if (b.tag == Tag::kConfidence) confidences.push_back(&b);
      if (b.tag == Tag::kThink) {
        for (const Block& c : b.children) {
          if (c.tag == Tag::kAnswer) misplaced_answers.push_back(&c);
          if (c.tag == Tag::kConfidence) confidences.push_back(&c);
        }
      }
    }

    size_t think_end = 0;
    if (thinks.empty()) Violation("missing_think");
    if (thinks.size() > 1) Violation("duplicate_think");
    if (!thinks.empty()) {
      const Block& think = *thinks.front();
      think_end = think.close_end;
      std::array<int, kNumSteps> count{};
      std::vector<size_t> seen_order;
      for (const Block& c : think.children) {
        if (!IsStep(c.tag)) continue;
        const auto k = static_cast<size_t>(c.tag);
        if (count[k]++ == 0) {
          seen_order.push_back(k);
          std::string body = Content(c);
          if (body.empty()) {
            Violation("empty_step:" + Name(c.tag));
          } else {
            t.steps[k] = std::move(body);
          }
        }
      }
      for (size_t k = 0; k < kNumSteps; ++k) {
        if (count[k] == 0) Violation("missing_step:" + std::string(kStepTags[k]));
        if (count[k] > 1) Violation("duplicate_step:" + std::string(kStepTags[k]));
      }
      if (!std::is_sorted(seen_order.begin(), seen_order.end())) Violation("step_order");
    }

    if (answers.empty()) Violation("missing_answer");
    if (answers.size() > 1) Violation("duplicate_answer");
    size_t answer_end = 0;
    if (!answers.empty()) {
      const Block& a = *answers.front();
      answer_end = a.close_end;
      result.answer_end = a.close_end;
      std::string body = Content(a);
      if (body.empty()) {
        Violation("empty_answer");
      } else {
        t.answer = std::move(body);
      }
      if (!thinks.empty() && a.open_begin < think_end) Violation("answer_before_think");
    } else if (!misplaced_answers.empty()) {
      std::string body = Content(*misplaced_answers.front());
      if (!body.empty()) t.answer = std::move(body);
    }

    if (confidences.size() > 1) Violation("duplicate_confidence");
    for (size_t i = 0; i < confidences.size(); ++i) {
      const Block& c = *confidences[i];
      if (i == 0 && (answers.empty() || c.open_begin < answer_end)) {
        Violation("confidence_before_answer");
      }
      const auto value = ParseDecimal(Content(c));
      if (!value) {
        if (i == 0) Violation("confidence_not_numeric");
        continue;
      }
      if (*value < 0.0 || *value > 1.0) {
        if (i == 0) Violation("confidence_out_of_range");
        continue;
      }
      if (!t.confidence) t.confidence = Round2(*value);
    }

    result.has_confidence_tag = has_confidence_tag_;
    result.verdict.violations = std::move(violations_);
    result.verdict.ok = result.verdict.violations.empty();
    return result;
  }

  std::string_view raw_;
  std::vector<Block> stack_;
  std::vector<Block> top_;
  std::vector<std::string> violations_;
  bool has_confidence_tag_ = false;
};

bool ContainsTag(std::string_view text) {
  for (const Token& tok : Tokenize(text)) {
    if (tok.is_tag) return true;
  }
  return false;
}

}  // namespace

bool FormatVerdict::Has(std::string_view code) const {
  return std::find(violations.begin(), violations.end(), code) != violations.end();
}

ParseResult ParseTranscript(std::string_view raw, bool strict) {
  ParseResult result = Parser(raw).Run();
  if (strict && !result.verdict.ok) {
    std::string msg = "format violations:";
    for (const auto& v : result.verdict.violations) msg += " " + v;
    throw Error("format_violation", msg);
  }
  return result;
}

std::string SerializeTranscript(const Transcript& t) {
  auto field = [](const std::optional<std::string>& value, std::string_view name) {
    if (!value || TrimView(*value).empty()) {
      throw Error("missing_field", "transcript has no " + std::string(name));
    }
    if (ContainsTag(*value)) {
      throw Error("invalid_field", std::string(name) + " contains a reserved tag");
    }
    return std::string(TrimView(*value));
  };
  std::string out = "<think>\n";
  for (size_t k = 0; k < kNumSteps; ++k) {
    const std::string tag(kStepTags[k]);
    out += "<" + tag + ">" + field(t.steps[k], tag) + "</" + tag + ">\n";
  }
  out += "</think>\n<answer>" + field(t.answer, "answer") + "</answer>";
  if (t.confidence) {
    if (!(*t.confidence >= 0.0 && *t.confidence <= 1.0)) {
      throw Error("invalid_field", "confidence must lie in [0, 1]");
    }
    out += "\n<confidence>" + FormatFixed2(Round2(*t.confidence)) + "</confidence>";
  }
  return out;
}

}  // namespace emocal
