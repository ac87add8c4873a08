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

#ifndef EMOCAL_LABELS_H_
#define EMOCAL_LABELS_H_

#include <map>
#include <string>
#include <string_view>

namespace emocal {

// Trims ASCII whitespace and lowercases ASCII letters.
std::string NormalizeLabel(std::string_view label);

std::string_view TrimView(std::string_view text);

// Case-insensitive, trim-insensitive label equality with an optional alias
// table mapping surface forms to canonical labels. Keys and values of the
// alias table are stored normalized.
class LabelMatcher {
 public:
  LabelMatcher() = default;
  explicit LabelMatcher(const std::map<std::string, std::string>& aliases);

  // Normalized canonical form of `label` after alias resolution.
  std::string Canonical(std::string_view label) const;

  bool Match(std::string_view a, std::string_view b) const {
    return Canonical(a) == Canonical(b);
  }

  const std::map<std::string, std::string>& aliases() const { return aliases_; }

 private:
  std::map<std::string, std::string> aliases_;
};

}  // namespace emocal

#endif  // EMOCAL_LABELS_H_
