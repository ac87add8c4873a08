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

#include "emocal/labels.h"

#include <cctype>

namespace emocal {

std::string_view TrimView(std::string_view text) {
  const auto is_space = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

std::string NormalizeLabel(std::string_view label) {
  std::string out(TrimView(label));
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

LabelMatcher::LabelMatcher(const std::map<std::string, std::string>& aliases) {
  for (const auto& [surface, label] : aliases) {
    aliases_[NormalizeLabel(surface)] = NormalizeLabel(label);
  }
}

std::string LabelMatcher::Canonical(std::string_view label) const {
  std::string key = NormalizeLabel(label);
  if (auto it = aliases_.find(key); it != aliases_.end()) return it->second;
  return key;
}

}  // namespace emocal
