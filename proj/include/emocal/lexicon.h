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

#ifndef EMOCAL_LEXICON_H_
#define EMOCAL_LEXICON_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emocal {

struct VadPoint {
  double valence = 0.0;
  double arousal = 0.0;
  double dominance = 0.0;

  friend bool operator==(const VadPoint&, const VadPoint&) = default;
};

double EuclideanDistance(const VadPoint& a, const VadPoint& b);

// Word -> VAD lookup table. Keys are lowercase and unique.
class VadLexicon {
 public:
  VadLexicon() = default;

  // Inserts or overwrites. Returns false when the key already existed.
  bool Insert(std::string_view word, const VadPoint& point);

  // Case-folded lookup; absence is std::nullopt, never a default point.
  std::optional<VadPoint> Lookup(std::string_view word) const;

  size_t size() const { return entries_.size(); }
  const std::map<std::string, VadPoint>& entries() const { return entries_; }

  const std::string& source_path() const { return source_path_; }
  // Number of rows that overwrote an earlier row with the same key.
  size_t duplicate_rows() const { return duplicate_rows_; }

 private:
  friend VadLexicon ParseLexicon(std::string_view text, std::string source_path);

  std::map<std::string, VadPoint> entries_;
  std::string source_path_;
  size_t duplicate_rows_ = 0;
};

// Reads `word<TAB>valence<TAB>arousal<TAB>dominance` rows. Lines without a
// tab are split on runs of whitespace. A first row whose second field reads
// "valence" (any case) is treated as a header (the NRC releases ship one).
VadLexicon LoadLexicon(const std::filesystem::path& path);
VadLexicon ParseLexicon(std::string_view text, std::string source_path = {});

struct CategoryDef {
  std::string label;
  std::string lexicon_key;
  std::optional<std::string> parent;
};

struct Taxonomy {
  std::string name;
  std::vector<CategoryDef> categories;
  bool hierarchical = false;
  // Surface form -> canonical label, both as written in the file.
  std::map<std::string, std::string> aliases;

  std::vector<std::string> Labels() const;
  // label -> parent, empty for flat taxonomies.
  std::map<std::string, std::string> ParentMap() const;
};

// Validates and derives `hierarchical`. Throws Error("invalid_taxonomy").
Taxonomy ValidateTaxonomy(Taxonomy taxonomy);
Taxonomy LoadTaxonomy(const std::filesystem::path& path);
Taxonomy ParseTaxonomy(std::string_view json_text);

struct LabeledPoint {
  std::string label;
  VadPoint point;
};

// Taxonomy order is preserved. Every missing key is listed in one error.
std::vector<LabeledPoint> ResolvePoints(const Taxonomy& taxonomy,
                                        const VadLexicon& lexicon);

}  // namespace emocal

#endif  // EMOCAL_LEXICON_H_
