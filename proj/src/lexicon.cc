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

#include "emocal/lexicon.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "emocal/error.h"
#include "emocal/labels.h"
#include "emocal/numeric.h"
#include "json.hpp"

namespace emocal {
namespace {

std::vector<std::string_view> SplitRow(std::string_view line) {
  std::vector<std::string_view> fields;
  if (line.find('\t') != std::string_view::npos) {
    size_t start = 0;
    while (true) {
      const size_t tab = line.find('\t', start);
      fields.push_back(TrimView(line.substr(start, tab - start)));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    return fields;
  }
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

double EuclideanDistance(const VadPoint& a, const VadPoint& b) {
  const double dv = a.valence - b.valence;
  const double da = a.arousal - b.arousal;
  const double dd = a.dominance - b.dominance;
  return std::sqrt(dv * dv + da * da + dd * dd);
}

bool VadLexicon::Insert(std::string_view word, const VadPoint& point) {
  auto [it, inserted] = entries_.insert_or_assign(NormalizeLabel(word), point);
  (void)it;
  return inserted;
}

std::optional<VadPoint> VadLexicon::Lookup(std::string_view word) const {
  auto it = entries_.find(NormalizeLabel(word));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

VadLexicon ParseLexicon(std::string_view text, std::string source_path) {
  VadLexicon lex;
  lex.source_path_ = std::move(source_path);
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
    text.remove_prefix(3);
  }
  size_t line_no = 0;
  bool first_row = true;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (TrimView(line).empty()) continue;

    const auto fields = SplitRow(line);
    const std::string where = "line " + std::to_string(line_no);
    if (first_row) {
      first_row = false;
      if (fields.size() >= 2 && NormalizeLabel(fields[1]) == "valence") continue;
    }
    if (fields.size() != 4) {
      throw Error("parse_error", where + ": expected 4 fields, got " +
                                     std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw Error("parse_error", where + ": empty word");
    double values[3];
    for (int k = 0; k < 3; ++k) {
      auto v = ParseReal(fields[k + 1]);
      if (!v) {
        throw Error("parse_error", where + ": non-numeric value '" +
                                       std::string(fields[k + 1]) + "'");
      }
      values[k] = *v;
    }
    if (!lex.Insert(fields[0], {values[0], values[1], values[2]})) {
      ++lex.duplicate_rows_;
    }
  }
  return lex;
}

VadLexicon LoadLexicon(const std::filesystem::path& path) {
  return ParseLexicon(ReadFile(path), path.string());
}

std::vector<std::string> Taxonomy::Labels() const {
  std::vector<std::string> out;
  out.reserve(categories.size());
  for (const auto& c : categories) out.push_back(c.label);
  return out;
}

std::map<std::string, std::string> Taxonomy::ParentMap() const {
  std::map<std::string, std::string> out;
  if (!hierarchical) return out;
  for (const auto& c : categories) out[c.label] = *c.parent;
  return out;
}

Taxonomy ValidateTaxonomy(Taxonomy taxonomy) {
  if (taxonomy.categories.size() < 2) {
    throw Error("invalid_taxonomy", "taxonomy needs at least 2 categories");
  }
  std::set<std::string> seen;
  size_t with_parent = 0;
  for (auto& c : taxonomy.categories) {
    if (TrimView(c.label).empty()) {
      throw Error("invalid_taxonomy", "empty category label");
    }
    if (!seen.insert(NormalizeLabel(c.label)).second) {
      throw Error("invalid_taxonomy", "duplicate label '" + c.label + "'");
    }
    if (c.lexicon_key.empty()) {
      if (TrimView(c.label).find_first_of(" \t") != std::string_view::npos) {
        throw Error("invalid_taxonomy", "multi-word label '" + c.label +
                                            "' needs an explicit lexicon_key");
      }
      c.lexicon_key = c.label;
    }
    c.lexicon_key = NormalizeLabel(c.lexicon_key);
    if (c.parent && TrimView(*c.parent).empty()) c.parent.reset();
    if (c.parent) ++with_parent;
  }
  if (with_parent != 0 && with_parent != taxonomy.categories.size()) {
    throw Error("invalid_taxonomy", "inconsistent hierarchy: " +
                                        std::to_string(with_parent) + " of " +
                                        std::to_string(taxonomy.categories.size()) +
                                        " categories declare a parent");
  }
  taxonomy.hierarchical = with_parent != 0;
  for (const auto& [surface, label] : taxonomy.aliases) {
    if (!seen.contains(NormalizeLabel(label))) {
      throw Error("invalid_taxonomy",
                  "alias '" + surface + "' targets unknown label '" + label + "'");
    }
  }
  return taxonomy;
}

Taxonomy ParseTaxonomy(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("parse_error", std::string("taxonomy: ") + e.what());
  }
  Taxonomy tax;
  try {
    tax.name = doc.value("name", std::string());
    for (const auto& c : doc.at("categories")) {
      CategoryDef def;
      def.label = c.at("label").get<std::string>();
      def.lexicon_key = c.value("lexicon_key", std::string());
      if (c.contains("parent") && !c.at("parent").is_null()) {
        def.parent = c.at("parent").get<std::string>();
      }
      tax.categories.push_back(std::move(def));
    }
    if (doc.contains("aliases")) {
      tax.aliases = doc.at("aliases").get<std::map<std::string, std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse_error", std::string("taxonomy: ") + e.what());
  }
  return ValidateTaxonomy(std::move(tax));
}

Taxonomy LoadTaxonomy(const std::filesystem::path& path) {
  return ParseTaxonomy(ReadFile(path));
}

std::vector<LabeledPoint> ResolvePoints(const Taxonomy& taxonomy,
                                        const VadLexicon& lexicon) {
  std::vector<LabeledPoint> out;
  std::vector<std::string> missing;
  for (const auto& c : taxonomy.categories) {
    if (auto p = lexicon.Lookup(c.lexicon_key)) {
      out.push_back({c.label, *p});
    } else {
      missing.push_back(c.lexicon_key);
    }
  }
  if (!missing.empty()) {
    std::string msg = "lexicon is missing keys:";
    for (const auto& k : missing) msg += " " + k;
    throw Error("missing_keys", msg);
  }
  return out;
}

}  // namespace emocal
