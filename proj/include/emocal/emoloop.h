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

#ifndef EMOCAL_EMOLOOP_H_
#define EMOCAL_EMOLOOP_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emocal/labels.h"
#include "emocal/lexicon.h"
#include "json.hpp"

namespace emocal {

// A Hamiltonian cycle over a taxonomy's categories embedded on a circle with
// arc lengths proportional to the VAD distance between neighbours.
//
// `order[i]` is followed by `order[i + 1]` (cyclically); `arc_weights[i]` is
// the length of that arc. `dist` is indexed by positions in `order`.
class EmotionLoop {
 public:
  EmotionLoop() = default;

  // Validates every invariant and derives the label index. `dist` may be
  // omitted, in which case it is computed from the arcs. Throws
  // Error("invalid_loop").
  static EmotionLoop FromParts(std::vector<std::string> order,
                               std::vector<double> arc_weights,
                               std::optional<std::vector<std::vector<double>>> dist,
                               bool hierarchical_constrained,
                               std::string taxonomy_name = {},
                               std::map<std::string, std::string> aliases = {});

  const std::vector<std::string>& order() const { return order_; }
  const std::vector<double>& arc_weights() const { return arc_weights_; }
  double perimeter() const { return perimeter_; }
  const std::vector<std::vector<double>>& dist() const { return dist_; }
  bool hierarchical_constrained() const { return hierarchical_constrained_; }
  const std::string& taxonomy_name() const { return taxonomy_name_; }
  size_t size() const { return order_.size(); }

  // Label matching used by everything that compares answers to this loop.
  const LabelMatcher& matcher() const { return matcher_; }

  // Position of `label` after normalization and alias resolution.
  std::optional<size_t> IndexOf(std::string_view label) const;
  bool Contains(std::string_view label) const { return IndexOf(label).has_value(); }

  // Perimeter-normalized circular distance in [0, 0.5]. Throws
  // Error("unknown_label").
  double Distance(std::string_view a, std::string_view b) const;

  friend bool operator==(const EmotionLoop& a, const EmotionLoop& b) {
    return a.order_ == b.order_ && a.arc_weights_ == b.arc_weights_ &&
           a.perimeter_ == b.perimeter_ && a.dist_ == b.dist_ &&
           a.hierarchical_constrained_ == b.hierarchical_constrained_ &&
           a.taxonomy_name_ == b.taxonomy_name_ &&
           a.matcher_.aliases() == b.matcher_.aliases();
  }

 private:
  std::vector<std::string> order_;
  std::vector<double> arc_weights_;
  double perimeter_ = 0.0;
  std::vector<std::vector<double>> dist_;
  bool hierarchical_constrained_ = false;
  std::string taxonomy_name_;
  std::map<std::string, std::string> aliases_;
  LabelMatcher matcher_;
  std::map<std::string, size_t> index_;
};

struct LoopBuildOptions {
  // Allows nearest-neighbour + 2-opt for flat taxonomies beyond the exact
  // bound. The result is then not guaranteed optimal.
  bool allow_heuristic = false;
  // Use the OpenMP kernels (results are identical to the serial ones).
  bool parallel = true;
  std::string taxonomy_name;
  std::map<std::string, std::string> aliases;
};

// Minimum-perimeter cycle over the points; with `parents`, restricted to
// cycles in which each parent's children are contiguous. The output is
// canonical and independent of the input order: categories are indexed by
// their normalized label, the cycle starts at the smallest index and runs
// in the direction whose second element is smaller. `warnings` receives a
// note when the heuristic path is taken.
EmotionLoop BuildLoop(const std::vector<LabeledPoint>& points,
                      const std::optional<std::map<std::string, std::string>>& parents,
                      const LoopBuildOptions& options = {},
                      std::vector<std::string>* warnings = nullptr);

// Resolves the taxonomy against the lexicon and builds its loop, honouring
// the taxonomy hierarchy.
EmotionLoop BuildLoopForTaxonomy(const Taxonomy& taxonomy, const VadLexicon& lexicon,
                                 LoopBuildOptions options = {},
                                 std::vector<std::string>* warnings = nullptr);

// min(clockwise, counter-clockwise arc sum) / perimeter; 0 when the
// perimeter is 0.
double NormalizedDistance(const EmotionLoop& loop, std::string_view a,
                          std::string_view b);

nlohmann::ordered_json LoopToJson(const EmotionLoop& loop);
EmotionLoop LoopFromJson(const nlohmann::json& doc);
EmotionLoop LoadLoop(const std::string& path);
void SaveLoop(const EmotionLoop& loop, const std::string& path);

}  // namespace emocal

#endif  // EMOCAL_EMOLOOP_H_
