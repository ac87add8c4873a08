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

#include "emocal/emoloop.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "emocal/error.h"
#include "emocal/tsp_kernels.h"

namespace emocal {
namespace {

void Invalid(const std::string& what) { throw Error("invalid_loop", what); }

std::vector<std::vector<double>> DistancesFromArcs(const std::vector<double>& arcs,
                                                   double perimeter) {
  const size_t n = arcs.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + arcs[i];
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  if (perimeter <= 0.0) return dist;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double cw = prefix[j] - prefix[i];
      const double ccw = perimeter - cw;
      const double d = std::clamp(std::min(cw, ccw) / perimeter, 0.0, 0.5);
      dist[i][j] = d;
      dist[j][i] = d;
    }
  }
  return dist;
}

// Rotates to start at the smallest node and picks the direction whose second
// element is smaller.
std::vector<int> Canonicalize(std::vector<int> order) {
  auto min_it = std::min_element(order.begin(), order.end());
  std::rotate(order.begin(), min_it, order.end());
  if (order.size() > 2 && order.back() < order[1]) {
    std::reverse(order.begin() + 1, order.end());
  }
  return order;
}

}  // namespace

EmotionLoop EmotionLoop::FromParts(
    std::vector<std::string> order, std::vector<double> arc_weights,
    std::optional<std::vector<std::vector<double>>> dist,
    bool hierarchical_constrained, std::string taxonomy_name,
    std::map<std::string, std::string> aliases) {
  const size_t n = order.size();
  if (n < 2) Invalid("loop needs at least 2 categories");
  if (arc_weights.size() != n) {
    Invalid("arc_weights has " + std::to_string(arc_weights.size()) +
            " entries for " + std::to_string(n) + " categories");
  }
  EmotionLoop loop;
  for (size_t i = 0; i < n; ++i) {
    const std::string key = NormalizeLabel(order[i]);
    if (key.empty()) Invalid("empty label in order");
    if (!loop.index_.emplace(key, i).second) {
      Invalid("duplicate label '" + order[i] + "'");
    }
  }
  double perimeter = 0.0;
  for (double w : arc_weights) {
    if (!std::isfinite(w) || w < 0.0) {
      Invalid("arc weight must be finite and non-negative");
    }
    perimeter += w;
  }
  auto computed = DistancesFromArcs(arc_weights, perimeter);
  if (dist) {
    const auto& d = *dist;
    if (d.size() != n) Invalid("dist must be " + std::to_string(n) + "x" + std::to_string(n));
    for (size_t i = 0; i < n; ++i) {
      if (d[i].size() != n) Invalid("dist row " + std::to_string(i) + " has wrong length");
    }
    for (size_t i = 0; i < n; ++i) {
      if (d[i][i] != 0.0) Invalid("dist diagonal must be 0");
      for (size_t j = 0; j < n; ++j) {
        if (d[i][j] != d[j][i]) {
          Invalid("dist is not symmetric at (" + std::to_string(i) + "," +
                  std::to_string(j) + ")");
        }
        if (!(d[i][j] >= 0.0 && d[i][j] <= 0.5 + 1e-12)) {
          Invalid("dist entries must lie in [0, 0.5]");
        }
        if (std::abs(d[i][j] - computed[i][j]) > 1e-9) {
          Invalid("dist does not match arc_weights at (" + std::to_string(i) +
                  "," + std::to_string(j) + ")");
        }
      }
    }
    computed = *dist;
  }
  for (const auto& [surface, label] : aliases) {
    if (!loop.index_.contains(NormalizeLabel(label))) {
      Invalid("alias '" + surface + "' targets a label outside the loop");
    }
  }
  loop.order_ = std::move(order);
  loop.arc_weights_ = std::move(arc_weights);
  loop.perimeter_ = perimeter;
  loop.dist_ = std::move(computed);
  loop.hierarchical_constrained_ = hierarchical_constrained;
  loop.taxonomy_name_ = std::move(taxonomy_name);
  loop.matcher_ = LabelMatcher(aliases);
  loop.aliases_ = std::move(aliases);
  return loop;
}

std::optional<size_t> EmotionLoop::IndexOf(std::string_view label) const {
  auto it = index_.find(matcher_.Canonical(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double EmotionLoop::Distance(std::string_view a, std::string_view b) const {
  const auto ia = IndexOf(a);
  if (!ia) throw Error("unknown_label", "label '" + std::string(a) + "' is not in the loop");
  const auto ib = IndexOf(b);
  if (!ib) throw Error("unknown_label", "label '" + std::string(b) + "' is not in the loop");
  return dist_[*ia][*ib];
}

double NormalizedDistance(const EmotionLoop& loop, std::string_view a,
                          std::string_view b) {
  return loop.Distance(a, b);
}

EmotionLoop BuildLoop(const std::vector<LabeledPoint>& points,
                      const std::optional<std::map<std::string, std::string>>& parents,
                      const LoopBuildOptions& options,
                      std::vector<std::string>* warnings) {
  const size_t n = points.size();
  if (n < 2) throw Error("invalid_argument", "a loop needs at least 2 categories");

  // Canonical node numbering by normalized label.
  std::vector<size_t> by_label(n);
  std::iota(by_label.begin(), by_label.end(), size_t{0});
  std::vector<std::string> keys(n);
  for (size_t i = 0; i < n; ++i) keys[i] = NormalizeLabel(points[i].label);
  std::sort(by_label.begin(), by_label.end(),
            [&](size_t a, size_t b) { return keys[a] < keys[b]; });
  for (size_t i = 1; i < n; ++i) {
    if (keys[by_label[i]] == keys[by_label[i - 1]]) {
      throw Error("invalid_argument", "duplicate label '" + points[by_label[i]].label + "'");
    }
  }

  kernels::WeightMatrix w(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double d =
          EuclideanDistance(points[by_label[i]].point, points[by_label[j]].point);
      w(i, j) = d;
      w(j, i) = d;
    }
  }

  kernels::Tour tour;
  const bool constrained = parents.has_value();
  if (constrained) {
    std::map<std::string, std::vector<int>> groups;
    for (size_t i = 0; i < n; ++i) {
      const auto& label = points[by_label[i]].label;
      auto it = parents->find(label);
      if (it == parents->end() || TrimView(it->second).empty()) {
        throw Error("invalid_argument", "category '" + label + "' has no parent");
      }
      groups[NormalizeLabel(it->second)].push_back(static_cast<int>(i));
    }
    std::vector<std::vector<int>> blocks;
    for (auto& [name, members] : groups) blocks.push_back(std::move(members));
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    tour = options.parallel ? kernels::ClusteredCycleParallel(w, blocks)
                            : kernels::ClusteredCycleSerial(w, blocks);
  } else if (n <= kernels::kMaxExactNodes) {
    tour = options.parallel ? kernels::HeldKarpCycleParallel(w)
                            : kernels::HeldKarpCycleSerial(w);
  } else if (options.allow_heuristic) {
    tour = kernels::NearestNeighborTwoOpt(w);
    if (warnings) {
      warnings->push_back("flat taxonomy of " + std::to_string(n) +
                          " categories built heuristically; the loop may be suboptimal");
    }
  } else {
    throw Error("too_large", "exact loop construction supports at most " +
                                 std::to_string(kernels::kMaxExactNodes) +
                                 " flat categories (got " + std::to_string(n) +
                                 "); enable the heuristic to proceed");
  }

  const auto order = Canonicalize(tour.order);
  std::vector<std::string> labels;
  std::vector<double> arcs;
  for (size_t i = 0; i < n; ++i) {
    labels.push_back(points[by_label[order[i]]].label);
    arcs.push_back(w(order[i], order[(i + 1) % n]));
  }
  return EmotionLoop::FromParts(std::move(labels), std::move(arcs), std::nullopt,
                                constrained, options.taxonomy_name, options.aliases);
}

EmotionLoop BuildLoopForTaxonomy(const Taxonomy& taxonomy, const VadLexicon& lexicon,
                                 LoopBuildOptions options,
                                 std::vector<std::string>* warnings) {
  const auto points = ResolvePoints(taxonomy, lexicon);
  if (options.taxonomy_name.empty()) options.taxonomy_name = taxonomy.name;
  if (options.aliases.empty()) options.aliases = taxonomy.aliases;
  std::optional<std::map<std::string, std::string>> parents;
  if (taxonomy.hierarchical) parents = taxonomy.ParentMap();
  return BuildLoop(points, parents, options, warnings);
}

nlohmann::ordered_json LoopToJson(const EmotionLoop& loop) {
  nlohmann::ordered_json doc;
  doc["taxonomy_name"] = loop.taxonomy_name();
  doc["order"] = loop.order();
  doc["arc_weights"] = loop.arc_weights();
  doc["perimeter"] = loop.perimeter();
  doc["dist"] = loop.dist();
  doc["hierarchical_constrained"] = loop.hierarchical_constrained();
  if (!loop.matcher().aliases().empty()) {
    nlohmann::ordered_json aliases = nlohmann::ordered_json::object();
    for (const auto& [k, v] : loop.matcher().aliases()) aliases[k] = v;
    doc["aliases"] = aliases;
  }
  return doc;
}

EmotionLoop LoopFromJson(const nlohmann::json& doc) {
  try {
    auto order = doc.at("order").get<std::vector<std::string>>();
    auto arcs = doc.at("arc_weights").get<std::vector<double>>();
    std::optional<std::vector<std::vector<double>>> dist;
    if (doc.contains("dist")) dist = doc.at("dist").get<std::vector<std::vector<double>>>();
    const bool constrained = doc.value("hierarchical_constrained", false);
    std::string name = doc.value("taxonomy_name", std::string());
    std::map<std::string, std::string> aliases;
    if (doc.contains("aliases")) {
      aliases = doc.at("aliases").get<std::map<std::string, std::string>>();
    }
    auto loop = EmotionLoop::FromParts(std::move(order), std::move(arcs), std::move(dist),
                                       constrained, std::move(name), std::move(aliases));
    if (doc.contains("perimeter")) {
      const double p = doc.at("perimeter").get<double>();
      if (std::abs(p - loop.perimeter()) > 1e-9 * std::max(1.0, loop.perimeter())) {
        Invalid("perimeter does not equal the sum of arc_weights");
      }
    }
    return loop;
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid_loop", std::string("loop document: ") + e.what());
  }
}

EmotionLoop LoadLoop(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot read " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("parse_error", path + ": " + e.what());
  }
  return LoopFromJson(doc);
}

void SaveLoop(const EmotionLoop& loop, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write " + path);
  out << LoopToJson(loop).dump(2) << "\n";
}

}  // namespace emocal
