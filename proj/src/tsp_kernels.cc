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

#include "emocal/tsp_kernels.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>

#include "emocal/error.h"

namespace emocal::kernels {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr size_t kMaxBlocks = 16;

// Masks of `bits` bits grouped by popcount; layers[c] holds every mask with
// c set bits in increasing order.
std::vector<std::vector<uint32_t>> MaskLayers(size_t bits) {
  std::vector<std::vector<uint32_t>> layers(bits + 1);
  const uint32_t limit = uint32_t{1} << bits;
  for (uint32_t mask = 0; mask < limit; ++mask) {
    layers[std::popcount(mask)].push_back(mask);
  }
  return layers;
}

// Held-Karp over nodes 1..n-1 with node 0 as the fixed start. Bit j of a
// mask stands for node j + 1.
class FlatHeldKarp {
 public:
  explicit FlatHeldKarp(const WeightMatrix& w)
      : w_(w),
        m_(w.size() - 1),
        cost_((size_t{1} << m_) * m_, kInf),
        parent_((size_t{1} << m_) * m_, -1) {}

  void Cell(uint32_t mask, size_t j) {
    if (((mask >> j) & 1u) == 0) return;
    const uint32_t rest = mask ^ (uint32_t{1} << j);
    const size_t at = Idx(mask, j);
    if (rest == 0) {
      cost_[at] = w_(0, j + 1);
      return;
    }
    double best = kInf;
    int arg = -1;
    for (size_t k = 0; k < m_; ++k) {
      if (((rest >> k) & 1u) == 0) continue;
      const double c = cost_[Idx(rest, k)] + w_(k + 1, j + 1);
      if (c < best) {
        best = c;
        arg = static_cast<int>(k);
      }
    }
    cost_[at] = best;
    parent_[at] = static_cast<int8_t>(arg);
  }

  void RunSerial() {
    const uint32_t limit = uint32_t{1} << m_;
    for (uint32_t mask = 1; mask < limit; ++mask) {
      for (size_t j = 0; j < m_; ++j) Cell(mask, j);
    }
  }

  void RunParallel() {
    const auto layers = MaskLayers(m_);
    for (size_t c = 1; c <= m_; ++c) {
      const auto& layer = layers[c];
      const long count = static_cast<long>(layer.size());
#pragma omp parallel for schedule(static)
      for (long i = 0; i < count; ++i) {
        for (size_t j = 0; j < m_; ++j) Cell(layer[i], j);
      }
    }
  }

  Tour Extract() const {
    const uint32_t full = (uint32_t{1} << m_) - 1;
    double best = kInf;
    size_t last = 0;
    for (size_t j = 0; j < m_; ++j) {
      const double c = cost_[Idx(full, j)] + w_(j + 1, 0);
      if (c < best) {
        best = c;
        last = j;
      }
    }
    Tour tour;
    tour.cost = best;
    std::vector<int> rev;
    uint32_t mask = full;
    int j = static_cast<int>(last);
    while (j >= 0) {
      rev.push_back(j + 1);
      const int p = parent_[Idx(mask, static_cast<size_t>(j))];
      mask ^= uint32_t{1} << j;
      j = p;
    }
    tour.order.push_back(0);
    tour.order.insert(tour.order.end(), rev.rbegin(), rev.rend());
    return tour;
  }

 private:
  size_t Idx(uint32_t mask, size_t j) const { return size_t{mask} * m_ + j; }

  const WeightMatrix& w_;
  size_t m_;
  std::vector<double> cost_;
  std::vector<int8_t> parent_;
};

void CheckFlat(const WeightMatrix& w) {
  if (w.size() < 2) throw Error("invalid_argument", "cycle needs >= 2 nodes");
  if (w.size() > kMaxExactNodes) {
    throw Error("too_large", "exact solver supports at most " +
                                 std::to_string(kMaxExactNodes) + " nodes, got " +
                                 std::to_string(w.size()));
  }
}

template <bool kParallel>
Tour HeldKarp(const WeightMatrix& w) {
  CheckFlat(w);
  FlatHeldKarp dp(w);
  if constexpr (kParallel) {
    dp.RunParallel();
  } else {
    dp.RunSerial();
  }
  return dp.Extract();
}

// Minimum Hamiltonian paths inside one block for every (entry, exit) pair.
struct BlockPaths {
  std::vector<int> members;
  std::vector<double> cost;               // k * k, entry-major
  std::vector<std::vector<int>> path;     // k * k global node sequences

  size_t k() const { return members.size(); }
  double Cost(size_t s, size_t t) const { return cost[s * k() + t]; }
  const std::vector<int>& Path(size_t s, size_t t) const {
    return path[s * k() + t];
  }
};

BlockPaths SolveBlock(const WeightMatrix& w, const std::vector<int>& members) {
  BlockPaths out;
  out.members = members;
  const size_t k = members.size();
  out.cost.assign(k * k, kInf);
  out.path.assign(k * k, {});
  if (k == 1) {
    out.cost[0] = 0.0;
    out.path[0] = {members[0]};
    return out;
  }
  const uint32_t limit = uint32_t{1} << k;
  std::vector<double> dp(size_t{limit} * k);
  std::vector<int8_t> par(size_t{limit} * k);
  for (size_t s = 0; s < k; ++s) {
    std::fill(dp.begin(), dp.end(), kInf);
    std::fill(par.begin(), par.end(), int8_t{-1});
    const uint32_t start = uint32_t{1} << s;
    dp[start * k + s] = 0.0;
    for (uint32_t mask = 1; mask < limit; ++mask) {
      if ((mask & start) == 0 || mask == start) continue;
      for (size_t j = 0; j < k; ++j) {
        if (j == s || ((mask >> j) & 1u) == 0) continue;
        const uint32_t rest = mask ^ (uint32_t{1} << j);
        double best = kInf;
        int arg = -1;
        for (size_t q = 0; q < k; ++q) {
          if (((rest >> q) & 1u) == 0) continue;
          const double prev = dp[size_t{rest} * k + q];
          if (prev == kInf) continue;
          const double c = prev + w(members[q], members[j]);
          if (c < best) {
            best = c;
            arg = static_cast<int>(q);
          }
        }
        dp[size_t{mask} * k + j] = best;
        par[size_t{mask} * k + j] = static_cast<int8_t>(arg);
      }
    }
    const uint32_t full = limit - 1;
    for (size_t t = 0; t < k; ++t) {
      if (t == s) continue;
      out.cost[s * k + t] = dp[size_t{full} * k + t];
      std::vector<int> rev;
      uint32_t mask = full;
      int j = static_cast<int>(t);
      while (j >= 0) {
        rev.push_back(members[j]);
        const int p = par[size_t{mask} * k + j];
        mask ^= uint32_t{1} << j;
        j = p;
      }
      out.path[s * k + t].assign(rev.rbegin(), rev.rend());
    }
  }
  return out;
}

// Held-Karp over blocks 1..B-1 for a fixed (entry, exit) choice in block 0.
// State (mask, t): blocks in mask visited, currently at exit node t.
class BlockHeldKarp {
 public:
  BlockHeldKarp(const WeightMatrix& w, const std::vector<BlockPaths>& blocks,
                const std::vector<int>& block_of)
      : w_(w),
        blocks_(blocks),
        block_of_(block_of),
        m_(blocks.size() - 1),
        n_(w.size()),
        cost_((size_t{1} << m_) * n_, kInf),
        entry_((size_t{1} << m_) * n_, -1),
        prev_((size_t{1} << m_) * n_, -1) {}

  void Reset(int first_exit) {
    first_exit_ = first_exit;
    std::fill(cost_.begin(), cost_.end(), kInf);
    std::fill(entry_.begin(), entry_.end(), -1);
    std::fill(prev_.begin(), prev_.end(), -1);
  }

  void Cell(uint32_t mask, size_t b) {
    // b indexes blocks 1..B-1 as bit b - 1.
    const uint32_t bit = uint32_t{1} << (b - 1);
    if ((mask & bit) == 0) return;
    const uint32_t rest = mask ^ bit;
    const BlockPaths& bp = blocks_[b];
    for (size_t ti = 0; ti < bp.k(); ++ti) {
      double best = kInf;
      int best_s = -1;
      int best_u = -1;
      for (size_t si = 0; si < bp.k(); ++si) {
        if (si == ti && bp.k() > 1) continue;
        const double inner = bp.Cost(si, ti);
        const int s = bp.members[si];
        if (rest == 0) {
          const double c = w_(first_exit_, s) + inner;
          if (c < best) {
            best = c;
            best_s = static_cast<int>(si);
            best_u = first_exit_;
          }
          continue;
        }
        for (size_t pb = 1; pb < blocks_.size(); ++pb) {
          if (((rest >> (pb - 1)) & 1u) == 0) continue;
          for (int u : blocks_[pb].members) {
            const double prev = cost_[Idx(rest, u)];
            if (prev == kInf) continue;
            const double c = prev + w_(u, s) + inner;
            if (c < best) {
              best = c;
              best_s = static_cast<int>(si);
              best_u = u;
            }
          }
        }
      }
      const size_t at = Idx(mask, bp.members[ti]);
      cost_[at] = best;
      entry_[at] = best_s;
      prev_[at] = best_u;
    }
  }

  void RunSerial() {
    const uint32_t limit = uint32_t{1} << m_;
    for (uint32_t mask = 1; mask < limit; ++mask) {
      for (size_t b = 1; b <= m_; ++b) Cell(mask, b);
    }
  }

  void RunParallel(const std::vector<std::vector<uint32_t>>& layers) {
    for (size_t c = 1; c <= m_; ++c) {
      const auto& layer = layers[c];
      const long count = static_cast<long>(layer.size());
#pragma omp parallel for schedule(static)
      for (long i = 0; i < count; ++i) {
        for (size_t b = 1; b <= m_; ++b) Cell(layer[i], b);
      }
    }
  }

  // Best closing cost back to `first_entry`, and the final exit node.
  std::pair<double, int> Close(int first_entry) const {
    const uint32_t full = (uint32_t{1} << m_) - 1;
    double best = kInf;
    int arg = -1;
    for (int u = 0; u < static_cast<int>(n_); ++u) {
      if (block_of_[u] == 0) continue;
      const double prev = cost_[Idx(full, u)];
      if (prev == kInf) continue;
      const double c = prev + w_(u, first_entry);
      if (c < best) {
        best = c;
        arg = u;
      }
    }
    return {best, arg};
  }

  // Block segments after block 0, in visiting order.
  std::vector<int> Walk(int last_exit) const {
    std::vector<std::vector<int>> segments;
    uint32_t mask = (uint32_t{1} << m_) - 1;
    int t = last_exit;
    while (mask != 0) {
      const size_t b = static_cast<size_t>(block_of_[t]);
      const BlockPaths& bp = blocks_[b];
      const size_t at = Idx(mask, t);
      const size_t ti = static_cast<size_t>(
          std::find(bp.members.begin(), bp.members.end(), t) -
          bp.members.begin());
      const size_t si = static_cast<size_t>(entry_[at]);
      segments.push_back(bp.k() == 1 ? bp.members : bp.Path(si, ti));
      mask ^= uint32_t{1} << (b - 1);
      t = prev_[at];
    }
    std::vector<int> out;
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
      out.insert(out.end(), it->begin(), it->end());
    }
    return out;
  }

 private:
  size_t Idx(uint32_t mask, int node) const {
    return size_t{mask} * n_ + static_cast<size_t>(node);
  }

  const WeightMatrix& w_;
  const std::vector<BlockPaths>& blocks_;
  const std::vector<int>& block_of_;
  size_t m_;
  size_t n_;
  int first_exit_ = -1;
  std::vector<double> cost_;
  std::vector<int> entry_;
  std::vector<int> prev_;
};

template <bool kParallel>
Tour Clustered(const WeightMatrix& w, std::span<const std::vector<int>> blocks) {
  const size_t n = w.size();
  if (n < 2) throw Error("invalid_argument", "cycle needs >= 2 nodes");
  std::vector<int> block_of(n, -1);
  std::vector<std::vector<int>> ordered(blocks.begin(), blocks.end());
  auto zero = std::find_if(ordered.begin(), ordered.end(), [](const auto& b) {
    return std::find(b.begin(), b.end(), 0) != b.end();
  });
  if (zero == ordered.end()) {
    throw Error("invalid_argument", "blocks do not cover node 0");
  }
  std::rotate(ordered.begin(), zero, zero + 1);
  for (size_t b = 0; b < ordered.size(); ++b) {
    if (ordered[b].empty()) throw Error("invalid_argument", "empty block");
    for (int v : ordered[b]) {
      if (v < 0 || static_cast<size_t>(v) >= n || block_of[v] != -1) {
        throw Error("invalid_argument", "blocks must partition the nodes");
      }
      block_of[v] = static_cast<int>(b);
    }
  }
  if (std::find(block_of.begin(), block_of.end(), -1) != block_of.end()) {
    throw Error("invalid_argument", "blocks must partition the nodes");
  }
  if (ordered.size() == 1) return HeldKarp<kParallel>(w);
  if (ordered.size() > kMaxBlocks) {
    throw Error("too_large", "clustered solver supports at most " +
                                 std::to_string(kMaxBlocks) + " blocks");
  }
  for (const auto& b : ordered) {
    if (b.size() > kMaxBlockSize) {
      throw Error("too_large", "block of " + std::to_string(b.size()) +
                                   " categories exceeds the enumeration bound of " +
                                   std::to_string(kMaxBlockSize));
    }
  }

  std::vector<BlockPaths> paths;
  paths.reserve(ordered.size());
  for (const auto& b : ordered) paths.push_back(SolveBlock(w, b));

  std::vector<std::vector<uint32_t>> layers;
  if constexpr (kParallel) layers = MaskLayers(ordered.size() - 1);

  BlockHeldKarp dp(w, paths, block_of);
  const BlockPaths& first = paths[0];
  Tour best;
  best.cost = kInf;
  for (size_t si = 0; si < first.k(); ++si) {
    for (size_t ti = 0; ti < first.k(); ++ti) {
      if (si == ti && first.k() > 1) continue;
      const int s0 = first.members[si];
      const int t0 = first.members[ti];
      dp.Reset(t0);
      if constexpr (kParallel) {
        dp.RunParallel(layers);
      } else {
        dp.RunSerial();
      }
      const auto [close, last] = dp.Close(s0);
      const double total = first.Cost(si, ti) + close;
      if (total < best.cost) {
        best.cost = total;
        best.order = first.k() == 1 ? first.members : first.Path(si, ti);
        const auto rest = dp.Walk(last);
        best.order.insert(best.order.end(), rest.begin(), rest.end());
      }
    }
  }
  std::rotate(best.order.begin(), std::find(best.order.begin(), best.order.end(), 0),
              best.order.end());
  return best;
}

}  // namespace

Tour HeldKarpCycleSerial(const WeightMatrix& w) { return HeldKarp<false>(w); }
Tour HeldKarpCycleParallel(const WeightMatrix& w) { return HeldKarp<true>(w); }

Tour ClusteredCycleSerial(const WeightMatrix& w,
                          std::span<const std::vector<int>> blocks) {
  return Clustered<false>(w, blocks);
}

Tour ClusteredCycleParallel(const WeightMatrix& w,
                            std::span<const std::vector<int>> blocks) {
  return Clustered<true>(w, blocks);
}

double CycleCost(const WeightMatrix& w, std::span<const int> order) {
  double total = 0.0;
  for (size_t i = 0; i < order.size(); ++i) {
    total += w(order[i], order[(i + 1) % order.size()]);
  }
  return total;
}

Tour NearestNeighborTwoOpt(const WeightMatrix& w) {
  const size_t n = w.size();
  if (n < 2) throw Error("invalid_argument", "cycle needs >= 2 nodes");
  std::vector<int> order{0};
  std::vector<bool> used(n, false);
  used[0] = true;
  for (size_t step = 1; step < n; ++step) {
    const int cur = order.back();
    int next = -1;
    for (size_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      if (next < 0 || w(cur, v) < w(cur, next)) next = static_cast<int>(v);
    }
    used[next] = true;
    order.push_back(next);
  }
  bool improved = true;
  while (improved) {
    improved = false;
    for (size_t i = 0; i + 1 < n; ++i) {
      for (size_t j = i + 2; j < n; ++j) {
        const int a = order[i], b = order[i + 1];
        const int c = order[j], d = order[(j + 1) % n];
        if (a == d) continue;
        const double delta = w(a, c) + w(b, d) - w(a, b) - w(c, d);
        if (delta < -1e-12) {
          std::reverse(order.begin() + static_cast<long>(i) + 1,
                       order.begin() + static_cast<long>(j) + 1);
          improved = true;
        }
      }
    }
  }
  return {order, CycleCost(w, order)};
}

}  // namespace emocal::kernels
