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

#ifndef EMOCAL_TSP_KERNELS_H_
#define EMOCAL_TSP_KERNELS_H_

#include <cstddef>
#include <span>
#include <vector>

// Exact Hamiltonian-cycle kernels over a dense symmetric weight matrix.
// Each exact solver has a serial reference and an OpenMP variant that
// evaluates one subset-cardinality layer at a time. Both variants perform
// the same arithmetic in the same per-cell order, so they return
// bit-identical tours.
namespace emocal::kernels {

class WeightMatrix {
 public:
  WeightMatrix() = default;
  explicit WeightMatrix(size_t n) : n_(n), w_(n * n, 0.0) {}

  size_t size() const { return n_; }
  double operator()(size_t i, size_t j) const { return w_[i * n_ + j]; }
  double& operator()(size_t i, size_t j) { return w_[i * n_ + j]; }

 private:
  size_t n_ = 0;
  std::vector<double> w_;
};

struct Tour {
  // Node indices; the cycle closes from back() to front(). Starts at node 0
  // for exact solvers.
  std::vector<int> order;
  double cost = 0.0;
};

// Largest n the flat Held-Karp kernels accept.
inline constexpr size_t kMaxExactNodes = 16;
// Largest block the clustered solver enumerates exhaustively.
inline constexpr size_t kMaxBlockSize = 12;

Tour HeldKarpCycleSerial(const WeightMatrix& w);
Tour HeldKarpCycleParallel(const WeightMatrix& w);

// Minimum cycle in which every block occupies a contiguous arc. `blocks`
// must partition 0..n-1. Serial and layered-parallel variants.
Tour ClusteredCycleSerial(const WeightMatrix& w,
                          std::span<const std::vector<int>> blocks);
Tour ClusteredCycleParallel(const WeightMatrix& w,
                            std::span<const std::vector<int>> blocks);

// Nearest-neighbour construction from node 0 followed by 2-opt to a local
// optimum. Not exact.
Tour NearestNeighborTwoOpt(const WeightMatrix& w);

double CycleCost(const WeightMatrix& w, std::span<const int> order);

}  // namespace emocal::kernels

#endif  // EMOCAL_TSP_KERNELS_H_
