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

#ifndef EMOCAL_CALIBSIM_H_
#define EMOCAL_CALIBSIM_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "emocal/reward.h"

// Toy replay of confidence calibration under group-relative RL: a softmax
// policy over a fixed confidence grid, rewarded with the reward module and
// updated with group advantages.
namespace emocal::calibsim {

std::vector<double> DefaultGrid();

struct SimConfig {
  size_t steps = 2000;
  size_t group_size = 8;
  uint64_t seed = 20260;
  // Probability that a query's answer is correct.
  double true_accuracy = 0.55;
  ConfVariant reward_variant = ConfVariant::kLogLikelihood;
  bool normalize_advantage = false;
  double learning_rate = 0.2;
  // Probability that a response shares the query-level correctness draw
  // rather than drawing its own. 1 means every response in a group is
  // equally right or wrong and differs only in its stated confidence.
  double answer_correlation = 1.0;
  std::vector<double> confidence_grid = DefaultGrid();
};

struct SimStep {
  size_t step = 0;
  double mean_confidence = 0.0;
  // Expected calibration error of the policy: mass-weighted gap between
  // each bin's mean grid confidence and the true accuracy.
  double ece = 0.0;
  std::vector<double> policy;
};

struct SimTrajectory {
  std::vector<double> initial_policy;
  std::vector<SimStep> steps;
};

// Throws Error("invalid_config").
void ValidateConfig(const SimConfig& cfg);

// Deterministic in the seed; one thread per run.
SimTrajectory RunSim(const SimConfig& cfg);

// Independent runs, possibly concurrently; results in input order.
std::vector<SimTrajectory> RunSims(std::span<const SimConfig> configs);

double PolicyMeanConfidence(std::span<const double> policy, std::span<const double> grid);
double PolicyEce(std::span<const double> policy, std::span<const double> grid, double accuracy);

// CSV with header `step,mean_confidence,ece`, values at round-trip precision.
std::string TrajectoryToCsv(const SimTrajectory& traj);
void ExportTrajectory(const SimTrajectory& traj, const std::string& path);
// Reads back the plotted columns; policies are not stored.
SimTrajectory ReadTrajectoryCsv(const std::string& path);

}  // namespace emocal::calibsim

#endif  // EMOCAL_CALIBSIM_H_
