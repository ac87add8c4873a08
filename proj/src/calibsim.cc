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

#include "emocal/calibsim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "emocal/error.h"
#include "emocal/grpo.h"
#include "emocal/metrics.h"

namespace emocal::calibsim {
namespace {

double Uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

size_t SampleIndex(std::mt19937_64& rng, std::span<const double> probs) {
  const double u = Uniform(rng);
  double acc = 0.0;
  for (size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) return k;
  }
  return probs.size() - 1;
}

std::vector<double> Softmax(std::span<const double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (size_t k = 0; k < logits.size(); ++k) {
    p[k] = std::exp(logits[k] - top);
    sum += p[k];
  }
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace

std::vector<double> DefaultGrid() {
  std::vector<double> grid;
  for (int k = 0; k < 10; ++k) grid.push_back((2 * k + 1) / 20.0);
  return grid;
}

void ValidateConfig(const SimConfig& cfg) {
  if (cfg.confidence_grid.empty()) throw Error("invalid_config", "confidence grid is empty");
  for (double c : cfg.confidence_grid) {
    if (!(c > 0.0 && c < 1.0)) {
      throw Error("invalid_config", "grid value " + std::to_string(c) + " is outside (0, 1)");
    }
  }
  if (cfg.group_size < 2) throw Error("invalid_config", "group size must be at least 2");
  if (!(cfg.true_accuracy > 0.0 && cfg.true_accuracy < 1.0)) {
    throw Error("invalid_config", "accuracy must lie in (0, 1)");
  }
  if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw Error("invalid_config", "learning rate must be finite and non-negative");
  }
  if (!(cfg.answer_correlation >= 0.0 && cfg.answer_correlation <= 1.0)) {
    throw Error("invalid_config", "answer correlation must lie in [0, 1]");
  }
}

double PolicyMeanConfidence(std::span<const double> policy, std::span<const double> grid) {
  double m = 0.0;
  for (size_t k = 0; k < policy.size(); ++k) m += policy[k] * grid[k];
  return m;
}

double PolicyEce(std::span<const double> policy, std::span<const double> grid, double accuracy) {
  const size_t bins = metrics::kDefaultBins;
  std::vector<double> mass(bins, 0.0), conf(bins, 0.0);
  for (size_t k = 0; k < policy.size(); ++k) {
    const size_t b = metrics::BinIndex(grid[k], bins);
    mass[b] += policy[k];
    conf[b] += policy[k] * grid[k];
  }
  double ece = 0.0;
  for (size_t b = 0; b < bins; ++b) {
    if (mass[b] > 0.0) ece += mass[b] * std::abs(conf[b] / mass[b] - accuracy);
  }
  return ece;
}

SimTrajectory RunSim(const SimConfig& cfg) {
  ValidateConfig(cfg);
  const auto& grid = cfg.confidence_grid;
  const size_t g_size = cfg.group_size;
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> logits(grid.size(), 0.0);

  SimTrajectory traj;
  traj.initial_policy = Softmax(logits);
  traj.steps.reserve(cfg.steps);

  std::vector<size_t> picks(g_size);
  std::vector<double> rewards(g_size);
  for (size_t step = 1; step <= cfg.steps; ++step) {
    const auto policy = Softmax(logits);
    const bool query_correct = Uniform(rng) < cfg.true_accuracy;
    for (size_t g = 0; g < g_size; ++g) {
      picks[g] = SampleIndex(rng, policy);
      const bool shared = Uniform(rng) < cfg.answer_correlation;
      const bool own = Uniform(rng) < cfg.true_accuracy;
      const bool correct = shared ? query_correct : own;
      const double c = grid[picks[g]];
      // Simulated responses are always well-formed.
      rewards[g] = 1.0 + (correct ? 1.0 : 0.0) + RewardConf(correct, c, cfg.reward_variant).value;
    }
    const auto adv = grpo::Advantages(rewards, cfg.normalize_advantage);
    // Gradient of sum_g A_g log pi(k_g) is sum_g A_g (e_{k_g} - pi); the pi
    // term vanishes because the advantages sum to zero.
    for (size_t g = 0; g < g_size; ++g) {
      logits[picks[g]] += cfg.learning_rate * adv[g] / static_cast<double>(g_size);
    }
    SimStep s;
    s.step = step;
    s.policy = Softmax(logits);
    s.mean_confidence = PolicyMeanConfidence(s.policy, grid);
    s.ece = PolicyEce(s.policy, grid, cfg.true_accuracy);
    traj.steps.push_back(std::move(s));
  }
  return traj;
}

std::vector<SimTrajectory> RunSims(std::span<const SimConfig> configs) {
  for (const auto& c : configs) ValidateConfig(c);
  std::vector<SimTrajectory> out(configs.size());
  const long count = static_cast<long>(configs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) out[i] = RunSim(configs[i]);
  return out;
}

std::string TrajectoryToCsv(const SimTrajectory& traj) {
  std::string out = "step,mean_confidence,ece\n";
  char buf[128];
  for (const auto& s : traj.steps) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", s.step, s.mean_confidence, s.ece);
    out += buf;
  }
  return out;
}

void ExportTrajectory(const SimTrajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write " + path);
  out << TrajectoryToCsv(traj);
  if (!out) throw Error("io_error", "failed writing " + path);
}

SimTrajectory ReadTrajectoryCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != "step,mean_confidence,ece") {
    throw Error("parse_error", path + ": missing trajectory header");
  }
  SimTrajectory traj;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    SimStep s;
    char comma1 = 0, comma2 = 0;
    std::istringstream row(line);
    if (!(row >> s.step >> comma1 >> s.mean_confidence >> comma2 >> s.ece) || comma1 != ',' ||
        comma2 != ',') {
      throw Error("parse_error", path + ": bad row at line " + std::to_string(line_no));
    }
    traj.steps.push_back(std::move(s));
  }
  return traj;
}

}  // namespace emocal::calibsim
