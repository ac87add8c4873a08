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

#ifndef EMOCAL_GRPO_H_
#define EMOCAL_GRPO_H_

#include <span>
#include <string>
#include <vector>

#include "emocal/records.h"

// Objective values of group-relative policy optimization computed from
// caller-supplied token probabilities. Nothing here differentiates or
// updates a model.
namespace emocal::grpo {

struct Response {
  double reward = 0.0;
  std::vector<double> p_theta;
  std::vector<double> p_old;
  std::vector<double> p_ref;
};

struct RolloutGroup {
  std::string query_id;
  std::vector<Response> responses;
};

struct GrpoConfig {
  double clip_eps = 0.2;
  double kl_beta = 0.01;
  bool normalize_advantage = false;
};

inline constexpr double kStdFloor = 1e-8;

// R_g - mean(R); with `normalize`, divided by the population standard
// deviation (all zeros when it is below 1e-8). Throws
// Error("invalid_argument") for fewer than 2 rewards.
std::vector<double> Advantages(std::span<const double> rewards, bool normalize);

// pi_theta / pi_old. Probabilities must lie in (0, 1].
double TokenRatio(double p_theta, double p_old);

// k3 estimator r - ln r - 1 with r = p_ref / p_theta; never negative.
double KlToken(double p_theta, double p_ref);

struct ObjectiveResult {
  double loss = 0.0;
  double mean_ratio = 0.0;
  double clip_fraction = 0.0;  // share of tokens with |ratio - 1| > eps
  double mean_kl = 0.0;
  std::vector<double> advantages;
};

// -mean_g mean_t [min(rho A, clip(rho, 1 +- eps) A) - beta KL].
ObjectiveResult GrpoObjective(const RolloutGroup& group, const GrpoConfig& cfg);

// Per-group objectives; the OpenMP path gives the same values in the same
// order as the serial one.
std::vector<ObjectiveResult> GrpoObjectiveBatch(std::span<const RolloutGroup> groups,
                                                const GrpoConfig& cfg, bool parallel = true);

// Mean of -ln p over the sequence.
double SequenceNll(std::span<const double> token_probs);

RolloutGroup GroupFromJson(const nlohmann::json& doc);
Json ObjectiveToJson(const std::string& query_id, const ObjectiveResult& r);

struct GroupSet {
  std::vector<RolloutGroup> groups;
  std::vector<LineError> errors;
};
GroupSet ReadRolloutGroups(const std::string& path);

}  // namespace emocal::grpo

#endif  // EMOCAL_GRPO_H_
