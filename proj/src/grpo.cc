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

#include "emocal/grpo.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>

#include "emocal/error.h"

namespace emocal::grpo {
namespace {

void CheckProb(double p, const char* what) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw Error("invalid_probability",
                std::string(what) + " probability " + std::to_string(p) + " must lie in (0, 1]");
  }
}

}  // namespace

std::vector<double> Advantages(std::span<const double> rewards, bool normalize) {
  if (rewards.size() < 2) {
    throw Error("invalid_argument", "advantages need a group of at least 2 rewards");
  }
  const double g = static_cast<double>(rewards.size());
  double sum = 0.0;
  for (double r : rewards) sum += r;
  const double mean = sum / g;
  std::vector<double> adv(rewards.size());
  for (size_t i = 0; i < rewards.size(); ++i) adv[i] = rewards[i] - mean;
  if (!normalize) return adv;
  double var = 0.0;
  for (double a : adv) var += a * a;
  const double sd = std::sqrt(var / g);
  if (sd < kStdFloor) {
    std::fill(adv.begin(), adv.end(), 0.0);
    return adv;
  }
  for (double& a : adv) a /= sd;
  return adv;
}

double TokenRatio(double p_theta, double p_old) {
  CheckProb(p_theta, "policy");
  CheckProb(p_old, "old-policy");
  return p_theta / p_old;
}

double KlToken(double p_theta, double p_ref) {
  CheckProb(p_theta, "policy");
  CheckProb(p_ref, "reference");
  const double r = p_ref / p_theta;
  return std::max(0.0, r - std::log(r) - 1.0);
}

ObjectiveResult GrpoObjective(const RolloutGroup& group, const GrpoConfig& cfg) {
  if (!(cfg.clip_eps > 0.0)) throw Error("invalid_argument", "clip_eps must be positive");
  if (!(cfg.kl_beta >= 0.0)) throw Error("invalid_argument", "kl_beta must be non-negative");
  std::vector<double> rewards;
  rewards.reserve(group.responses.size());
  for (const auto& r : group.responses) rewards.push_back(r.reward);

  ObjectiveResult out;
  out.advantages = Advantages(rewards, cfg.normalize_advantage);

  double objective = 0.0;
  double ratio_sum = 0.0;
  double kl_sum = 0.0;
  size_t clipped = 0;
  size_t tokens = 0;
  for (size_t g = 0; g < group.responses.size(); ++g) {
    const Response& resp = group.responses[g];
    const size_t len = resp.p_theta.size();
    if (len == 0 || resp.p_old.size() != len || resp.p_ref.size() != len) {
      throw Error("invalid_group", "response " + std::to_string(g) + " of '" + group.query_id +
                                       "' needs equal-length, non-empty probability sequences");
    }
    const double a = out.advantages[g];
    double per_token = 0.0;
    for (size_t t = 0; t < len; ++t) {
      const double rho = TokenRatio(resp.p_theta[t], resp.p_old[t]);
      const double kl = KlToken(resp.p_theta[t], resp.p_ref[t]);
      const double clipped_rho = std::clamp(rho, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps);
      per_token += std::min(rho * a, clipped_rho * a) - cfg.kl_beta * kl;
      ratio_sum += rho;
      kl_sum += kl;
      if (std::abs(rho - 1.0) > cfg.clip_eps) ++clipped;
    }
    objective += per_token / static_cast<double>(len);
    tokens += len;
  }
  out.loss = -objective / static_cast<double>(group.responses.size());
  out.mean_ratio = ratio_sum / static_cast<double>(tokens);
  out.mean_kl = kl_sum / static_cast<double>(tokens);
  out.clip_fraction = static_cast<double>(clipped) / static_cast<double>(tokens);
  return out;
}

std::vector<ObjectiveResult> GrpoObjectiveBatch(std::span<const RolloutGroup> groups,
                                                const GrpoConfig& cfg, bool parallel) {
  std::vector<ObjectiveResult> out(groups.size());
  if (!parallel) {
    for (size_t i = 0; i < groups.size(); ++i) out[i] = GrpoObjective(groups[i], cfg);
    return out;
  }
  std::vector<std::exception_ptr> failures(groups.size());
  const long count = static_cast<long>(groups.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      out[i] = GrpoObjective(groups[i], cfg);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

double SequenceNll(std::span<const double> token_probs) {
  if (token_probs.empty()) throw Error("invalid_argument", "sequence is empty");
  double sum = 0.0;
  for (double p : token_probs) {
    CheckProb(p, "token");
    sum += -std::log(p);
  }
  return sum / static_cast<double>(token_probs.size());
}

RolloutGroup GroupFromJson(const nlohmann::json& doc) {
  try {
    RolloutGroup g;
    g.query_id = doc.at("query_id").get<std::string>();
    for (const auto& r : doc.at("responses")) {
      Response resp;
      resp.reward = r.at("reward").get<double>();
      resp.p_theta = r.at("p_theta").get<std::vector<double>>();
      resp.p_old = r.at("p_old").get<std::vector<double>>();
      resp.p_ref = r.at("p_ref").get<std::vector<double>>();
      g.responses.push_back(std::move(resp));
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse_error", std::string("rollout group: ") + e.what());
  }
}

Json ObjectiveToJson(const std::string& query_id, const ObjectiveResult& r) {
  return Json{{"query_id", query_id},
              {"loss", r.loss},
              {"advantages", r.advantages},
              {"mean_ratio", r.mean_ratio},
              {"clip_fraction", r.clip_fraction},
              {"mean_kl", r.mean_kl}};
}

GroupSet ReadRolloutGroups(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot read " + path);
  GroupSet set;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      set.groups.push_back(GroupFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      set.errors.push_back({line_no, std::string("invalid JSON: ") + e.what()});
    } catch (const Error& e) {
      set.errors.push_back({line_no, e.what()});
    }
  }
  return set;
}

}  // namespace emocal::grpo
