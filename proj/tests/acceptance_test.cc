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


// Acceptance suite: one PASS/FAIL line per release criterion. Exits non-zero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cli_runner.h"
#include "emocal/bench.h"
#include "emocal/calibsim.h"
#include "emocal/confidence.h"
#include "emocal/emoloop.h"
#include "emocal/grpo.h"
#include "emocal/metrics.h"
#include "emocal/numeric.h"
#include "emocal/reward.h"
#include "emocal/transcript.h"
#include "oracles/metric_oracles.h"
#include "oracles/tsp_brute.h"
#include "transcript_cases.h"

using namespace emocal;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// Collects the first few failures of a criterion; `note` carries the summary
// printed on success.
struct Verdict {
  size_t failures = 0;
  std::string first;
  std::string note;

  void Expect(bool cond, const std::string& what) {
    if (cond) return;
    if (failures++ == 0) first = what;
  }
};

std::vector<LabeledPoint> ToLabeled(const std::vector<oracle::Point3>& pts) {
  std::vector<LabeledPoint> out;
  for (size_t i = 0; i < pts.size(); ++i) {
    out.push_back({oracle::Label(i), {pts[i].v, pts[i].a, pts[i].d}});
  }
  return out;
}

void ExpectDistanceLaw(Verdict& v, const EmotionLoop& loop) {
  const auto& d = loop.dist();
  for (size_t i = 0; i < loop.size(); ++i) {
    v.Expect(d[i][i] == 0.0, "d(x,x) != 0");
    for (size_t j = 0; j < loop.size(); ++j) {
      v.Expect(d[i][j] == d[j][i], "asymmetric distance");
      v.Expect(d[i][j] >= 0.0 && d[i][j] <= 0.5 + 1e-12, "distance outside [0, 0.5]");
    }
  }
}

Verdict LoopOptimality() {
  Verdict v;
  std::mt19937_64 rng(20260);
  const auto start = Clock::now();
  size_t instances = 0;
  for (size_t n = 4; n <= 8; ++n) {
    for (int rep = 0; rep < 100; ++rep, ++instances) {
      const auto pts = oracle::RandomPoints(rng, n);
      const auto loop = BuildLoop(ToLabeled(pts), std::nullopt);
      const auto brute = oracle::BruteForceCycle(pts);
      v.Expect(loop.perimeter() == brute.best,
               "n=" + std::to_string(n) + " rep=" + std::to_string(rep) + " perimeter " +
                   std::to_string(loop.perimeter()) + " vs " + std::to_string(brute.best));
    }
  }
  const double secs = Seconds(start);
  v.Expect(secs < 10.0, "took " + std::to_string(secs) + " s");
  v.note = std::to_string(instances) + " instances, exact equality, " + std::to_string(secs) + " s";
  return v;
}

Verdict ConstrainedOptimality() {
  Verdict v;
  std::mt19937_64 rng(20261);
  std::uniform_int_distribution<int> parents_dist(2, 4);
  std::uniform_int_distribution<int> children_dist(1, 3);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const int parents = parents_dist(rng);
    std::vector<int> group_of;
    for (int p = 0; p < parents; ++p) {
      const int kids = children_dist(rng);
      for (int c = 0; c < kids; ++c) group_of.push_back(p);
    }
    if (group_of.size() < 3) group_of.push_back(0);
    const auto pts = oracle::RandomPoints(rng, group_of.size());
    std::map<std::string, std::string> parent_map;
    std::vector<std::vector<int>> blocks(parents);
    for (size_t i = 0; i < group_of.size(); ++i) {
      parent_map[oracle::Label(i)] = "p" + std::to_string(group_of[i]);
      blocks[group_of[i]].push_back(static_cast<int>(i));
    }
    const auto loop = BuildLoop(ToLabeled(pts), parent_map);
    const auto flat = BuildLoop(ToLabeled(pts), std::nullopt);
    const double brute = oracle::BruteForceClustered(pts, blocks).best;
    const double gap = std::abs(loop.perimeter() - brute);
    worst = std::max(worst, gap);
    v.Expect(gap <= 1e-12 * brute, "rep " + std::to_string(rep) + " clustered DP " +
                                       std::to_string(loop.perimeter()) + " vs brute " +
                                       std::to_string(brute));
    v.Expect(loop.perimeter() >= flat.perimeter(), "constrained shorter than flat");
    v.Expect(loop.hierarchical_constrained(), "constraint flag not set");
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "50 instances, max |DP - brute| = %.3g", worst);
  v.note = buf;
  return v;
}

Verdict DistanceLaw() {
  Verdict v;
  std::mt19937_64 rng(20262);
  size_t loops = 0;
  for (size_t n = 2; n <= 12; ++n) {
    for (int rep = 0; rep < 10; ++rep, ++loops) {
      ExpectDistanceLaw(v, BuildLoop(ToLabeled(oracle::RandomPoints(rng, n)), std::nullopt));
    }
  }
  const std::string dir = std::string(EMOCAL_FIXTURE_DIR) + "/pipeline/golden/";
  for (const char* f : {"mikels8.loop.json", "mikels8_tree.loop.json", "polarity2.loop.json"}) {
    ExpectDistanceLaw(v, LoadLoop(dir + f));
    ++loops;
  }
  const auto two = BuildLoop({{"a", {0.1, 0.2, 0.3}}, {"b", {0.7, 0.4, 0.9}}}, std::nullopt);
  v.Expect(two.Distance("a", "b") == 0.5, "n=2 distance is not 0.5");
  v.Expect(two.perimeter() == 2 * two.arc_weights()[0], "n=2 perimeter is not twice the edge");
  v.note = std::to_string(loops) + " loops; n=2 gives 0.5";
  return v;
}

Verdict ConfidenceTargets() {
  Verdict v;
  std::mt19937_64 rng(20263);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double d = 0.5 * u(rng);
    const double p = u(rng);
    const double right = RawConfidenceTarget(true, 0.0, p);
    const double wrong = RawConfidenceTarget(false, d, p);
    v.Expect(right >= 0.5 && right <= 1.0, "correct target outside [0.5, 1]");
    v.Expect(wrong >= 0.0 && wrong <= 0.5, "wrong target outside [0, 0.5]");
  }
  const auto square = BuildLoop(
      {{"a", {0, 0, 0}}, {"b", {1, 0, 0}}, {"c", {1, 1, 0}}, {"d", {0, 1, 0}}}, std::nullopt);
  const auto t1 = ComputeConfidenceTarget("a", "a", square, 0.8).value;
  const auto t2 = ComputeConfidenceTarget("a", "c", square, 1.0).value;
  const auto t3 = ComputeConfidenceTarget("a", "b", square, 0.6).value;
  v.Expect(FormatFixed2(t1) == "0.90" && t1 == 0.90, "worked example 0.90 gave " + FormatFixed2(t1));
  v.Expect(FormatFixed2(t2) == "0.00" && t2 == 0.00, "worked example 0.00 gave " + FormatFixed2(t2));
  v.Expect(FormatFixed2(t3) == "0.35" && t3 == 0.35, "worked example 0.35 gave " + FormatFixed2(t3));
  v.note = "10000 samples; 0.90 / 0.00 / 0.35 reproduced";
  return v;
}

Verdict Rewards() {
  Verdict v;
  const double half = RewardConf(true, 0.5, ConfVariant::kLogLikelihood).value;
  const auto floor = RewardConf(true, 0.0, ConfVariant::kLogLikelihood);
  v.Expect(std::abs(half - (-0.6931)) <= 1e-4, "ln 0.5 gave " + std::to_string(half));
  v.Expect(std::abs(floor.value - (-9.2103)) <= 1e-4 && floor.clamped,
           "clamped ln eps gave " + std::to_string(floor.value));
  // (1 - 0.7)^2 is 0.09 plus one ulp in binary; anything beyond that is a bug.
  const double brier = RewardConf(true, 0.7, ConfVariant::kBrier).value;
  v.Expect(FormatFixed2(brier) == "-0.09" && std::abs(brier + 0.09) <= 1e-15,
           "brier gave " + std::to_string(brier));

  std::mt19937_64 rng(20264);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> cs(10000);
  for (double& c : cs) c = u(rng);
  std::sort(cs.begin(), cs.end());
  for (auto variant : {ConfVariant::kLogLikelihood, ConfVariant::kBrier}) {
    for (size_t i = 1; i < cs.size(); ++i) {
      v.Expect(RewardConf(true, cs[i], variant).value >= RewardConf(true, cs[i - 1], variant).value,
               "correct reward decreased in c");
      v.Expect(RewardConf(false, cs[i], variant).value <=
                   RewardConf(false, cs[i - 1], variant).value,
               "wrong reward increased in c");
    }
  }
  v.note = "ln 0.5, ln eps, -0.09 and 10000-sample monotonicity";
  return v;
}

grpo::Response OneToken(double reward, double ratio) {
  return {reward, {0.5 * ratio}, {0.5}, {0.5 * ratio}};
}

Verdict Objective() {
  Verdict v;
  std::mt19937_64 rng(20265);
  std::uniform_real_distribution<double> reward(-3.0, 3.0);
  std::uniform_int_distribution<size_t> size(2, 16);
  double worst = 0.0;
  for (int g = 0; g < 1000; ++g) {
    std::vector<double> rewards(size(rng));
    for (double& r : rewards) r = reward(rng);
    for (bool normalize : {false, true}) {
      const auto adv = grpo::Advantages(rewards, normalize);
      double sum = 0.0;
      for (double a : adv) sum += a;
      worst = std::max(worst, std::abs(sum));
      v.Expect(std::abs(sum) <= 1e-9, "advantages sum to " + std::to_string(sum));
    }
  }
  grpo::GrpoConfig cfg;
  cfg.kl_beta = 0.0;
  const grpo::RolloutGroup pair{"q", {OneToken(1, 1), OneToken(0, 1)}};
  const grpo::RolloutGroup clipped{"q", {OneToken(1, 2.0), OneToken(0, 1)}};
  const double l0 = grpo::GrpoObjective(pair, cfg).loss;
  const double l1 = grpo::GrpoObjective(clipped, cfg).loss;
  v.Expect(std::abs(l0) <= 1e-12, "on-policy loss " + std::to_string(l0));
  v.Expect(std::abs(l1 + 0.05) <= 1e-12, "clipped loss " + std::to_string(l1));
  const auto flat = grpo::Advantages(std::vector<double>{1.5, 1.5, 1.5, 1.5}, true);
  v.Expect(std::all_of(flat.begin(), flat.end(), [](double a) { return a == 0.0; }),
           "zero-variance group not all zeros");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "1000 groups, max |sum| = %.3g; losses 0 and -0.05", worst);
  v.note = buf;
  return v;
}

Verdict Metrics() {
  Verdict v;
  std::mt19937_64 rng(20266);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> cents(0, 100);
  std::vector<oracle::Sample> samples(1000);
  std::vector<metrics::Outcome> outcomes;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double c = i % 2 ? u(rng) : cents(rng) / 100.0;
    samples[i] = {u(rng) < c, c};
    outcomes.push_back({samples[i].correct, c});
  }
  const double ece = metrics::Ece(outcomes).ece;
  const double ece_par = metrics::EceParallel(outcomes).ece;
  const double ece_ref = oracle::EceDirect(samples);
  const auto auc = metrics::Auc(outcomes);
  const auto auc_par = metrics::AucParallel(outcomes);
  const auto auc_ref = oracle::AucPairs(samples);
  v.Expect(std::abs(ece - ece_ref) <= 1e-12, "ECE differs from the direct oracle");
  v.Expect(std::abs(ece_par - ece_ref) <= 1e-12, "parallel ECE differs from the direct oracle");
  v.Expect(auc && auc_ref && std::abs(*auc - *auc_ref) <= 1e-12, "AUC differs from the pair oracle");
  v.Expect(auc_par && std::abs(*auc_par - *auc_ref) <= 1e-12, "parallel AUC differs");
  v.Expect(std::abs(metrics::Brier(outcomes) - oracle::BrierDirect(samples)) <= 1e-12,
           "Brier differs");

  const std::vector<metrics::Outcome> four{{true, 0.75}, {true, 0.75}, {false, 0.75}, {false, 0.75}};
  v.Expect(metrics::Ece(four).ece == 0.25, "worked ECE is not 0.25");
  std::vector<metrics::ScoredSample> f1{{"a", "a", 0.5}, {"a", "a", 0.5}, {"a", "b", 0.5}, {"a", "b", 0.5}};
  v.Expect(metrics::MacroF1(f1, {"a", "b"}) == 1.0 / 3.0, "worked macro-F1 is not 1/3");
  v.note = "1000 samples within 1e-12; ECE 0.25 and F1 1/3 exact";
  return v;
}

Verdict Transcripts() {
  Verdict v;
  const auto mutations = cases::Mutations();
  v.Expect(ParseTranscript(cases::kGood).verdict.ok, "reference transcript rejected");
  for (const auto& m : mutations) {
    const auto r = ParseTranscript(m.text);
    v.Expect(!r.verdict.ok && r.verdict.Has(m.code), std::string("mutation '") + m.name +
                                                         "' did not yield " + m.code);
  }
  std::mt19937_64 rng(20267);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 2000; ++rep) {
    Transcript t;
    for (size_t k = 0; k < kNumSteps; ++k) t.steps[k] = cases::RandomText(rng);
    t.answer = cases::RandomText(rng);
    if (rep % 3 != 0) t.confidence = u(rng);
    const auto text = SerializeTranscript(t);
    const auto r = ParseTranscript(text);
    v.Expect(r.verdict.ok, "serialized transcript rejected");
    v.Expect(SerializeTranscript(r.transcript) == text, "round trip changed the text");
  }
  v.note = std::to_string(mutations.size()) + " mutations flip the verdict; 2000 round trips";
  v.Expect(mutations.size() >= 20, "fewer than 20 mutations");
  return v;
}

Verdict Splits() {
  Verdict v;
  std::vector<size_t> records(143446);
  std::iota(records.begin(), records.end(), size_t{0});
  const auto parts = bench::SplitDataset(records, {}, 0);
  const size_t expect[3] = {86067, 43033, 14346};
  std::string got;
  for (int i = 0; i < 3; ++i) {
    const auto diff = static_cast<long>(parts[i].size()) - static_cast<long>(expect[i]);
    v.Expect(std::abs(diff) <= 1, "part " + std::to_string(i + 1) + " off by " + std::to_string(diff));
    got += (i ? ", " : "") + std::to_string(parts[i].size());
  }
  v.note = "(" + got + ")";
  return v;
}

Verdict EndToEnd() {
  Verdict v;
  const auto dir = clirun::FreshDir("emocal_acceptance_pipeline");
  const auto start = Clock::now();
  const auto run = clirun::RunPipeline(dir);
  const double secs = Seconds(start);
  v.Expect(run.ok, run.failure);
  if (run.ok) {
    for (const auto& f : clirun::DiffAgainstGolden(dir)) v.Expect(false, f + " differs from golden");
  }
  v.Expect(secs < 5.0, "took " + std::to_string(secs) + " s");
  v.note = std::to_string(clirun::PipelineOutputs().size()) + " outputs byte-identical, " +
           std::to_string(secs) + " s";
  return v;
}

Verdict Calibsim() {
  Verdict v;
  const std::string dir = std::string(EMOCAL_FIXTURE_DIR) + "/calibsim/";
  calibsim::SimConfig log_cfg;
  calibsim::SimConfig brier_cfg;
  brier_cfg.reward_variant = ConfVariant::kBrier;
  brier_cfg.normalize_advantage = true;
  const auto log_frozen = calibsim::ReadTrajectoryCsv(dir + "log_unnormalized.csv");
  const auto brier_frozen = calibsim::ReadTrajectoryCsv(dir + "brier_normalized.csv");

  // The frozen files must still be what the simulator produces.
  for (const auto& [cfg, frozen] : {std::pair{log_cfg, &log_frozen}, std::pair{brier_cfg, &brier_frozen}}) {
    const auto fresh = calibsim::RunSim(cfg);
    bool same = fresh.steps.size() == frozen->steps.size();
    for (size_t i = 0; same && i < fresh.steps.size(); ++i) {
      same = std::abs(fresh.steps[i].mean_confidence - frozen->steps[i].mean_confidence) <= 1e-12 &&
             std::abs(fresh.steps[i].ece - frozen->steps[i].ece) <= 1e-12;
    }
    v.Expect(same, "simulation no longer matches its frozen trajectory");
  }
  if (log_frozen.steps.empty() || brier_frozen.steps.empty()) {
    v.Expect(false, "empty frozen trajectory");
    return v;
  }

  const double log_final = log_frozen.steps.back().mean_confidence;
  const double brier_final = brier_frozen.steps.back().mean_confidence;
  v.Expect(brier_final > log_final, "brier+normalized does not exceed log-likelihood");
  v.Expect(log_final >= 0.35 && log_final <= 0.75, "log-likelihood final confidence outside [0.35, 0.75]");

  // Per-step ECE is noisy under single-group updates; the trend is checked
  // at 100-step checkpoints across the last quarter.
  const size_t n = log_frozen.steps.size();
  const size_t stride = 100;
  size_t checkpoints = 0;
  for (size_t i = n - n / 4 - 1; i + stride < n; i += stride, ++checkpoints) {
    v.Expect(log_frozen.steps[i + stride].ece <= log_frozen.steps[i].ece,
             "ECE rose between steps " + std::to_string(log_frozen.steps[i].step) + " and " +
                 std::to_string(log_frozen.steps[i + stride].step));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "final confidence brier %.4f > log %.4f; ECE non-increasing over %zu checkpoints",
                brier_final, log_final, checkpoints + 1);
  v.note = buf;
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"loop optimality", LoopOptimality},
      {"constrained loop optimality", ConstrainedOptimality},
      {"distance law", DistanceLaw},
      {"confidence targets", ConfidenceTargets},
      {"reward suite", Rewards},
      {"advantage and objective suite", Objective},
      {"metrics oracle equivalence", Metrics},
      {"transcript mutations and round trip", Transcripts},
      {"split sizes", Splits},
      {"end-to-end golden", EndToEnd},
      {"calibsim regression", Calibsim},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.Expect(false, std::string("exception: ") + e.what());
    }
    if (v.failures == 0) {
      std::printf("PASS  %s: %s\n", name, v.note.c_str());
    } else {
      ++failed;
      std::printf("FAIL  %s: %zu failure(s), first: %s\n", name, v.failures, v.first.c_str());
    }
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
