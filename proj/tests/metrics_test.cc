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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "emocal/error.h"
#include "emocal/metrics.h"
#include "oracles/metric_oracles.h"

using namespace emocal;
using namespace emocal::metrics;

namespace {

std::vector<Outcome> ToKernel(const std::vector<oracle::Sample>& s) {
  std::vector<Outcome> out;
  for (const auto& x : s) out.push_back({x.correct, x.confidence});
  return out;
}

// Mixes continuous confidences with two-decimal ones so bin edges get hit.
std::vector<oracle::Sample> RandomSamples(std::mt19937_64& rng, size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> cents(0, 100);
  std::vector<oracle::Sample> s(n);
  for (auto& x : s) {
    x.correct = u(rng) < 0.6;
    x.confidence = u(rng) < 0.5 ? u(rng) : cents(rng) / 100.0;
  }
  return s;
}

std::vector<ScoredSample> Labeled(std::initializer_list<std::pair<const char*, const char*>> pg) {
  std::vector<ScoredSample> out;
  for (const auto& [p, g] : pg) out.push_back({p, g, 0.5});
  return out;
}

}  // namespace

TEST_CASE("accuracy") {
  CHECK(Accuracy(Labeled({{"a", "a"}, {"b", "b"}})) == 1.0);
  CHECK(Accuracy(Labeled({{"a", "a"}, {"a", "b"}, {"b", "a"}, {"c", "a"}})) == 0.25);
  CHECK(Accuracy(Labeled({{" A", "a "}})) == 1.0);
  CHECK(Accuracy(Labeled({{"", ""}})) == 0.0);
  CHECK_THROWS_AS(Accuracy(std::vector<ScoredSample>{}), Error);
}

TEST_CASE("macro f1") {
  const std::set<std::string> ab{"a", "b"};
  CHECK(MacroF1(Labeled({{"a", "a"}, {"b", "b"}}), ab) == 1.0);
  CHECK(MacroF1(Labeled({{"b", "a"}, {"b", "a"}}), ab) == 0.0);
  CHECK(MacroF1(Labeled({{"a", "a"}, {"a", "a"}, {"a", "b"}, {"a", "b"}}), ab) == 1.0 / 3.0);
  // An out-of-taxonomy prediction is not a class of its own.
  CHECK(MacroF1(Labeled({{"a", "a"}, {"zzz", "b"}}), ab) == doctest::Approx(0.5).epsilon(1e-15));
  // Classes come from the evaluated set, not the whole taxonomy.
  CHECK(MacroF1(Labeled({{"a", "a"}}), {"a", "b", "c"}) == 1.0);
  const LabelMatcher m(std::map<std::string, std::string>{{"A1", "a"}});
  CHECK(MacroF1(Labeled({{"a1", "a"}, {"b", "b"}}), ab, m) == 1.0);
}

TEST_CASE("worked ece") {
  CHECK(Ece(std::vector<Outcome>{{true, 1.0}, {false, 0.0}}).ece == 0.0);
  const std::vector<Outcome> four{{true, 0.75}, {true, 0.75}, {false, 0.75}, {false, 0.75}};
  const auto r = Ece(four);
  CHECK(r.ece == 0.25);
  CHECK(r.bins.size() == 10);
  CHECK(r.bins[7].count == 4);
  CHECK(r.bins[7].mean_conf == 0.75);
  CHECK(r.bins[7].empirical_acc == 0.5);
  CHECK(Ece(std::vector<Outcome>{{false, 1.0}, {false, 1.0}}).ece == 1.0);
}

TEST_CASE("bin edges") {
  CHECK(BinIndex(0.0, 10) == 0);
  CHECK(BinIndex(0.1, 10) == 1);
  CHECK(BinIndex(0.3, 10) == 3);
  CHECK(BinIndex(0.7, 10) == 7);
  CHECK(BinIndex(std::nextafter(0.3, 0.0), 10) == 2);
  CHECK(BinIndex(0.9, 10) == 9);
  CHECK(BinIndex(1.0, 10) == 9);
  for (int c = 0; c <= 100; ++c) {
    const double x = c / 100.0;
    const size_t b = BinIndex(x, 10);
    CHECK(x >= b / 10.0);
    if (b < 9) CHECK(x < (b + 1) / 10.0);
  }
}

TEST_CASE("brier") {
  CHECK(Brier(std::vector<Outcome>{{true, 0.5}, {false, 0.5}}) == 0.25);
  CHECK(Brier(std::vector<Outcome>{{true, 1.0}}) == 0.0);
  CHECK(Brier(std::vector<Outcome>{{false, 0.8}}) == doctest::Approx(0.64).epsilon(1e-15));
  CHECK_THROWS_AS(Brier(std::vector<Outcome>{}), Error);
  CHECK_THROWS_AS(Brier(std::vector<Outcome>{{true, 1.5}}), Error);
}

TEST_CASE("auc") {
  CHECK(Auc(std::vector<Outcome>{{true, 0.9}, {true, 0.8}, {false, 0.3}}) == 1.0);
  CHECK(Auc(std::vector<Outcome>{{true, 0.5}, {false, 0.5}}) == 0.5);
  CHECK_FALSE(Auc(std::vector<Outcome>{{true, 0.5}, {true, 0.7}}));
  CHECK_FALSE(Auc(std::vector<Outcome>{}));
}

TEST_CASE("oracle equivalence") {
  std::mt19937_64 rng(1000);
  for (int rep = 0; rep < 50; ++rep) {
    const auto s = RandomSamples(rng, 1000);
    const auto k = ToKernel(s);
    const auto ece = Ece(k);
    CHECK(std::abs(ece.ece - oracle::EceDirect(s)) <= 1e-12);
    CHECK(EceParallel(k).ece == ece.ece);
    const auto auc = Auc(k);
    REQUIRE(auc);
    CHECK(std::abs(*auc - *oracle::AucPairs(s)) <= 1e-12);
    CHECK(AucParallel(k) == auc);
    CHECK(std::abs(Brier(k) - oracle::BrierDirect(s)) <= 1e-12);
    CHECK(ece.ece >= 0.0);
    CHECK(ece.ece <= 1.0);
  }
}

TEST_CASE("brier ignores order") {
  std::mt19937_64 rng(3);
  auto k = ToKernel(RandomSamples(rng, 500));
  const double b = Brier(k);
  std::shuffle(k.begin(), k.end(), rng);
  CHECK(Brier(k) == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("perfect predictor") {
  std::vector<ScoredSample> s{{"a", "a", 1.0}, {"b", "b", 1.0}, {"a", "a", 1.0}};
  const auto r = Evaluate(s, {"a", "b"});
  CHECK(r.acc == 1.0);
  CHECK(r.macro_f1 == 1.0);
  CHECK(r.ece == 0.0);
  CHECK(r.brier == 0.0);
  CHECK_FALSE(r.auc);
  CHECK(r.n == 3);
  CHECK(r.bin_stats.size() == 10);
}
