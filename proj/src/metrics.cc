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

#include "emocal/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "emocal/error.h"

namespace emocal::metrics {
namespace {

template <typename T>
void RequireNonEmpty(std::span<const T> items) {
  if (items.empty()) throw Error("empty_input", "metric needs at least one sample");
}

CalibrationResult EceFromBins(std::span<const Outcome> outcomes,
                              std::span<const uint32_t> bin_of, size_t bins) {
  std::vector<double> conf_sum(bins, 0.0);
  std::vector<size_t> correct(bins, 0);
  CalibrationResult out;
  out.bins.assign(bins, {});
  for (size_t i = 0; i < outcomes.size(); ++i) {
    const size_t b = bin_of[i];
    ++out.bins[b].count;
    conf_sum[b] += outcomes[i].confidence;
    if (outcomes[i].correct) ++correct[b];
  }
  const double n = static_cast<double>(outcomes.size());
  for (size_t b = 0; b < bins; ++b) {
    BinStat& s = out.bins[b];
    if (s.count == 0) continue;
    const double c = static_cast<double>(s.count);
    s.mean_conf = conf_sum[b] / c;
    s.empirical_acc = static_cast<double>(correct[b]) / c;
    out.ece += (c / n) * std::abs(s.mean_conf - s.empirical_acc);
  }
  return out;
}

void CheckConfidences(std::span<const Outcome> outcomes) {
  for (const auto& o : outcomes) {
    if (!(o.confidence >= 0.0 && o.confidence <= 1.0)) {
      throw Error("invalid_argument", "confidence outside [0, 1]");
    }
  }
}

// Twice the Mann-Whitney count, kept integral so every evaluation order
// gives the same value.
template <bool kParallel>
std::optional<double> AucImpl(std::span<const Outcome> outcomes) {
  CheckConfidences(outcomes);
  std::vector<double> wrong;
  std::vector<double> right;
  for (const auto& o : outcomes) (o.correct ? right : wrong).push_back(o.confidence);
  if (wrong.empty() || right.empty()) return std::nullopt;
  std::sort(wrong.begin(), wrong.end());
  uint64_t twice = 0;
  const long count = static_cast<long>(right.size());
  auto score = [&](double c) -> uint64_t {
    const auto lo = std::lower_bound(wrong.begin(), wrong.end(), c);
    const auto hi = std::upper_bound(lo, wrong.end(), c);
    return 2 * static_cast<uint64_t>(lo - wrong.begin()) + static_cast<uint64_t>(hi - lo);
  };
  if constexpr (kParallel) {
#pragma omp parallel for reduction(+ : twice) schedule(static)
    for (long i = 0; i < count; ++i) twice += score(right[i]);
  } else {
    for (long i = 0; i < count; ++i) twice += score(right[i]);
  }
  const double pairs = static_cast<double>(right.size()) * static_cast<double>(wrong.size());
  return static_cast<double>(twice) / (2.0 * pairs);
}

}  // namespace

std::vector<Outcome> ToOutcomes(std::span<const ScoredSample> samples,
                                const LabelMatcher& matcher) {
  std::vector<Outcome> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    const bool correct = !TrimView(s.pred).empty() && matcher.Match(s.pred, s.gold);
    out.push_back({correct, s.confidence});
  }
  return out;
}

double Accuracy(std::span<const ScoredSample> samples, const LabelMatcher& matcher) {
  RequireNonEmpty(samples);
  size_t correct = 0;
  for (const auto& o : ToOutcomes(samples, matcher)) correct += o.correct ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

double MacroF1(std::span<const ScoredSample> samples, const std::set<std::string>& taxonomy,
               const LabelMatcher& matcher) {
  RequireNonEmpty(samples);
  struct Counts {
    size_t tp = 0, fp = 0, fn = 0;
  };
  std::map<std::string, Counts> classes;
  for (const auto& s : samples) {
    const std::string gold = matcher.Canonical(s.gold);
    const std::string pred = matcher.Canonical(s.pred);
    const bool in_taxonomy = !pred.empty() && (taxonomy.empty() || taxonomy.contains(pred));
    classes[gold];
    if (in_taxonomy) classes[pred];
    if (in_taxonomy && pred == gold) {
      ++classes[gold].tp;
      continue;
    }
    ++classes[gold].fn;
    if (in_taxonomy) ++classes[pred].fp;
  }
  double sum = 0.0;
  for (const auto& [label, c] : classes) {
    const double predicted = static_cast<double>(c.tp + c.fp);
    const double actual = static_cast<double>(c.tp + c.fn);
    const double p = predicted > 0 ? static_cast<double>(c.tp) / predicted : 0.0;
    const double r = actual > 0 ? static_cast<double>(c.tp) / actual : 0.0;
    sum += (p + r) > 0 ? 2.0 * p * r / (p + r) : 0.0;
  }
  return sum / static_cast<double>(classes.size());
}

size_t BinIndex(double confidence, size_t bins) {
  const double nb = static_cast<double>(bins);
  long b = static_cast<long>(std::floor(confidence * nb));
  b = std::clamp(b, 0L, static_cast<long>(bins) - 1);
  // Settle on the interval test against the same edges b / B.
  while (b > 0 && confidence < static_cast<double>(b) / nb) --b;
  while (b + 1 < static_cast<long>(bins) && confidence >= static_cast<double>(b + 1) / nb) ++b;
  return static_cast<size_t>(b);
}

CalibrationResult Ece(std::span<const Outcome> outcomes, size_t bins) {
  RequireNonEmpty(outcomes);
  CheckConfidences(outcomes);
  std::vector<uint32_t> bin_of(outcomes.size());
  for (size_t i = 0; i < outcomes.size(); ++i) {
    bin_of[i] = static_cast<uint32_t>(BinIndex(outcomes[i].confidence, bins));
  }
  return EceFromBins(outcomes, bin_of, bins);
}

CalibrationResult EceParallel(std::span<const Outcome> outcomes, size_t bins) {
  RequireNonEmpty(outcomes);
  CheckConfidences(outcomes);
  std::vector<uint32_t> bin_of(outcomes.size());
  const long count = static_cast<long>(outcomes.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    bin_of[i] = static_cast<uint32_t>(BinIndex(outcomes[i].confidence, bins));
  }
  // Accumulation stays sequential so the sums match the serial kernel.
  return EceFromBins(outcomes, bin_of, bins);
}

double Brier(std::span<const Outcome> outcomes) {
  RequireNonEmpty(outcomes);
  CheckConfidences(outcomes);
  double sum = 0.0;
  for (const auto& o : outcomes) {
    const double gap = o.confidence - (o.correct ? 1.0 : 0.0);
    sum += gap * gap;
  }
  return sum / static_cast<double>(outcomes.size());
}

std::optional<double> Auc(std::span<const Outcome> outcomes) { return AucImpl<false>(outcomes); }
std::optional<double> AucParallel(std::span<const Outcome> outcomes) {
  return AucImpl<true>(outcomes);
}

MetricsReport Evaluate(std::span<const ScoredSample> samples,
                       const std::set<std::string>& taxonomy, const LabelMatcher& matcher) {
  RequireNonEmpty(samples);
  const auto outcomes = ToOutcomes(samples, matcher);
  MetricsReport r;
  r.n = samples.size();
  r.acc = Accuracy(samples, matcher);
  r.macro_f1 = MacroF1(samples, taxonomy, matcher);
  auto cal = Ece(outcomes);
  r.ece = cal.ece;
  r.bin_stats = std::move(cal.bins);
  r.brier = Brier(outcomes);
  r.auc = Auc(outcomes);
  return r;
}

}  // namespace emocal::metrics
