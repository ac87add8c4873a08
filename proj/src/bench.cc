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

#include "emocal/bench.h"

#include <filesystem>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "emocal/emoloop.h"
#include "emocal/lexicon.h"
#include "emocal/numeric.h"

namespace emocal::bench {
namespace {

namespace fs = std::filesystem;

std::string Resolve(const std::string& base, const std::string& path) {
  if (path.empty() || base.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).lexically_normal().string();
}

Json OptionalNumber(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> ReadOptional(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return doc.at(key).get<double>();
}

std::string Percent(double v) { return FormatFixed2(100.0 * v); }
std::string Percent(const std::optional<double>& v) { return v ? Percent(*v) : "—"; }

}  // namespace

Manifest ManifestFromJson(const Json& doc, const std::string& base_dir) {
  Manifest m;
  try {
    m.name = doc.value("name", std::string());
    std::set<std::string> names;
    for (const auto& s : doc.at("subtasks")) {
      SubtaskDef def;
      def.name = s.at("name").get<std::string>();
      def.taxonomy_path = Resolve(base_dir, s.value("taxonomy", std::string()));
      def.loop_path = Resolve(base_dir, s.value("loop", std::string()));
      def.records_path = Resolve(base_dir, s.value("records", std::string()));
      if (def.name.empty()) throw Error("invalid_manifest", "subtask with empty name");
      if (!names.insert(def.name).second) {
        throw Error("invalid_manifest", "duplicate subtask '" + def.name + "'");
      }
      m.subtasks.push_back(std::move(def));
    }
    if (doc.contains("groups")) {
      for (const auto& [group, members] : doc.at("groups").items()) {
        auto list = members.get<std::vector<std::string>>();
        for (const auto& member : list) {
          if (!names.contains(member)) {
            throw Error("invalid_manifest",
                        "group '" + group + "' references unknown subtask '" + member + "'");
          }
        }
        m.groups.emplace_back(group, std::move(list));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid_manifest", std::string("manifest: ") + e.what());
  }
  return m;
}

Manifest LoadManifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot read " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error("parse_error", path + ": " + e.what());
  }
  return ManifestFromJson(doc, fs::path(path).parent_path().string());
}

SubtaskResult EvaluateSubtask(const SubtaskDef& def, std::vector<std::string>* warnings) {
  if (def.records_path.empty()) {
    throw Error("missing_file", "subtask '" + def.name + "' has no records path");
  }
  std::set<std::string> taxonomy;
  LabelMatcher matcher;
  if (!def.taxonomy_path.empty()) {
    const Taxonomy tax = LoadTaxonomy(def.taxonomy_path);
    matcher = LabelMatcher(tax.aliases);
    for (const auto& c : tax.categories) taxonomy.insert(matcher.Canonical(c.label));
  }
  if (!def.loop_path.empty()) {
    const EmotionLoop loop = LoadLoop(def.loop_path);
    for (const auto& label : taxonomy) {
      if (!loop.Contains(label)) {
        throw Error("invalid_manifest", "loop for '" + def.name + "' lacks category '" + label + "'");
      }
    }
    if (taxonomy.empty()) {
      matcher = loop.matcher();
      for (const auto& label : loop.order()) taxonomy.insert(matcher.Canonical(label));
    }
  }

  RecordSet set = ReadRecords(def.records_path);
  if (!set.errors.empty()) {
    throw Error("malformed_records", def.records_path + ": " + SummarizeLineErrors(set.errors));
  }
  if (set.records.empty()) throw Error("empty_subtask", "subtask '" + def.name + "' has no records");

  SubtaskResult result;
  result.name = def.name;
  std::vector<metrics::ScoredSample> samples;
  samples.reserve(set.records.size());
  for (const Record& rec : set.records) {
    const auto gold = rec.gold_label();
    if (!gold) {
      throw Error("missing_gold", def.records_path + ":" + std::to_string(rec.line) +
                                      ": record '" + rec.id() + "' has no gold_label");
    }
    const ParseResult parsed = rec.Parse();
    metrics::ScoredSample s;
    s.gold = *gold;
    s.pred = parsed.transcript.answer.value_or("");
    if (parsed.transcript.confidence) {
      s.confidence = *parsed.transcript.confidence;
    } else {
      s.confidence = 0.5;
      ++result.missing_confidence;
    }
    if (!parsed.verdict.ok) ++result.format_failures;
    if (!taxonomy.empty() && !taxonomy.contains(matcher.Canonical(s.pred))) {
      ++result.out_of_taxonomy;
    }
    samples.push_back(std::move(s));
  }
  result.metrics = metrics::Evaluate(samples, taxonomy, matcher);
  if (warnings) {
    if (result.missing_confidence > 0) {
      warnings->push_back(def.name + ": " + std::to_string(result.missing_confidence) +
                          " sample(s) without confidence evaluated at 0.5");
    }
    if (!result.metrics.auc) {
      warnings->push_back(def.name + ": AUC undefined (only one correctness class)");
    }
  }
  return result;
}

GroupResult AverageGroup(const std::string& name, const std::vector<std::string>& members,
                         const std::vector<const SubtaskResult*>& results, bool weighted) {
  GroupResult g;
  g.name = name;
  g.members = members;
  double total = 0.0;
  double auc_total = 0.0;
  double auc_sum = 0.0;
  for (const SubtaskResult* r : results) {
    const double w = weighted ? static_cast<double>(r->metrics.n) : 1.0;
    total += w;
    g.acc += w * r->metrics.acc;
    g.macro_f1 += w * r->metrics.macro_f1;
    g.ece += w * r->metrics.ece;
    g.brier += w * r->metrics.brier;
    if (r->metrics.auc) {
      auc_sum += w * *r->metrics.auc;
      auc_total += w;
      ++g.auc_members;
    }
  }
  if (total > 0) {
    g.acc /= total;
    g.macro_f1 /= total;
    g.ece /= total;
    g.brier /= total;
  }
  if (g.auc_members > 0) g.auc = auc_sum / auc_total;
  return g;
}

EvalReport Evaluate(const Manifest& manifest, const EvalOptions& options) {
  EvalReport report;
  report.name = manifest.name;
  report.weighted = options.weighted;
  const size_t n = manifest.subtasks.size();
  std::vector<SubtaskResult> results(n);
  std::vector<std::vector<std::string>> warnings(n);
  std::vector<std::exception_ptr> failures(n);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic) if (options.parallel)
  for (long i = 0; i < count; ++i) {
    try {
      results[i] = EvaluateSubtask(manifest.subtasks[i], &warnings[i]);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  report.subtasks = std::move(results);
  for (auto& w : warnings) report.warnings.insert(report.warnings.end(), w.begin(), w.end());

  std::map<std::string, const SubtaskResult*> by_name;
  for (const auto& r : report.subtasks) by_name[r.name] = &r;
  for (const auto& [group, members] : manifest.groups) {
    std::vector<const SubtaskResult*> rs;
    for (const auto& m : members) rs.push_back(by_name.at(m));
    report.groups.push_back(AverageGroup(group, members, rs, options.weighted));
  }
  return report;
}

Json ReportToJson(const EvalReport& report) {
  Json doc;
  doc["name"] = report.name;
  doc["weighting"] = report.weighted ? "samples" : "unweighted";
  Json subtasks = Json::array();
  for (const auto& s : report.subtasks) {
    Json bins = Json::array();
    for (const auto& b : s.metrics.bin_stats) {
      bins.push_back(Json{{"count", b.count},
                          {"mean_conf", b.mean_conf},
                          {"empirical_acc", b.empirical_acc}});
    }
    subtasks.push_back(Json{{"name", s.name},
                            {"n", s.metrics.n},
                            {"acc", s.metrics.acc},
                            {"macro_f1", s.metrics.macro_f1},
                            {"ece", s.metrics.ece},
                            {"brier", s.metrics.brier},
                            {"auc", OptionalNumber(s.metrics.auc)},
                            {"missing_confidence", s.missing_confidence},
                            {"format_failures", s.format_failures},
                            {"out_of_taxonomy", s.out_of_taxonomy},
                            {"bins", bins}});
  }
  doc["subtasks"] = subtasks;
  Json groups = Json::array();
  for (const auto& g : report.groups) {
    groups.push_back(Json{{"name", g.name},
                          {"members", g.members},
                          {"acc", g.acc},
                          {"macro_f1", g.macro_f1},
                          {"ece", g.ece},
                          {"brier", g.brier},
                          {"auc", OptionalNumber(g.auc)},
                          {"auc_members", g.auc_members}});
  }
  doc["groups"] = groups;
  doc["warnings"] = report.warnings;
  return doc;
}

EvalReport ReportFromJson(const nlohmann::json& doc) {
  EvalReport r;
  try {
    r.name = doc.at("name").get<std::string>();
    r.weighted = doc.at("weighting").get<std::string>() == "samples";
    for (const auto& s : doc.at("subtasks")) {
      SubtaskResult sr;
      sr.name = s.at("name").get<std::string>();
      sr.metrics.n = s.at("n").get<size_t>();
      sr.metrics.acc = s.at("acc").get<double>();
      sr.metrics.macro_f1 = s.at("macro_f1").get<double>();
      sr.metrics.ece = s.at("ece").get<double>();
      sr.metrics.brier = s.at("brier").get<double>();
      sr.metrics.auc = ReadOptional(s, "auc");
      sr.missing_confidence = s.at("missing_confidence").get<size_t>();
      sr.format_failures = s.at("format_failures").get<size_t>();
      sr.out_of_taxonomy = s.at("out_of_taxonomy").get<size_t>();
      for (const auto& b : s.at("bins")) {
        sr.metrics.bin_stats.push_back({b.at("count").get<size_t>(), b.at("mean_conf").get<double>(),
                                        b.at("empirical_acc").get<double>()});
      }
      r.subtasks.push_back(std::move(sr));
    }
    for (const auto& g : doc.at("groups")) {
      GroupResult gr;
      gr.name = g.at("name").get<std::string>();
      gr.members = g.at("members").get<std::vector<std::string>>();
      gr.acc = g.at("acc").get<double>();
      gr.macro_f1 = g.at("macro_f1").get<double>();
      gr.ece = g.at("ece").get<double>();
      gr.brier = g.at("brier").get<double>();
      gr.auc = ReadOptional(g, "auc");
      gr.auc_members = g.at("auc_members").get<size_t>();
      r.groups.push_back(std::move(gr));
    }
    r.warnings = doc.at("warnings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse_error", std::string("report: ") + e.what());
  }
  return r;
}

std::string RenderMarkdown(const EvalReport& report, const std::string& system_name) {
  const std::string system = system_name.empty() ? report.name : system_name;
  std::map<std::string, const SubtaskResult*> by_name;
  for (const auto& s : report.subtasks) by_name[s.name] = &s;

  struct Column {
    std::string title;
    double acc, f1, ece, brier;
    std::optional<double> auc;
  };
  auto table_pair = [&](std::ostringstream& out, const std::vector<Column>& cols) {
    out << "| System |";
    for (const auto& c : cols) out << " " << c.title << " | |";
    out << "\n|---|";
    for (size_t i = 0; i < cols.size(); ++i) out << "---|---|";
    out << "\n| |";
    for (size_t i = 0; i < cols.size(); ++i) out << " Acc | F1 |";
    out << "\n| " << system << " |";
    for (const auto& c : cols) out << " " << Percent(c.acc) << " | " << Percent(c.f1) << " |";
    out << "\n\n| System |";
    for (const auto& c : cols) out << " " << c.title << " | | |";
    out << "\n|---|";
    for (size_t i = 0; i < cols.size(); ++i) out << "---|---|---|";
    out << "\n| |";
    for (size_t i = 0; i < cols.size(); ++i) out << " ECE | Brier | AUC |";
    out << "\n| " << system << " |";
    for (const auto& c : cols) {
      out << " " << Percent(c.ece) << " | " << Percent(c.brier) << " | " << Percent(c.auc) << " |";
    }
    out << "\n";
  };
  auto subtask_column = [](const SubtaskResult& s) {
    const auto& m = s.metrics;
    return Column{s.name, m.acc, m.macro_f1, m.ece, m.brier, m.auc};
  };

  std::ostringstream out;
  out << "# " << report.name << "\n";
  std::set<std::string> grouped;
  for (const auto& g : report.groups) {
    out << "\n## " << g.name << "\n\n";
    std::vector<Column> cols;
    for (const auto& m : g.members) {
      cols.push_back(subtask_column(*by_name.at(m)));
      grouped.insert(m);
    }
    cols.push_back({"Average", g.acc, g.macro_f1, g.ece, g.brier, g.auc});
    table_pair(out, cols);
  }
  std::vector<Column> rest;
  for (const auto& s : report.subtasks) {
    if (!grouped.contains(s.name)) rest.push_back(subtask_column(s));
  }
  if (!rest.empty()) {
    out << "\n## Ungrouped\n\n";
    table_pair(out, rest);
  }
  if (!report.warnings.empty()) {
    out << "\n## Warnings\n\n";
    for (const auto& w : report.warnings) out << "- " << w << "\n";
  }
  return out.str();
}

SplitRatios ParseRatios(const std::string& text) {
  SplitRatios r;
  uint64_t parts[3];
  char sep1 = 0, sep2 = 0;
  // Stream extraction into unsigned wraps "-1", so screen characters first.
  if (text.find_first_not_of("0123456789:, \t") != std::string::npos) {
    throw Error("invalid_argument", "ratios must look like 6:3:1");
  }
  std::istringstream in(text);
  if (!(in >> parts[0] >> sep1 >> parts[1] >> sep2 >> parts[2]) || !(in >> std::ws).eof() ||
      (sep1 != ':' && sep1 != ',') || sep2 != sep1) {
    throw Error("invalid_argument", "ratios must look like 6:3:1");
  }
  if (parts[0] == 0 || parts[1] == 0 || parts[2] == 0) {
    throw Error("invalid_argument", "ratios must be positive");
  }
  r.first = parts[0];
  r.second = parts[1];
  r.third = parts[2];
  return r;
}

std::array<size_t, 3> SplitSizes(size_t n, const SplitRatios& ratios) {
  if (ratios.first == 0 || ratios.second == 0 || ratios.third == 0) {
    throw Error("invalid_argument", "ratios must be positive");
  }
  const unsigned __int128 total = ratios.first + ratios.second + ratios.third;
  const auto a = static_cast<size_t>((static_cast<unsigned __int128>(n) * ratios.first) / total);
  const auto b = static_cast<size_t>((static_cast<unsigned __int128>(n) * ratios.second) / total);
  return {a, b, n - a - b};
}

std::vector<size_t> SeededPermutation(size_t n, uint64_t seed) {
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (size_t i = n; i > 1; --i) {
    const uint64_t bound = i;
    const uint64_t threshold = (0 - bound) % bound;
    uint64_t r;
    do {
      r = rng();
    } while (r < threshold);
    std::swap(perm[i - 1], perm[r % bound]);
  }
  return perm;
}

}  // namespace emocal::bench
