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

// emocal command-line entry point.
//
// Exit codes: 0 success, 1 domain error, 2 usage error. Data goes to stdout
// or the -o path, diagnostics to stderr.

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "emocal/batch.h"
#include "emocal/bench.h"
#include "emocal/calibsim.h"
#include "emocal/confidence.h"
#include "emocal/emoloop.h"
#include "emocal/error.h"
#include "emocal/grpo.h"
#include "emocal/lexicon.h"
#include "emocal/numeric.h"
#include "emocal/records.h"
#include "emocal/reward.h"
#include "emocal/transcript.h"

namespace {

using emocal::Error;
using emocal::Json;
using emocal::Record;

// Records held in memory at once by the streaming subcommands.
constexpr size_t kChunk = 4096;

struct Output {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path, std::ios::binary);
    if (!file) throw Error("io_error", "cannot write " + path);
    stream = &file;
  }
  std::ostream& operator*() { return *stream; }
  void Finish(const std::string& path) {
    stream->flush();
    if (!*stream) throw Error("io_error", "failed writing " + (path.empty() ? "stdout" : path));
  }
};

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing_file", "cannot read " + path);
  return in;
}

void Warn(const Record& r, const emocal::batch::ErrorInfo& e) {
  std::cerr << "warning: line " << r.line << ": " << e.code << ": " << e.message << "\n";
}

void FailOnLineErrors(const std::vector<emocal::LineError>& errors) {
  if (!errors.empty()) throw Error("malformed_records", emocal::SummarizeLineErrors(errors));
}

void SetJobs(int jobs) {
  if (jobs < 1) throw Error("invalid_argument", "--jobs must be at least 1");
  omp_set_num_threads(jobs);
}

// Reads `in` in chunks and hands each chunk to `fn`.
template <typename Fn>
void ForEachChunk(std::istream& in, Fn fn) {
  emocal::RecordReader reader(in);
  std::vector<Record> chunk;
  Record r;
  while (reader.Next(r)) {
    chunk.push_back(std::move(r));
    if (chunk.size() == kChunk) {
      fn(chunk);
      chunk.clear();
    }
  }
  if (!chunk.empty()) fn(chunk);
  FailOnLineErrors(reader.errors());
}

struct LoopBuildArgs {
  std::string lexicon, taxonomy, out;
  bool heuristic = false;
};

void RunLoopBuild(const LoopBuildArgs& a) {
  const auto lexicon = emocal::LoadLexicon(a.lexicon);
  const auto taxonomy = emocal::LoadTaxonomy(a.taxonomy);
  emocal::LoopBuildOptions opts;
  opts.allow_heuristic = a.heuristic;
  std::vector<std::string> warnings;
  const auto loop = emocal::BuildLoopForTaxonomy(taxonomy, lexicon, opts, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  Output out(a.out);
  *out << emocal::LoopToJson(loop).dump(2) << "\n";
  out.Finish(a.out);
}

struct LoopDistArgs {
  std::string loop, a, b;
};

void RunLoopDist(const LoopDistArgs& a) {
  const auto loop = emocal::LoadLoop(a.loop);
  std::cout << emocal::FormatFixed2(emocal::Round2(loop.Distance(a.a, a.b))) << "\n";
}

struct ParseArgs {
  std::string records, raw, out;
  bool strict = false;
};

void RunParse(const ParseArgs& a) {
  if (a.records.empty() == a.raw.empty()) {
    throw CLI::ValidationError("parse", "give exactly one of --records or --raw");
  }
  Output out(a.out);
  if (!a.raw.empty()) {
    const auto p = emocal::ParseTranscript(a.raw, a.strict);
    Json doc = Json::object();
    emocal::AddParsedFields(doc, p);
    doc["violations"] = p.verdict.violations;
    *out << doc.dump() << "\n";
    out.Finish(a.out);
    return;
  }
  auto in = OpenInput(a.records);
  ForEachChunk(in, [&](std::vector<Record>& chunk) {
    for (auto& r : chunk) {
      const auto p = r.Parse();
      if (a.strict && !p.verdict.ok) {
        emocal::ParseTranscript(r.raw(), true);  // throws with the violation list
      }
      emocal::AddParsedFields(r.doc, p);
      r.doc["violations"] = p.verdict.violations;
      emocal::WriteRecord(*out, r);
    }
  });
  out.Finish(a.out);
}

struct AnnotateArgs {
  std::string loop, records, out;
  int jobs = 1;
};

void RunAnnotate(const AnnotateArgs& a) {
  SetJobs(a.jobs);
  const auto loop = emocal::LoadLoop(a.loop);
  auto in = OpenInput(a.records);
  Output out(a.out);
  ForEachChunk(in, [&](std::vector<Record>& chunk) {
    const auto done = emocal::batch::AnnotateBatch(chunk, loop, a.jobs > 1);
    for (size_t i = 0; i < chunk.size(); ++i) {
      if (done[i].error) {
        Warn(chunk[i], *done[i].error);
        emocal::WriteRecord(*out, chunk[i]);
      } else {
        emocal::WriteRecord(*out, *done[i].value);
      }
    }
  });
  out.Finish(a.out);
}

struct ScoreArgs {
  std::string loop, records, out, reward = "log";
  int jobs = 1;
  bool advantages = false;
  bool normalize_adv = false;
};

void RunScore(const ScoreArgs& a) {
  SetJobs(a.jobs);
  const auto variant = emocal::ParseVariant(a.reward);
  const auto loop = emocal::LoadLoop(a.loop);
  auto in = OpenInput(a.records);
  Output out(a.out);
  if (a.advantages) {
    // Group advantages need every member of a group, so this mode is not
    // streamed.
    const auto set = emocal::ParseRecords(in);
    FailOnLineErrors(set.errors);
    const auto scored = emocal::batch::ScoreBatch(set.records, loop, variant, a.normalize_adv);
    for (size_t i = 0; i < set.records.size(); ++i) {
      Record r = set.records[i];
      r.doc["reward"] = emocal::RewardToJson(scored.rewards[i]);
      r.doc["advantage"] = scored.advantages[i];
      emocal::WriteRecord(*out, r);
    }
    out.Finish(a.out);
    return;
  }
  ForEachChunk(in, [&](std::vector<Record>& chunk) {
    const auto done =
        emocal::batch::ScoreRecords(chunk, loop.matcher(), variant, {}, a.jobs > 1);
    for (size_t i = 0; i < chunk.size(); ++i) {
      if (done[i].error) {
        Warn(chunk[i], *done[i].error);
      } else {
        chunk[i].doc["reward"] = emocal::RewardToJson(*done[i].value);
      }
      emocal::WriteRecord(*out, chunk[i]);
    }
  });
  out.Finish(a.out);
}

struct EvalArgs {
  std::string manifest, out, markdown, system;
  bool weighted = false;
  int jobs = 1;
};

void RunEval(const EvalArgs& a) {
  SetJobs(a.jobs);
  const auto manifest = emocal::bench::LoadManifest(a.manifest);
  emocal::bench::EvalOptions opts;
  opts.weighted = a.weighted;
  opts.parallel = a.jobs > 1;
  const auto report = emocal::bench::Evaluate(manifest, opts);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  Output out(a.out);
  *out << emocal::bench::ReportToJson(report).dump(2) << "\n";
  out.Finish(a.out);
  if (!a.markdown.empty()) {
    Output md(a.markdown);
    *md << emocal::bench::RenderMarkdown(report, a.system);
    md.Finish(a.markdown);
  }
}

struct SplitArgs {
  std::string records, ratios = "6:3:1", out_dir;
  uint64_t seed = 0;
};

void RunSplit(const SplitArgs& a) {
  const auto ratios = emocal::bench::ParseRatios(a.ratios);
  const auto set = emocal::ReadRecords(a.records);
  FailOnLineErrors(set.errors);
  const auto parts = emocal::bench::SplitDataset(set.records, ratios, a.seed);
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) throw Error("io_error", "cannot create " + a.out_dir + ": " + ec.message());
  for (size_t i = 0; i < parts.size(); ++i) {
    const auto path = (std::filesystem::path(a.out_dir) /
                       ("split_" + std::to_string(i + 1) + ".jsonl")).string();
    emocal::WriteRecords(path, parts[i]);
    std::cout << path << "\t" << parts[i].size() << "\n";
  }
}

struct SimulateArgs {
  emocal::calibsim::SimConfig cfg;
  std::string reward = "log", out;
};

void RunSimulate(SimulateArgs a) {
  a.cfg.reward_variant = emocal::ParseVariant(a.reward);
  const auto traj = emocal::calibsim::RunSim(a.cfg);
  if (a.out.empty()) {
    std::cout << emocal::calibsim::TrajectoryToCsv(traj);
  } else {
    emocal::calibsim::ExportTrajectory(traj, a.out);
  }
  if (!traj.steps.empty()) {
    const auto& last = traj.steps.back();
    std::fprintf(stderr, "final mean_confidence %.6f ece %.6f\n", last.mean_confidence, last.ece);
  }
}

struct GrpoArgs {
  std::string groups, out;
  emocal::grpo::GrpoConfig cfg;
  int jobs = 1;
};

void RunGrpo(const GrpoArgs& a) {
  SetJobs(a.jobs);
  const auto set = emocal::grpo::ReadRolloutGroups(a.groups);
  FailOnLineErrors(set.errors);
  const auto results = emocal::grpo::GrpoObjectiveBatch(set.groups, a.cfg, a.jobs > 1);
  Output out(a.out);
  for (size_t i = 0; i < results.size(); ++i) {
    *out << emocal::grpo::ObjectiveToJson(set.groups[i].query_id, results[i]).dump() << "\n";
  }
  out.Finish(a.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"emocal: emotion loops, confidence targets, rewards and calibration metrics"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  std::function<void()> action;

  auto* loop = app.add_subcommand("loop", "Build and query emotion loops");
  loop->require_subcommand(1);

  LoopBuildArgs lb;
  auto* build = loop->add_subcommand("build", "Build the loop of a taxonomy");
  build->add_option("--lexicon", lb.lexicon, "VAD lexicon (TSV)")->required();
  build->add_option("--taxonomy", lb.taxonomy, "Taxonomy (JSON)")->required();
  build->add_option("-o,--out", lb.out, "Output loop document (default stdout)");
  build->add_flag("--heuristic", lb.heuristic,
                  "Allow a non-exact tour for flat taxonomies above 16 categories");
  build->callback([&] { action = [&] { RunLoopBuild(lb); }; });

  LoopDistArgs ld;
  auto* dist = loop->add_subcommand("dist", "Print the normalized distance of two labels");
  dist->add_option("--loop", ld.loop, "Loop document")->required();
  dist->add_option("a", ld.a, "First label")->required();
  dist->add_option("b", ld.b, "Second label")->required();
  dist->callback([&] { action = [&] { RunLoopDist(ld); }; });

  ParseArgs pa;
  auto* parse = app.add_subcommand("parse", "Validate tagged transcripts");
  parse->add_option("--records", pa.records, "Transcript records (JSONL)");
  parse->add_option("--raw", pa.raw, "A single raw transcript");
  parse->add_option("-o,--out", pa.out, "Output (default stdout)");
  parse->add_flag("--strict", pa.strict, "Fail on the first format violation");
  parse->callback([&] { action = [&] { RunParse(pa); }; });

  AnnotateArgs an;
  auto* annotate = app.add_subcommand("annotate", "Insert confidence targets");
  annotate->add_option("--loop", an.loop, "Loop document")->required();
  annotate->add_option("--records", an.records, "Transcript records (JSONL)")->required();
  annotate->add_option("-o,--out", an.out, "Output records (default stdout)");
  annotate->add_option("--jobs", an.jobs, "Worker threads")->capture_default_str();
  annotate->callback([&] { action = [&] { RunAnnotate(an); }; });

  ScoreArgs sc;
  auto* score = app.add_subcommand("score", "Attach reward breakdowns");
  score->add_option("--loop", sc.loop, "Loop document")->required();
  score->add_option("--records", sc.records, "Transcript records (JSONL)")->required();
  score->add_option("--reward", sc.reward, "Confidence reward: log or brier")
      ->check(CLI::IsMember({"log", "log_likelihood", "brier"}))
      ->capture_default_str();
  score->add_option("-o,--out", sc.out, "Output records (default stdout)");
  score->add_option("--jobs", sc.jobs, "Worker threads")->capture_default_str();
  score->add_flag("--advantages", sc.advantages,
                  "Also attach group advantages (records grouped by query_id)");
  score->add_flag("--normalize-adv", sc.normalize_adv, "Divide advantages by the group std");
  score->callback([&] { action = [&] { RunScore(sc); }; });

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate a benchmark manifest");
  eval->add_option("--manifest", ev.manifest, "Manifest (JSON)")->required();
  eval->add_option("-o,--out", ev.out, "Report JSON (default stdout)");
  eval->add_option("--markdown", ev.markdown, "Also write a Markdown report");
  eval->add_option("--system", ev.system, "Row label in the Markdown tables");
  eval->add_flag("--weighted", ev.weighted, "Weight group averages by sample count");
  eval->add_option("--jobs", ev.jobs, "Worker threads")->capture_default_str();
  eval->callback([&] { action = [&] { RunEval(ev); }; });

  SplitArgs sp;
  auto* split = app.add_subcommand("split", "Seeded three-way dataset split");
  split->add_option("--records", sp.records, "Records (JSONL)")->required();
  split->add_option("--seed", sp.seed, "Shuffle seed")->capture_default_str();
  split->add_option("--ratios", sp.ratios, "Ratios a:b:c")->capture_default_str();
  split->add_option("--out-dir", sp.out_dir, "Directory for split_{1,2,3}.jsonl")->required();
  split->callback([&] { action = [&] { RunSplit(sp); }; });

  SimulateArgs si;
  auto* sim = app.add_subcommand("simulate", "Toy confidence-policy simulation");
  sim->add_option("--steps", si.cfg.steps, "Update steps")->capture_default_str();
  sim->add_option("--group-size", si.cfg.group_size, "Responses per group")->capture_default_str();
  sim->add_option("--seed", si.cfg.seed, "RNG seed")->capture_default_str();
  sim->add_option("--accuracy", si.cfg.true_accuracy, "Answer accuracy")->capture_default_str();
  sim->add_option("--reward", si.reward, "Confidence reward: log or brier")
      ->check(CLI::IsMember({"log", "log_likelihood", "brier"}))
      ->capture_default_str();
  sim->add_flag("--normalize-adv", si.cfg.normalize_advantage, "Std-normalize advantages");
  sim->add_option("--lr", si.cfg.learning_rate, "Learning rate")->capture_default_str();
  sim->add_option("--correlation", si.cfg.answer_correlation,
                  "Probability a response shares its query's correctness")
      ->capture_default_str();
  sim->add_option("--out", si.out, "Trajectory CSV (default stdout)");
  sim->callback([&] { action = [&] { RunSimulate(si); }; });

  GrpoArgs gr;
  auto* grpo = app.add_subcommand("grpo", "Evaluate the clipped group objective on rollouts");
  grpo->add_option("--groups", gr.groups, "Rollout groups (JSONL)")->required();
  grpo->add_option("-o,--out", gr.out, "Output (default stdout)");
  grpo->add_option("--clip-eps", gr.cfg.clip_eps, "Ratio clip range")->capture_default_str();
  grpo->add_option("--kl-beta", gr.cfg.kl_beta, "KL coefficient")->capture_default_str();
  grpo->add_flag("--normalize-adv", gr.cfg.normalize_advantage, "Std-normalize advantages");
  grpo->add_option("--jobs", gr.jobs, "Worker threads")->capture_default_str();
  grpo->callback([&] { action = [&] { RunGrpo(gr); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (action) action();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
