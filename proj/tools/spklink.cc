// tools/spklink.cc

// Copyright 2026  spklink authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: spklink <synth|train-plda|link|sweep|eval|report>.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spklink/binary_io.h"
#include "spklink/common.h"
#include "spklink/evec.h"
#include "spklink/identities.h"
#include "spklink/manifest.h"
#include "spklink/metrics.h"
#include "spklink/pipeline.h"
#include "spklink/report.h"
#include "spklink/rttm.h"
#include "spklink/sweep.h"
#include "spklink/synthgen.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace spklink {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> ParseNumberList(const std::string &text,
                                    const std::string &flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw UsageError(flag + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::string ReadJsonFile(const std::string &path) {
  try {
    return ReadFileBytes(path);
  } catch (const DataError &e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string out;
  std::string params;
  std::optional<uint64_t> seed;
  std::optional<int> dim, tapes, speakers, recurring, known;
  std::optional<double> split_prob, label_noise, annotated_fraction;
};

int RunSynth(const SynthArgs &a) {
  SynthConfig config;
  if (!a.params.empty()) config = SynthConfigFromJson(ReadJsonFile(a.params));
  if (a.seed) config.seed = *a.seed;
  if (a.dim) config.dim = *a.dim;
  if (a.tapes) config.n_tapes = *a.tapes;
  if (a.speakers) config.speakers_total = *a.speakers;
  if (a.recurring) config.recurring_speakers = *a.recurring;
  if (a.known) config.known_speakers = *a.known;
  if (a.split_prob) config.stage1_split_prob = *a.split_prob;
  if (a.label_noise) config.stage1_label_noise = *a.label_noise;
  if (a.annotated_fraction) config.annotated_fraction = *a.annotated_fraction;
  SynthArchive archive = GenerateArchive(config);
  WriteArchive(archive, a.out);
  WriteFileBytes((fs::path(a.out) / "synth_config.json").string(),
                 SynthConfigToJson(config));
  SPKLINK_LOG << "wrote " << config.n_tapes << " tapes, "
              << archive.reference.size() << " reference segments, "
              << archive.segment_embeddings.size() << " embeddings to "
              << a.out;
  return kExitOk;
}

// ------------------------------------------------------------ train-plda

std::map<std::string, std::string> ReadUtt2Spk(const std::string &path) {
  std::map<std::string, std::string> out;
  std::istringstream is(ReadFileBytes(path));
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string utt, spk, extra;
    if (!(ls >> utt)) continue;
    if (!(ls >> spk) || (ls >> extra))
      throw DataError(path + ": line " + std::to_string(line_no) +
                      ": expected '<utterance> <speaker>'");
    out[utt] = spk;
  }
  return out;
}

struct TrainArgs {
  std::string train;
  std::string utt2spk;
  std::string out;
  int iterations = 10;
};

int RunTrain(const TrainArgs &a) {
  std::vector<Embedding> train = ReadEvecFile(a.train);
  std::map<std::string, std::string> utt2spk;
  if (!a.utt2spk.empty()) utt2spk = ReadUtt2Spk(a.utt2spk);
  PldaFitOptions opts;
  opts.iterations = a.iterations;
  TrainedPlda trained =
      TrainPlda(train, opts, a.utt2spk.empty() ? nullptr : &utt2spk);
  for (std::size_t it = 0; it < trained.stats.log_likelihood.size(); ++it)
    SPKLINK_LOG << "iteration " << it << " log-likelihood "
                << trained.stats.log_likelihood[it];
  WritePldaFile(a.out, trained.model, trained.preprocess);
  return kExitOk;
}

// ------------------------------------------------------------ link/sweep

struct LinkArgs {
  std::string hypothesis;
  std::string segments;
  std::string speakers;
  std::string known;
  std::string model;
  std::string manifest;
  std::string out;
  std::string backing = "auto";
  std::string scratch_dir;
  double min_duration = 10.0;
  int64_t block_size = 1024;
  uint64_t memory_budget = uint64_t(2) << 30;
};

void AddLinkOptions(CLI::App *sub, LinkArgs *a) {
  sub->add_option("--hypothesis", a->hypothesis, "Stage-1 RTTM")
      ->required();
  sub->add_option("--segments", a->segments,
                  "EVEC with one embedding per hypothesis segment");
  sub->add_option("--speakers", a->speakers,
                  "EVEC with one embedding per pseudo-speaker (tape/label)");
  sub->add_option("--known", a->known, "EVEC of known-speaker enrollments");
  sub->add_option("--model", a->model, "PLDA1 model")->required();
  sub->add_option("--manifest", a->manifest, "Archive manifest (JSON lines)");
  sub->add_option("--out", a->out, "Output directory")->required();
  sub->add_option("--min-duration", a->min_duration,
                  "Pseudo-speaker duration floor in seconds");
  sub->add_option("--block-size", a->block_size, "Scoring tile size");
  sub->add_option("--memory-budget", a->memory_budget,
                  "Largest in-memory similarity store in bytes");
  sub->add_option("--backing", a->backing, "Similarity store")
      ->check(CLI::IsMember({"auto", "memory", "disk"}));
  sub->add_option("--scratch-dir", a->scratch_dir,
                  "Directory for disk-backed stores (default: --out)");
}

class ProgressPrinter {
 public:
  ProgressPrinter()
      : start_(std::chrono::steady_clock::now()), last_(start_) {}

  void operator()(uint64_t done, uint64_t total) {
    auto now = std::chrono::steady_clock::now();
    if (done < total && now - last_ < std::chrono::seconds(2)) return;
    last_ = now;
    const double secs =
        std::chrono::duration<double>(now - start_).count();
    std::fprintf(stderr,
                 "PROGRESS scoring pairs=%llu/%llu (%.1f%%) elapsed=%.1fs "
                 "rate=%.3g pairs/s\n",
                 static_cast<unsigned long long>(done),
                 static_cast<unsigned long long>(total),
                 total ? 100.0 * done / total : 100.0, secs,
                 secs > 0 ? done / secs : 0.0);
  }

 private:
  std::chrono::steady_clock::time_point start_, last_;
};

struct LoadedLink {
  LinkInputs inputs;
  std::optional<ArchiveManifest> manifest;
};

LoadedLink LoadLinkInputs(const LinkArgs &a) {
  if (a.segments.empty() == a.speakers.empty())
    throw UsageError("exactly one of --segments and --speakers is required");
  LoadedLink l;
  LinkInputs &in = l.inputs;
  in.hypothesis = ReadRttmFile(a.hypothesis);
  if (!a.manifest.empty()) {
    l.manifest = ReadManifestFile(a.manifest);
    CheckSegmentsAgainstManifest(in.hypothesis, *l.manifest);
  }
  if (!a.segments.empty()) in.segment_embeddings = ReadEvecFile(a.segments);
  if (!a.speakers.empty()) in.speaker_embeddings = ReadEvecFile(a.speakers);
  if (!a.known.empty()) in.known = ReadEvecFile(a.known);
  ReadPldaFile(a.model, &in.model, &in.preprocess);
  in.min_duration = a.min_duration;
  if (!(a.min_duration > 0.0)) throw UsageError("--min-duration must be > 0");
  if (a.block_size < 1) throw UsageError("--block-size must be positive");
  in.similarity.block_size = a.block_size;
  in.similarity.memory_budget_bytes = a.memory_budget;
  in.similarity.backing = a.backing == "memory" ? BackingChoice::kMemory
                          : a.backing == "disk" ? BackingChoice::kDisk
                                                : BackingChoice::kAuto;
  const fs::path scratch(a.scratch_dir.empty() ? a.out : a.scratch_dir);
  fs::create_directories(scratch);
  in.similarity.disk_path = (scratch / "similarity.cond").string();
  in.similarity.remove_disk_file_on_close = true;
  in.linkage.scratch_path = (scratch / "linkage.cond").string();
  return l;
}

void LogStoreChoice(const LinkState &state) {
  SPKLINK_LOG << "similarity store: " << state.distances.size()
              << " entries, "
              << (state.distances.backing() == Backing::kDisk ? "disk"
                                                              : "memory");
}

int RunLink(const LinkArgs &a, double threshold) {
  LoadedLink l = LoadLinkInputs(a);
  fs::create_directories(a.out);
  l.inputs.similarity.progress = ProgressPrinter();
  LinkState state = BuildLinkState(l.inputs);
  LogStoreChoice(state);
  std::vector<int> clusters = CutDendrogram(state.dendrogram, threshold);
  LinkingResult result =
      ResolveIdentities(clusters, state.items, state.distances, threshold);
  for (const IdentityConflict &c : result.conflicts) {
    std::string names;
    for (const std::string &k : c.known) names += (names.empty() ? "" : ",") + k;
    SPKLINK_WARN << "cluster identified as " << c.label
                 << " holds several known speakers: " << names;
  }
  const fs::path out(a.out);
  WriteFileBytes((out / "linking.jsonl").string(), EmitLinkingJson(result));
  WriteRttmFile((out / "linked.rttm").string(),
                ApplyLinking(result, l.inputs.hypothesis));
  std::set<std::string> labels;
  for (const auto &[id, label] : result.assignment) labels.insert(label);
  SPKLINK_LOG << "threshold " << threshold << ": " << state.items.size()
              << " items in " << labels.size() << " clusters, "
              << result.identified.size() << " identified";
  return kExitOk;
}

struct SweepArgs {
  std::string reference;
  std::string thresholds;
  std::string range;
  int count = 40;
  double collar = 0.0;
  bool score_all = false;
};

// Thresholds at evenly spaced merge ranks, so that each step changes the
// partition by roughly the same number of merges.
std::vector<double> MergeRankThresholds(const Dendrogram &d, int count) {
  if (d.merges.empty()) return {0.0};
  std::vector<double> heights;
  for (const Merge &m : d.merges) heights.push_back(m.height);
  std::vector<double> out{heights.front() - 1.0};
  for (int k = 0; k + 1 < count; ++k) {
    std::size_t idx = static_cast<std::size_t>(
        std::llround(static_cast<double>(k) * (heights.size() - 1) /
                     std::max(1, count - 2)));
    double t = heights[std::min(idx, heights.size() - 1)];
    if (t > out.back()) out.push_back(t);
  }
  return out;
}

ScoringOptions MakeScoring(const std::optional<ArchiveManifest> &manifest,
                           bool score_all, double collar) {
  ScoringOptions scoring;
  scoring.collar = collar;
  if (collar < 0.0) throw UsageError("--collar must be >= 0");
  if (manifest && !score_all) scoring.regions = AnnotatedRegions(*manifest);
  return scoring;
}

int RunSweep(const LinkArgs &a, const SweepArgs &s) {
  LoadedLink l = LoadLinkInputs(a);
  std::vector<Segment> reference = ReadRttmFile(s.reference);
  if (l.manifest) CheckSegmentsAgainstManifest(reference, *l.manifest);
  fs::create_directories(a.out);
  l.inputs.similarity.progress = ProgressPrinter();
  LinkState state = BuildLinkState(l.inputs);
  LogStoreChoice(state);

  std::vector<double> thresholds;
  if (!s.thresholds.empty() && !s.range.empty())
    throw UsageError("--thresholds and --range are exclusive");
  if (!s.thresholds.empty()) {
    thresholds = ParseNumberList(s.thresholds, "--thresholds");
  } else if (!s.range.empty()) {
    std::vector<double> r = ParseNumberList(s.range, "--range");
    if (r.size() != 3 || r[2] < 1 || r[2] != std::floor(r[2]))
      throw UsageError("--range expects lo,hi,count");
    thresholds = LinearThresholds(r[0], r[1], static_cast<int>(r[2]));
  } else {
    if (s.count < 2) throw UsageError("--count must be >= 2");
    thresholds = MergeRankThresholds(state.dendrogram, s.count);
  }
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (!(thresholds[i] > thresholds[i - 1]))
      throw UsageError("sweep thresholds must be strictly increasing");

  SweepContext ctx;
  ctx.dendrogram = &state.dendrogram;
  ctx.items = &state.items;
  ctx.distances = &state.distances;
  ctx.reference = &reference;
  ctx.hypothesis = &l.inputs.hypothesis;
  ctx.scoring = MakeScoring(l.manifest, s.score_all, s.collar);
  std::vector<ImpurityPoint> points = SweepThresholds(ctx, thresholds);
  std::string why;
  if (!SweepIsMonotone(points, &why))
    throw NumericError("sweep is not monotone: " + why);

  const double baseline =
      ComputeDer(reference, QualifyLabels(l.inputs.hypothesis), ctx.scoring)
          .der;
  const fs::path out(a.out);
  WriteReport(points, (out / "sweep").string(), baseline);

  ordered_json summary;
  summary["baseline_der"] = baseline;
  auto best = std::min_element(
      points.begin(), points.end(),
      [](const ImpurityPoint &x, const ImpurityPoint &y) {
        return x.der < y.der;
      });
  summary["best"] = {{"threshold", best->threshold}, {"der", best->der}};
  try {
    EqualImpurity eq = EqualImpurityPoint(points);
    summary["equal_impurity"] = {{"threshold", eq.threshold},
                                 {"impurity", eq.impurity}};
  } catch (const DataError &e) {
    SPKLINK_WARN << e.what();
    summary["equal_impurity"] = nullptr;
  }
  summary["pseudo_speakers"] = state.merged.speakers.size();
  summary["dropped"] = state.merged.dropped.size();
  summary["known_speakers"] = l.inputs.known.size();
  summary["thresholds"] = points.size();
  WriteFileBytes((out / "summary.json").string(), summary.dump(2) + "\n");
  SPKLINK_LOG << "baseline DER " << baseline << ", best DER " << best->der
              << " at threshold " << best->threshold;
  return kExitOk;
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
  std::string reference;
  std::string hypothesis;
  std::string manifest;
  std::string out;
  double collar = 0.0;
  bool score_all = false;
  bool tape_level = false;
};

int RunEval(const EvalArgs &a) {
  std::vector<Segment> reference = ReadRttmFile(a.reference);
  std::vector<Segment> hypothesis = ReadRttmFile(a.hypothesis);
  std::optional<ArchiveManifest> manifest;
  if (!a.manifest.empty()) {
    manifest = ReadManifestFile(a.manifest);
    CheckSegmentsAgainstManifest(reference, *manifest);
    CheckSegmentsAgainstManifest(hypothesis, *manifest);
  }
  ScoringOptions scoring = MakeScoring(manifest, a.score_all, a.collar);
  if (a.tape_level) {
    // Tape-local labels are only comparable within a tape.
    reference = QualifyLabels(reference);
    hypothesis = QualifyLabels(hypothesis);
  }
  OverlapStats stats = OverlapMatrix(reference, hypothesis, scoring);
  DerBreakdown der = a.tape_level
                         ? ComputeTapeLevelDer(reference, hypothesis, scoring)
                         : DerFromOverlap(stats);
  Impurities imp = ImpuritiesFromOverlap(stats);
  ordered_json j;
  j["der"] = der.der;
  j["missed"] = der.missed;
  j["false_alarm"] = der.false_alarm;
  j["confusion"] = der.confusion;
  j["total_reference"] = der.total_reference;
  j["speaker_impurity"] = imp.speaker;
  j["cluster_impurity"] = imp.cluster;
  const std::string text = j.dump(2) + "\n";
  if (a.out.empty())
    std::cout << text;
  else
    WriteFileBytes(a.out, text);
  return kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string csv;
  std::string summary;
  std::string out;
  std::optional<double> baseline_der;
};

int RunReport(const ReportArgs &a) {
  std::vector<ImpurityPoint> points;
  try {
    points = ParseReportCsv(ReadFileBytes(a.csv));
  } catch (const DataError &e) {
    throw DataError(a.csv + ": " + e.what());
  }
  std::optional<double> baseline = a.baseline_der;
  if (!baseline && !a.summary.empty()) {
    try {
      auto j = nlohmann::json::parse(ReadFileBytes(a.summary));
      if (j.contains("baseline_der") && j["baseline_der"].is_number())
        baseline = j["baseline_der"].get<double>();
    } catch (const nlohmann::json::exception &e) {
      throw DataError(a.summary + ": " + e.what());
    }
  }
  std::string out = a.out;
  if (out.empty()) out = fs::path(a.csv).replace_extension(".svg").string();
  WriteFileBytes(out, RenderReportSvg(points, baseline));
  return kExitOk;
}

// ---------------------------------------------------------------- config

std::optional<std::string> FindConfigPath(int argc, char **argv) {
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return std::nullopt;
}

std::string JsonScalar(const nlohmann::json &v, const std::string &key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<uint64_t>());
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  if (v.is_array()) {
    std::string out;
    for (const auto &e : v) out += (out.empty() ? "" : ",") + JsonScalar(e, key);
    return out;
  }
  throw UsageError("config key '" + key + "': unsupported value");
}

// Turns config entries into flags placed before the user's flags, so that
// explicit flags win (options keep their last value).
std::vector<std::string> ConfigArgs(const nlohmann::json &config,
                                    CLI::App *sub, CLI::App *root) {
  std::vector<std::string> args;
  auto apply = [&](const std::string &key, const nlohmann::json &value,
                   bool strict) {
    if (key == "config") return;
    const CLI::Option *opt = sub->get_option_no_throw("--" + key);
    if (!opt) opt = root->get_option_no_throw("--" + key);
    if (!opt) {
      if (strict)
        throw UsageError("config: '" + sub->get_name() +
                         "' has no option '" + key + "'");
      return;
    }
    if (opt->get_expected_min() == 0) {
      if (!value.is_boolean())
        throw UsageError("config key '" + key + "' must be true or false");
      if (value.get<bool>()) args.push_back("--" + key);
      return;
    }
    args.push_back("--" + key);
    args.push_back(JsonScalar(value, key));
  };
  for (const auto &[key, value] : config.items()) {
    if (value.is_object()) continue;
    apply(key, value, false);
  }
  if (config.contains(sub->get_name()) &&
      config[sub->get_name()].is_object())
    for (const auto &[key, value] : config[sub->get_name()].items())
      apply(key, value, true);
  return args;
}

int Main(int argc, char **argv) {
  CLI::App app{"spklink: cross-tape speaker linking and evaluation"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  int threads = 0;
  std::string config_path;
  app.add_option("--threads", threads,
                 "Worker threads (default: machine parallelism)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--config", config_path,
                 "JSON config; top-level keys and a per-subcommand object "
                 "supply flag defaults");

  SynthArgs synth;
  CLI::App *synth_cmd = app.add_subcommand("synth", "Generate a synthetic archive");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--params", synth.params, "Generator config (JSON)");
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--dim", synth.dim);
  synth_cmd->add_option("--tapes", synth.tapes);
  synth_cmd->add_option("--speakers", synth.speakers);
  synth_cmd->add_option("--recurring", synth.recurring);
  synth_cmd->add_option("--known", synth.known);
  synth_cmd->add_option("--split-prob", synth.split_prob);
  synth_cmd->add_option("--label-noise", synth.label_noise);
  synth_cmd->add_option("--annotated-fraction", synth.annotated_fraction);

  TrainArgs train;
  CLI::App *train_cmd = app.add_subcommand("train-plda", "Train a PLDA model");
  train_cmd->add_option("--train", train.train, "Training EVEC")->required();
  train_cmd->add_option("--utt2spk", train.utt2spk,
                        "Two-column id/speaker map (default: id prefix)");
  train_cmd->add_option("--iterations", train.iterations, "EM iterations")
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--out", train.out, "Output PLDA1 file")->required();

  LinkArgs link;
  double threshold = 0.0;
  CLI::App *link_cmd = app.add_subcommand("link", "Link speakers at one threshold");
  AddLinkOptions(link_cmd, &link);
  link_cmd->add_option("--threshold", threshold,
                       "Distance threshold (distance = -llr)")
      ->required();

  LinkArgs sweep_link;
  SweepArgs sweep;
  CLI::App *sweep_cmd = app.add_subcommand("sweep", "Sweep linking thresholds");
  AddLinkOptions(sweep_cmd, &sweep_link);
  sweep_cmd->add_option("--reference", sweep.reference, "Reference RTTM")
      ->required();
  sweep_cmd->add_option("--thresholds", sweep.thresholds,
                        "Comma-separated increasing thresholds");
  sweep_cmd->add_option("--range", sweep.range, "lo,hi,count");
  sweep_cmd->add_option("--count", sweep.count,
                        "Thresholds picked from the dendrogram when neither "
                        "--thresholds nor --range is given");
  sweep_cmd->add_option("--collar", sweep.collar, "Collar in seconds");
  sweep_cmd->add_flag("--score-all", sweep.score_all,
                      "Score whole tapes instead of annotated regions");

  EvalArgs eval;
  CLI::App *eval_cmd = app.add_subcommand("eval", "Score a hypothesis");
  eval_cmd->add_option("--reference", eval.reference)->required();
  eval_cmd->add_option("--hypothesis", eval.hypothesis)->required();
  eval_cmd->add_option("--manifest", eval.manifest,
                       "Manifest whose annotated regions are scored");
  eval_cmd->add_option("--collar", eval.collar, "Collar in seconds");
  eval_cmd->add_flag("--score-all", eval.score_all,
                     "Score whole tapes instead of annotated regions");
  eval_cmd->add_flag("--tape-level", eval.tape_level,
                     "Map speakers per tape and sum over tapes");
  eval_cmd->add_option("--out", eval.out, "Output JSON (default: stdout)");

  ReportArgs report;
  CLI::App *report_cmd = app.add_subcommand("report", "Re-render a sweep plot");
  report_cmd->add_option("--csv", report.csv, "Sweep CSV")->required();
  report_cmd->add_option("--summary", report.summary,
                         "summary.json holding the baseline DER");
  report_cmd->add_option("--baseline-der", report.baseline_der);
  report_cmd->add_option("--out", report.out, "Output SVG");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (auto path = FindConfigPath(argc, argv)) {
      nlohmann::json config;
      try {
        config = nlohmann::json::parse(ReadJsonFile(*path));
      } catch (const nlohmann::json::exception &e) {
        throw UsageError(*path + ": " + e.what());
      }
      if (!config.is_object()) throw UsageError(*path + ": expected an object");
      auto sub_pos = std::find_if(args.begin(), args.end(), [&](auto &s) {
        return app.get_subcommand_no_throw(s) != nullptr;
      });
      if (sub_pos != args.end()) {
        CLI::App *sub = app.get_subcommand(*sub_pos);
        std::vector<std::string> extra = ConfigArgs(config, sub, &app);
        args.insert(sub_pos + 1, extra.begin(), extra.end());
      }
    }
    // CLI11 reads an empty string as zero for numeric options.
    for (std::size_t i = 0; i < args.size(); ++i)
      if (args[i].empty())
        throw UsageError(i > 0 ? "empty value for " + args[i - 1]
                               : "empty argument");
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError &e) {
    std::cerr << "ERROR: " << e.what() << "\n";
    return kExitUsage;
  }

  if (threads > 0) omp_set_num_threads(threads);
  try {
    if (*synth_cmd) return RunSynth(synth);
    if (*train_cmd) return RunTrain(train);
    if (*link_cmd) return RunLink(link, threshold);
    if (*sweep_cmd) return RunSweep(sweep_link, sweep);
    if (*eval_cmd) return RunEval(eval);
    if (*report_cmd) return RunReport(report);
  } catch (const UsageError &e) {
    std::cerr << "ERROR: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "ERROR: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace spklink

int main(int argc, char **argv) { return spklink::Main(argc, argv); }
