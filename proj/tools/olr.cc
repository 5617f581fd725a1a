// tools/olr.cc

// Copyright 2026  The OLR Toolkit Authors
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

// olr: command-line front end for the language-identification toolkit.
//
//   olr generate --out DIR            synthetic corpus + manifest + keys
//   olr train    --manifest M --model MODEL
//   olr extract  --model MODEL --manifest M --out XVECS
//   olr enroll   --model MODEL --refs REFS --out LANGMODELS
//   olr score    --model MODEL --manifest M --out SCORES [--lang-models F]
//   olr validate --scores S --key K [--out FILLED]
//   olr evaluate --scores S --key K [--threshold T] [--det F] [--report F]
//
// Exit status: 0 success, 1 usage error, 2 data/validation error,
// 3 numerical failure.

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "olr/backend.h"
#include "olr/config.h"
#include "olr/error.h"
#include "olr/harness.h"
#include "olr/metrics.h"
#include "olr/net.h"
#include "olr/submission.h"
#include "olr/wav.h"

namespace fs = std::filesystem;

namespace olr {
namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<int64_t> seed;
  int jobs = 0;
  bool quiet = false;
};

/// Config file first, then --set overrides, then --seed (last wins).
KeyValueConfig LoadConfig(const CommonOptions &opts) {
  KeyValueConfig cfg;
  if (!opts.config_path.empty()) cfg = KeyValueConfig::FromFile(opts.config_path);
  for (const auto &kv : opts.overrides) cfg.SetAssignment(kv);
  if (opts.seed) cfg.Set("seed", std::to_string(*opts.seed));
  return cfg;
}

std::string Stamp(const std::string &command, const KeyValueConfig &cfg) {
  return "# olr " + command + " config-hash=" + HexHash(cfg.Hash()) +
         " seed=" + std::to_string(cfg.GetInt("seed", 1));
}

void Warn(const CommonOptions &opts, const std::string &msg) {
  if (!opts.quiet) std::cerr << "olr: warning: " << msg << '\n';
}

/// Output file written under a temporary name and renamed on Commit(), so a
/// failing command never leaves a partial file behind.
class AtomicFile {
 public:
  explicit AtomicFile(std::string path)
      : path_(std::move(path)), tmp_(path_ + ".olr-tmp") {
    os_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!os_) throw Error(Errc::kIo, "cannot write " + path_);
  }
  AtomicFile(const AtomicFile &) = delete;
  AtomicFile &operator=(const AtomicFile &) = delete;
  ~AtomicFile() {
    if (committed_) return;
    os_.close();
    std::error_code ec;
    fs::remove(tmp_, ec);
  }
  std::ostream &stream() { return os_; }
  void Commit() {
    os_.close();
    if (!os_) throw Error(Errc::kIo, "error while writing " + path_);
    fs::rename(tmp_, path_);
    committed_ = true;
  }

 private:
  std::string path_, tmp_;
  std::ofstream os_;
  bool committed_ = false;
};

std::ifstream OpenInput(const std::string &path, const char *what) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::kIo, std::string("cannot open ") + what + " '" + path + "'");
  return is;
}

std::vector<std::string> ReadLines(const std::string &path, const char *what) {
  auto is = OpenInput(path, what);
  std::vector<std::string> lines;
  for (std::string line; std::getline(is, line);) lines.push_back(line);
  return lines;
}

/// Trained class order lives next to the model as "<model>.langs".
std::string LanguagesPath(const std::string &model) { return model + ".langs"; }

std::vector<std::string> ReadModelLanguages(const std::string &model) {
  std::vector<std::string> langs;
  for (const auto &line : ReadLines(LanguagesPath(model), "language list")) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    langs.push_back(tok);
  }
  if (langs.empty())
    throw Error(Errc::kCorruptModel, LanguagesPath(model) + ": no languages listed");
  return langs;
}

std::vector<ManifestEntry> SelectSplit(const std::vector<ManifestEntry> &entries,
                                       const std::string &split) {
  std::vector<ManifestEntry> out;
  for (const auto &e : entries)
    if (split.empty() || e.split == split) out.push_back(e);
  if (out.empty()) throw Error(Errc::kEmptyTrialSet, "no manifest entries in split '" + split + "'");
  return out;
}

std::vector<Waveform> LoadWaves(const std::vector<ManifestEntry> &entries) {
  std::vector<Waveform> waves;
  waves.reserve(entries.size());
  for (const auto &e : entries) waves.push_back(ReadWavFile(e.wav_path));
  return waves;
}

// ---------------------------------------------------------------------------

int CmdGenerate(const CommonOptions &opts, const std::string &out_dir) {
  const KeyValueConfig cfg = LoadConfig(opts);
  const ExperimentPlan plan = ExperimentPlan::FromConfig(cfg);
  std::vector<SplitCount> counts = {{"train", plan.train_per_language, {}},
                                    {"test", plan.test_per_language, {}}};
  Corpus corpus = GenerateCorpus(plan.train_languages, counts, plan.seed);
  if (plan.task == Task::kZeroResource) {
    std::vector<SplitCount> zr = {{"ref", plan.reference_per_language, {}},
                                  {"zrtest", plan.zero_resource_test_per_language, {}}};
    Corpus unseen = GenerateCorpus(plan.unseen_languages, zr, plan.seed ^ 0x5eedULL);
    for (auto &u : unseen.utterances) corpus.utterances.push_back(std::move(u));
  }
  ValidateSplits(corpus);

  if (fs::exists(out_dir) && !(fs::is_directory(out_dir) && fs::is_empty(out_dir)))
    throw Error(Errc::kIo, "output directory '" + out_dir + "' exists and is not empty");
  const std::string tmp = out_dir + ".olr-tmp";
  fs::remove_all(tmp);
  try {
    std::vector<std::string> key_langs;
    for (const auto &s : plan.train_languages) key_langs.push_back(s.id);
    for (const auto &s : plan.unseen_languages) key_langs.push_back(s.id);
    WriteCorpus(corpus, tmp, key_langs);
    // Prefix every text artifact with the stamp.
    for (const auto &entry : fs::directory_iterator(tmp)) {
      if (entry.path().extension() != ".txt") continue;
      std::ifstream is(entry.path());
      std::stringstream body;
      body << is.rdbuf();
      is.close();
      std::ofstream os(entry.path(), std::ios::trunc);
      os << Stamp("generate", cfg) << '\n' << body.str();
      if (!os) throw Error(Errc::kIo, "cannot write " + entry.path().string());
    }
    if (fs::exists(out_dir)) fs::remove(out_dir);
    fs::rename(tmp, out_dir);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(tmp, ec);
    throw;
  }
  std::cout << "generated " << corpus.utterances.size() << " utterances in " << out_dir << '\n';
  return 0;
}

int CmdTrain(const CommonOptions &opts, const std::string &manifest, const std::string &split,
             const std::string &model) {
  const KeyValueConfig cfg = LoadConfig(opts);
  const ExperimentPlan plan = ExperimentPlan::FromConfig(cfg);
  const auto entries = SelectSplit(ReadManifest(manifest), split);

  std::vector<std::string> languages = cfg.GetList("train.languages", {});
  if (languages.empty())
    for (const auto &e : entries)
      if (std::find(languages.begin(), languages.end(), e.language) == languages.end())
        languages.push_back(e.language);
  if (languages.size() < 2)
    throw Error(Errc::kInvalidConfig, "training needs at least two languages");

  FilterbankExtractor extractor(plan.fbank);
  std::vector<std::string> warnings;
  auto feats = ExtractFeaturesBatch(extractor, LoadWaves(entries), plan.vad, &warnings);
  std::vector<LabeledFeatures> data;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!feats[i]) {
      Warn(opts, entries[i].utt_id + ": " + warnings[i]);
      continue;
    }
    auto it = std::find(languages.begin(), languages.end(), entries[i].language);
    if (it == languages.end()) continue;
    data.push_back({&*feats[i], static_cast<int>(it - languages.begin())});
  }
  if (data.empty()) throw Error(Errc::kEmptyTrialSet, "no usable training utterances");

  NetworkConfig net = NetworkConfig::FromConfig(plan.net_config, languages.size());
  NetworkParams params = InitNetwork(net, plan.seed);
  Train(&params, data, plan.train, [&](std::size_t step, double loss) {
    if (!opts.quiet) std::fprintf(stderr, "step %zu loss %.6f\n", step + 1, loss);
  });

  AtomicFile model_file(model);
  SaveParams(model_file.stream(), params);
  AtomicFile langs_file(LanguagesPath(model));
  langs_file.stream() << Stamp("train", cfg) << '\n';
  for (const auto &l : languages) langs_file.stream() << l << '\n';
  langs_file.Commit();
  model_file.Commit();
  std::cout << "trained on " << data.size() << " utterances, " << languages.size()
            << " languages, " << params.ParameterCount() << " parameters\n";
  return 0;
}

int CmdExtract(const CommonOptions &opts, const std::string &model, const std::string &manifest,
               const std::string &split, const std::string &out) {
  const KeyValueConfig cfg = LoadConfig(opts);
  const ExperimentPlan plan = ExperimentPlan::FromConfig(cfg);
  const NetworkParams params = LoadParamsFile(model);
  const auto entries = SelectSplit(ReadManifest(manifest), split);
  FilterbankExtractor extractor(plan.fbank);
  std::vector<std::string> warnings;
  auto feats = ExtractFeaturesBatch(extractor, LoadWaves(entries), plan.vad, &warnings);

  AtomicFile file(out);
  file.stream() << Stamp("extract", cfg) << '\n';
  char buf[32];
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!feats[i]) {
      Warn(opts, entries[i].utt_id + ": " + warnings[i]);
      continue;
    }
    try {
      auto x = ExtractXVector(params, *feats[i], entries[i].utt_id);
      file.stream() << x.source_segment;
      for (double v : x.values) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        file.stream() << ' ' << buf;
      }
      file.stream() << '\n';
    } catch (const Error &e) {
      if (e.code() != Errc::kTooFewFrames) throw;
      Warn(opts, entries[i].utt_id + ": " + e.what());
    }
  }
  file.Commit();
  return 0;
}

int CmdEnroll(const CommonOptions &opts, const std::string &model, const std::string &refs,
              const std::string &out) {
  const KeyValueConfig cfg = LoadConfig(opts);
  const ExperimentPlan plan = ExperimentPlan::FromConfig(cfg);
  const NetworkParams params = LoadParamsFile(model);
  const fs::path base = fs::path(refs).parent_path();

  std::vector<std::string> order;
  std::vector<ManifestEntry> entries;
  std::size_t line_no = 0;
  for (const auto &line : ReadLines(refs, "reference list")) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() != 2)
      throw Error(Errc::kMalformedLine,
                  refs + ":" + std::to_string(line_no) + ": expected 'language-id wav-path'",
                  line_no);
    fs::path wav(tok[1]);
    if (wav.is_relative()) wav = base / wav;
    if (std::find(order.begin(), order.end(), tok[0]) == order.end()) order.push_back(tok[0]);
    entries.push_back({"", tok[0], wav.string(), "ref"});
  }
  if (entries.empty()) throw Error(Errc::kNoUsableReferences, refs + ": no references");

  FilterbankExtractor extractor(plan.fbank);
  std::vector<std::string> warnings;
  auto feats = ExtractFeaturesBatch(extractor, LoadWaves(entries), plan.vad, &warnings);
  std::vector<std::pair<std::string, std::vector<FeatureMatrix>>> references;
  for (const auto &lang : order) references.push_back({lang, {}});
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!feats[i]) {
      Warn(opts, entries[i].wav_path + ": " + warnings[i]);
      continue;
    }
    auto it = std::find(order.begin(), order.end(), entries[i].language);
    references[static_cast<std::size_t>(it - order.begin())].second.push_back(std::move(*feats[i]));
  }
  LanguageModelSet models = EnrollLanguages(params, references);

  AtomicFile file(out);
  file.stream() << Stamp("enroll", cfg) << '\n';
  WriteLanguageModels(file.stream(), models);
  file.Commit();
  return 0;
}

int CmdScore(const CommonOptions &opts, const std::string &model, const std::string &manifest,
             const std::string &split, const std::string &lang_models_path,
             const std::string &key_path, const std::string &out) {
  const KeyValueConfig cfg = LoadConfig(opts);
  const ExperimentPlan plan = ExperimentPlan::FromConfig(cfg);
  const auto entries = SelectSplit(ReadManifest(manifest), split);

  std::optional<TrialKey> key;
  if (!key_path.empty()) {
    auto is = OpenInput(key_path, "key");
    key = ParseKey(is, key_path);
  }

  std::optional<LanguageModelSet> lang_models;
  std::vector<std::string> available;
  if (!lang_models_path.empty()) {
    auto is = OpenInput(lang_models_path, "language models");
    lang_models = ReadLanguageModels(is, lang_models_path);
    available = lang_models->language_ids;
  } else {
    available = ReadModelLanguages(model);
  }
  const NetworkParams params = LoadParamsFile(model, lang_models ? std::nullopt
                                                                 : std::optional(available.size()));

  // Column order: the key header when given, otherwise the model's order.
  const std::vector<std::string> columns = key ? key->languages() : available;
  std::vector<int> subset;
  for (const auto &c : columns) {
    auto it = std::find(available.begin(), available.end(), c);
    if (it == available.end())
      throw Error(Errc::kUnknownLanguage, "language '" + c + "' is not known to the model");
    subset.push_back(static_cast<int>(it - available.begin()));
  }

  // channel.* keys simulate a recording channel on the test audio.
  std::optional<ChannelConfig> channel;
  if (cfg.Has("channel.type")) channel = ChannelConfig::FromConfig(cfg);
  std::vector<Waveform> waves = LoadWaves(entries);
  if (channel)
    for (std::size_t i = 0; i < waves.size(); ++i)
      waves[i] = ApplyChannel(waves[i], *channel, plan.seed * 0x9e3779b97f4a7c15ULL + i);

  FilterbankExtractor extractor(plan.fbank);
  std::vector<std::string> warnings;
  auto feats = ExtractFeaturesBatch(extractor, waves, plan.vad, &warnings);
  std::vector<ScoreRecord> records;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    ScoreRecord rec{entries[i].utt_id, {}};
    SegmentScores s;
    if (!feats[i]) {
      s.scores.assign(columns.size(), -std::numeric_limits<double>::infinity());
      s.warnings.push_back(warnings[i]);
    } else if (lang_models) {
      s = ScoreZeroResource(*lang_models, *feats[i], params);
      std::vector<double> picked;
      for (int idx : subset) picked.push_back(s.scores[static_cast<std::size_t>(idx)]);
      s.scores = std::move(picked);
    } else {
      s = ScoreClosedSet(params, *feats[i], subset);
    }
    for (const auto &w : s.warnings) Warn(opts, entries[i].utt_id + ": " + w);
    rec.scores = std::move(s.scores);
    records.push_back(std::move(rec));
  }

  AtomicFile file(out);
  file.stream() << Stamp("score", cfg) << '\n';
  WriteScores(file.stream(), records);
  file.Commit();
  return 0;
}

struct Loaded {
  TrialKey key;
  FillResult filled;
};

Loaded LoadScoresAndKey(const std::string &scores_path, const std::string &key_path) {
  auto kis = OpenInput(key_path, "key");
  TrialKey key = ParseKey(kis, key_path);
  auto sis = OpenInput(scores_path, "score file");
  auto records = ParseScores(sis, key.num_languages(), scores_path);
  FillResult filled = FillMissing(records, key);
  return {std::move(key), std::move(filled)};
}

std::string Plural(std::size_t n, const char *one, const char *many) {
  return std::to_string(n) + " " + (n == 1 ? one : many);
}

int CmdValidate(const CommonOptions &opts, const std::string &scores, const std::string &key,
                const std::string &out) {
  const KeyValueConfig cfg = LoadConfig(opts);
  Loaded l = LoadScoresAndKey(scores, key);
  if (!l.filled.lost.empty())
    std::cerr << "olr: warning: "
              << Plural(l.filled.lost.size(), "lost trial", "lost trials")
              << " filled with -inf\n";
  if (!l.filled.extras.empty())
    std::cerr << "olr: warning: "
              << Plural(l.filled.extras.size(), "segment", "segments")
              << " not in the key dropped\n";
  if (!out.empty()) {
    AtomicFile file(out);
    file.stream() << Stamp("validate", cfg) << '\n';
    WriteScores(file.stream(), l.filled.records);
    file.Commit();
  }
  std::cout << "ok: " << l.filled.records.size() << " segments, "
            << l.key.num_languages() << " languages\n";
  return 0;
}

int CmdEvaluate(const CommonOptions &opts, const std::string &scores, const std::string &key,
                std::optional<double> threshold, const std::string &det_path,
                const std::string &report_path) {
  const KeyValueConfig cfg = LoadConfig(opts);
  Loaded l = LoadScoresAndKey(scores, key);
  if (!l.filled.lost.empty())
    std::cerr << "olr: warning: "
              << Plural(l.filled.lost.size(), "lost trial", "lost trials")
              << " filled with -inf\n";

  EvalConfig eval;
  eval.p_target = cfg.GetDouble("eval.p_target", 0.5);
  eval.num_languages = l.key.num_languages();
  eval.Validate();
  const ThresholdPolicy primary =
      threshold ? ThresholdPolicy::Fixed(*threshold) : ThresholdPolicy::MinSweep();
  const ThresholdPolicy secondary =
      threshold ? ThresholdPolicy::MinSweep() : ThresholdPolicy::Fixed(0.0);
  eval.policy = primary;
  EvalReport report = ComputeCavg(l.filled.records, l.key, eval);
  eval.policy = secondary;
  EvalReport other = ComputeCavg(l.filled.records, l.key, eval);

  auto describe = [](const EvalReport &r) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s theta=%.6g", r.swept ? "min_sweep" : "fixed",
                  r.threshold_used);
    return std::string(buf);
  };
  std::printf("Cavg %.4f\n", report.cavg);
  std::printf("EER%% %.2f\n", 100.0 * report.eer);
  std::printf("threshold %s\n", describe(report).c_str());
  std::printf("Cavg(%s) %.4f\n", describe(other).c_str(), other.cavg);

  if (!det_path.empty()) {
    AtomicFile file(det_path);
    file.stream() << Stamp("evaluate", cfg) << '\n';
    WriteDet(file.stream(), report.det_points);
    file.Commit();
  }
  if (!report_path.empty()) {
    AtomicFile file(report_path);
    file.stream() << Stamp("evaluate", cfg) << '\n';
    WriteReport(file.stream(), report);
    file.Commit();
  }
  return 0;
}

int Main(int argc, char **argv) {
  CLI::App app{"Spoken language identification toolkit: synthetic corpora, x-vector "
               "training, scoring and evaluation."};
  app.require_subcommand(1);
  CommonOptions opts;
  auto add_common = [&](CLI::App *cmd) {
    cmd->add_option("--config", opts.config_path, "key = value configuration file");
    cmd->add_option("--set", opts.overrides, "override a config key (key=value), repeatable")
        ->take_all();
    cmd->add_option("--seed", opts.seed, "random seed (overrides the config's 'seed')");
    cmd->add_option("--jobs", opts.jobs, "upper bound on worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("-q,--quiet", opts.quiet, "suppress warnings and training progress");
  };

  std::string out, manifest, train_split = "train", extract_split, score_split = "test", model, refs, scores, key, lang_models, det, report;
  std::optional<double> threshold;

  auto *gen = app.add_subcommand("generate", "write a synthetic corpus");
  add_common(gen);
  gen->add_option("--out", out, "output directory (must be new or empty)")->required();

  auto *train = app.add_subcommand("train", "train the embedding network");
  add_common(train);
  train->add_option("--manifest", manifest, "corpus manifest")->required();
  train->add_option("--split", train_split, "manifest split to train on")->capture_default_str();
  train->add_option("--model", model, "output model file (also writes <model>.langs)")
      ->required();

  auto *extract = app.add_subcommand("extract", "write x-vectors");
  add_common(extract);
  extract->add_option("--model", model, "model file")->required();
  extract->add_option("--manifest", manifest, "corpus manifest")->required();
  extract->add_option("--split", extract_split, "manifest split (empty = all)");
  extract->add_option("--out", out, "output x-vector file")->required();

  auto *enroll = app.add_subcommand("enroll", "build language models from references");
  add_common(enroll);
  enroll->add_option("--model", model, "model file")->required();
  enroll->add_option("--refs", refs, "reference list: 'language-id wav-path' lines")
      ->required();
  enroll->add_option("--out", out, "output language-model file")->required();

  auto *score = app.add_subcommand("score", "write a score file");
  add_common(score);
  score->add_option("--model", model, "model file")->required();
  score->add_option("--manifest", manifest, "corpus manifest")->required();
  score->add_option("--split", score_split, "manifest split")->capture_default_str();
  score->add_option("--lang-models", lang_models,
                    "enrolled language models; scores by cosine similarity");
  score->add_option("--key", key, "trial key whose header fixes the column order");
  score->add_option("--out", out, "output score file")->required();

  auto *validate = app.add_subcommand("validate", "check a score file against a key");
  add_common(validate);
  validate->add_option("--scores", scores, "score file")->required();
  validate->add_option("--key", key, "trial key")->required();
  validate->add_option("--out", out, "write the -inf filled score file here");

  auto *evaluate = app.add_subcommand("evaluate", "compute Cavg and EER");
  add_common(evaluate);
  evaluate->add_option("--scores", scores, "score file")->required();
  evaluate->add_option("--key", key, "trial key")->required();
  evaluate->add_option("--threshold", threshold,
                       "fixed decision threshold (default: sweep for the minimum Cavg)");
  evaluate->add_option("--det", det, "write DET points here");
  evaluate->add_option("--report", report, "write the full report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }

  if (opts.jobs > 0) omp_set_num_threads(opts.jobs);
  if (gen->parsed()) return CmdGenerate(opts, out);
  if (train->parsed()) return CmdTrain(opts, manifest, train_split, model);
  if (extract->parsed()) return CmdExtract(opts, model, manifest, extract_split, out);
  if (enroll->parsed()) return CmdEnroll(opts, model, refs, out);
  if (score->parsed()) return CmdScore(opts, model, manifest, score_split, lang_models, key, out);
  if (validate->parsed()) return CmdValidate(opts, scores, key, out);
  return CmdEvaluate(opts, scores, key, threshold, det, report);
}

}  // namespace
}  // namespace olr

int main(int argc, char **argv) {
  try {
    return olr::Main(argc, argv);
  } catch (const olr::Error &e) {
    std::cerr << "olr: error: " << e.what() << '\n';
    return olr::IsNumericalError(e.code()) ? 3 : 2;
  } catch (const std::exception &e) {
    std::cerr << "olr: error: " << e.what() << '\n';
    return 2;
  }
}
