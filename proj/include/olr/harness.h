// olr/harness.h

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

#ifndef OLR_HARNESS_H_
#define OLR_HARNESS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "olr/backend.h"
#include "olr/config.h"
#include "olr/dsp.h"
#include "olr/metrics.h"
#include "olr/net.h"
#include "olr/submission.h"
#include "olr/wav.h"

namespace olr {

// A synthetic "language" is a spectral-profile class: harmonic tone bursts
// whose harmonics are shaped by a few formant-like bands, mixed with noise
// shaped by the same bands. It stands in for real speech so every stage of
// the pipeline can run end to end on a desk.

struct Band {
  double center_hz = 1000.0;
  double bandwidth_hz = 200.0;
  double gain = 1.0;
};

struct LanguageProfile {
  std::string id;
  std::vector<Band> bands;
  double pitch_min_hz = 100.0;
  double pitch_max_hz = 200.0;
  double min_seconds = 2.0;
  double max_seconds = 3.0;
  double noise_level = 0.005;

  /// Throws kInvalidProfile.
  void Validate() const;
};

/// Built-in profiles: "syn-a", "syn-b", "syn-c" (training) and "syn-x",
/// "syn-y" (held out for the zero-resource task).
LanguageProfile BuiltinLanguage(const std::string &id);
std::vector<std::string> BuiltinLanguageIds();

/// Reads "lang.<id>.*" keys on top of the built-in profile (if any):
///   lang.<id>.bands  = 500:150:1.0, 1500:200:0.7   (center:bandwidth[:gain])
///   lang.<id>.pitch  = 100:180
///   lang.<id>.length = 2:3
///   lang.<id>.noise  = 0.005
LanguageProfile LanguageFromConfig(const KeyValueConfig &config,
                                         const std::string &id);

/// Deterministic per (profile, seconds, seed); 16 kHz, quantized to 16 bits.
Waveform SynthesizeUtterance(const LanguageProfile &profile, double seconds,
                             uint64_t seed);

/// Low-pass FIR followed by white noise at a given SNR. `identity` leaves
/// the waveform untouched.
struct ChannelConfig {
  bool identity = true;
  double cutoff_hz = 800.0;
  int taps = 63;
  double snr_db = 10.0;

  static ChannelConfig LowPassNoise(double cutoff_hz, double snr_db);
  static ChannelConfig FromConfig(const KeyValueConfig &config);
};
Waveform ApplyChannel(const Waveform &wave, const ChannelConfig &channel,
                      uint64_t seed);

struct Utterance {
  std::string id;
  std::string language;
  std::string split;
  Waveform wave;
};

struct SplitCount {
  std::string split;
  std::size_t per_language = 1;
  std::optional<double> seconds;  // fixed length; otherwise the profile's range
};

struct Corpus {
  std::vector<Utterance> utterances;

  /// Key over `split` with `languages` as the column order. Utterances of
  /// other languages are entered as out-of-set.
  TrialKey KeyFor(const std::string &split,
                  const std::vector<std::string> &languages) const;
  std::vector<const Utterance *> Split(const std::string &split) const;
};

/// Per-utterance seeds derive from (seed, utterance index), so the corpus
/// is identical however many threads generate it.
Corpus GenerateCorpus(const std::vector<LanguageProfile> &profiles,
                      const std::vector<SplitCount> &counts, uint64_t seed);

/// Writes wav/<utt>.wav plus manifest.txt ("utt-id language-id wav-path
/// split"), refs.txt for split "ref" ("language-id wav-path") and
/// key_<split>.txt for every split except "train".
void WriteCorpus(const Corpus &corpus, const std::string &dir,
                 const std::vector<std::string> &key_languages);

struct ManifestEntry {
  std::string utt_id;
  std::string language;
  std::string wav_path;
  std::string split;
};
std::vector<ManifestEntry> ReadManifest(const std::string &path);

/// Throws kInvalidPlan if an utterance id appears twice.
void ValidateSplits(const Corpus &corpus);

enum class Task { kShortUtterance, kCrossChannel, kZeroResource };
Task ParseTask(const std::string &name);
const char *TaskName(Task task);

struct ExperimentPlan {
  Task task = Task::kShortUtterance;
  uint64_t seed = 1;
  std::vector<LanguageProfile> train_languages;
  std::vector<LanguageProfile> unseen_languages;
  std::size_t train_per_language = 200;
  std::size_t test_per_language = 60;
  std::size_t reference_per_language = 10;
  std::size_t zero_resource_test_per_language = 100;
  double test_seconds = 1.0;            // crop length for closed-set tests
  std::optional<std::vector<std::string>> subset;  // closed-set columns
  ChannelConfig channel;                // applied in the cross-channel task
  KeyValueConfig net_config;            // "net.*" keys
  TrainConfig train;
  FeatureConfig fbank;
  VadConfig vad;
  double p_target = 0.5;

  /// Desk-scale defaults: 3 training and 2 unseen built-in languages, tiny
  /// network, low-pass + noise channel.
  static ExperimentPlan Default(Task task, uint64_t seed);
  static ExperimentPlan FromConfig(const KeyValueConfig &config);

  /// Throws kInvalidPlan (e.g. unseen languages that overlap training).
  void Validate() const;
};

struct TaskResult {
  Task task = Task::kShortUtterance;
  TrialKey key;
  std::vector<ScoreRecord> scores;
  EvalReport report;
  std::vector<std::string> warnings;

  std::string ScoresText() const;
  std::string ReportText() const;
};

/// Corpus, features and trained network for one plan; tasks are scored on
/// demand so several tasks can share one training run.
class Experiment {
 public:
  explicit Experiment(ExperimentPlan plan, const StepLogger &log = nullptr);

  const ExperimentPlan &plan() const { return plan_; }
  const Corpus &corpus() const { return corpus_; }
  const NetworkParams &network() const { return network_; }

  TaskResult Run(Task task) const;
  /// Closed-set scoring with an explicit channel (identity = matched).
  TaskResult RunClosedSet(Task task, const ChannelConfig &channel) const;
  TaskResult RunZeroResource() const;

 private:
  std::vector<std::string> TrainLanguageIds() const;
  std::vector<std::string> UnseenLanguageIds() const;

  ExperimentPlan plan_;
  FilterbankExtractor extractor_;
  Corpus corpus_;
  NetworkParams network_;
};

/// Builds an Experiment for `plan` and runs plan.task.
TaskResult RunTask(const ExperimentPlan &plan, const StepLogger &log = nullptr);

}  // namespace olr

#endif  // OLR_HARNESS_H_
