// src/harness.cc

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

#include "olr/harness.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "olr/error.h"

namespace olr {

namespace {

constexpr double kSampleRate = 16000.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t seed, uint64_t index) {
  return SplitMix64(seed ^ SplitMix64(index + 1));
}

std::pair<double, double> ParsePair(const std::string &text, const std::string &key) {
  auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      double v = std::stod(text);
      return {v, v};
    }
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception &) {
    throw Error(Errc::kInvalidConfig, "bad value for " + key + ": " + text);
  }
}

std::string PadIndex(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04zu", i);
  return buf;
}

// Raised-cosine ramp envelope for a burst of `len` samples.
double BurstEnvelope(std::size_t n, std::size_t len, std::size_t ramp) {
  if (n < ramp) return 0.5 - 0.5 * std::cos(std::numbers::pi * n / ramp);
  if (n + ramp >= len)
    return 0.5 - 0.5 * std::cos(std::numbers::pi * (len - n) / ramp);
  return 1.0;
}

}  // namespace

void LanguageProfile::Validate() const {
  auto bad = [this](const std::string &what) {
    throw Error(Errc::kInvalidProfile, "language '" + id + "': " + what);
  };
  if (id.empty() || id.find_first_of(" \t") != std::string::npos)
    bad("id must be a nonempty token");
  if (bands.empty()) bad("no spectral bands");
  for (const auto &b : bands) {
    if (!(b.center_hz > 0 && b.center_hz < 8000)) bad("band center outside (0, 8000) Hz");
    if (!(b.bandwidth_hz > 0)) bad("band width must be positive");
    if (!(b.gain >= 0)) bad("band gain must be nonnegative");
  }
  if (!(pitch_min_hz > 0 && pitch_min_hz <= pitch_max_hz)) bad("bad pitch range");
  if (!(min_seconds > 0 && min_seconds <= max_seconds)) bad("bad length range");
  if (!(noise_level >= 0)) bad("negative noise level");
}

std::vector<std::string> BuiltinLanguageIds() {
  return {"syn-a", "syn-b", "syn-c", "syn-x", "syn-y"};
}

LanguageProfile BuiltinLanguage(const std::string &id) {
  LanguageProfile s;
  s.id = id;
  if (id == "syn-a") {
    s.bands = {{400, 150, 1.0}, {1200, 200, 0.8}, {2600, 300, 0.5}};
    s.pitch_min_hz = 90;
    s.pitch_max_hz = 140;
  } else if (id == "syn-b") {
    s.bands = {{700, 150, 1.0}, {1800, 250, 0.8}, {3400, 300, 0.6}};
    s.pitch_min_hz = 120;
    s.pitch_max_hz = 180;
  } else if (id == "syn-c") {
    s.bands = {{300, 120, 1.0}, {2200, 250, 0.7}, {4800, 400, 0.6}};
    s.pitch_min_hz = 160;
    s.pitch_max_hz = 240;
  } else if (id == "syn-x") {
    s.bands = {{550, 150, 1.0}, {2900, 300, 0.8}, {4000, 350, 0.5}};
    s.pitch_min_hz = 100;
    s.pitch_max_hz = 160;
  } else if (id == "syn-y") {
    s.bands = {{900, 200, 1.0}, {1500, 200, 0.8}, {5600, 400, 0.6}};
    s.pitch_min_hz = 140;
    s.pitch_max_hz = 220;
  } else {
    throw Error(Errc::kInvalidProfile, "no built-in language '" + id + "'");
  }
  return s;
}

LanguageProfile LanguageFromConfig(const KeyValueConfig &config,
                                         const std::string &id) {
  const std::string prefix = "lang." + id + ".";
  LanguageProfile s;
  const auto builtin = BuiltinLanguageIds();
  if (std::find(builtin.begin(), builtin.end(), id) != builtin.end())
    s = BuiltinLanguage(id);
  s.id = id;
  if (auto bands = config.Get(prefix + "bands")) {
    s.bands.clear();
    for (const auto &item : config.GetList(prefix + "bands", {})) {
      std::vector<double> parts;
      std::stringstream ss(item);
      for (std::string p; std::getline(ss, p, ':');) {
        try {
          parts.push_back(std::stod(p));
        } catch (const std::exception &) {
          throw Error(Errc::kInvalidConfig, "bad band '" + item + "' for " + id);
        }
      }
      if (parts.size() < 2 || parts.size() > 3)
        throw Error(Errc::kInvalidConfig, "band must be center:width[:gain]: " + item);
      s.bands.push_back({parts[0], parts[1], parts.size() == 3 ? parts[2] : 1.0});
    }
  }
  if (auto v = config.Get(prefix + "pitch"))
    std::tie(s.pitch_min_hz, s.pitch_max_hz) = ParsePair(*v, prefix + "pitch");
  if (auto v = config.Get(prefix + "length"))
    std::tie(s.min_seconds, s.max_seconds) = ParsePair(*v, prefix + "length");
  s.noise_level = config.GetDouble(prefix + "noise", s.noise_level);
  s.Validate();
  return s;
}

Waveform SynthesizeUtterance(const LanguageProfile &profile, double seconds,
                             uint64_t seed) {
  profile.Validate();
  if (!(seconds > 0)) throw Error(Errc::kInvalidProfile, "utterance length must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const auto n = static_cast<std::size_t>(std::lround(seconds * kSampleRate));
  std::vector<double> tone(n, 0.0), envelope(n, 0.0);

  // Alternating voiced bursts and pauses.
  const std::size_t ramp = static_cast<std::size_t>(0.01 * kSampleRate);
  std::size_t pos = 0;
  while (pos < n) {
    const auto len = std::min<std::size_t>(
        n - pos, static_cast<std::size_t>((0.08 + 0.17 * unif(rng)) * kSampleRate));
    const auto gap = static_cast<std::size_t>((0.04 + 0.08 * unif(rng)) * kSampleRate);
    const double f0_start =
        profile.pitch_min_hz + (profile.pitch_max_hz - profile.pitch_min_hz) * unif(rng);
    const double f0_end = f0_start * (0.9 + 0.2 * unif(rng));
    const std::size_t burst_ramp = std::min(ramp, len / 2 + 1);
    for (std::size_t k = 1; k * f0_start < 7800.0; ++k) {
      const double f = k * f0_start;
      double amp = 0.0;
      for (const auto &b : profile.bands) {
        const double z = (f - b.center_hz) / b.bandwidth_hz;
        amp += b.gain * std::exp(-0.5 * z * z);
      }
      if (amp < 0.02) continue;
      double phase = kTwoPi * unif(rng);
      for (std::size_t i = 0; i < len; ++i) {
        const double f0 = f0_start + (f0_end - f0_start) * i / static_cast<double>(len);
        phase += kTwoPi * k * f0 / kSampleRate;
        tone[pos + i] += amp * std::sin(phase);
      }
    }
    for (std::size_t i = 0; i < len; ++i)
      envelope[pos + i] = BurstEnvelope(i, len, burst_ramp);
    pos += len + gap;
  }

  // Band-shaped noise through a two-pole resonator per band.
  std::vector<double> white(n);
  for (double &w : white) w = gauss(rng);
  std::vector<double> shaped(n, 0.0);
  for (const auto &b : profile.bands) {
    const double r = std::exp(-std::numbers::pi * b.bandwidth_hz / kSampleRate);
    const double a1 = 2.0 * r * std::cos(kTwoPi * b.center_hz / kSampleRate);
    const double a2 = -r * r;
    const double g = b.gain * (1.0 - r);
    double y1 = 0.0, y2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = g * white[i] + a1 * y1 + a2 * y2;
      shaped[i] += y;
      y2 = y1;
      y1 = y;
    }
  }

  Waveform wave;
  wave.sample_rate = kSampleRate;
  wave.samples.resize(n);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    wave.samples[i] = envelope[i] * (tone[i] + 2.0 * shaped[i]);
    peak = std::max(peak, std::abs(wave.samples[i]));
  }
  const double scale = peak > 0.0 ? 0.5 / peak : 1.0;
  for (std::size_t i = 0; i < n; ++i)
    wave.samples[i] = wave.samples[i] * scale + profile.noise_level * gauss(rng);
  QuantizeTo16Bit(&wave);
  return wave;
}

ChannelConfig ChannelConfig::LowPassNoise(double cutoff_hz, double snr_db) {
  ChannelConfig c;
  c.identity = false;
  c.cutoff_hz = cutoff_hz;
  c.snr_db = snr_db;
  return c;
}

ChannelConfig ChannelConfig::FromConfig(const KeyValueConfig &config) {
  ChannelConfig c;
  const std::string type = config.GetString("channel.type", "lowpass");
  if (type == "identity") {
    c.identity = true;
  } else if (type == "lowpass") {
    c.identity = false;
  } else {
    throw Error(Errc::kInvalidConfig, "channel.type must be identity or lowpass");
  }
  c.cutoff_hz = config.GetDouble("channel.cutoff_hz", c.cutoff_hz);
  c.taps = static_cast<int>(config.GetInt("channel.taps", c.taps));
  c.snr_db = config.GetDouble("channel.snr_db", c.snr_db);
  if (!c.identity && (c.taps < 1 || c.taps % 2 == 0 || !(c.cutoff_hz > 0)))
    throw Error(Errc::kInvalidConfig, "channel: need odd taps and positive cutoff");
  return c;
}

Waveform ApplyChannel(const Waveform &wave, const ChannelConfig &channel,
                      uint64_t seed) {
  if (channel.identity) return wave;
  const int taps = channel.taps, half = taps / 2;
  const double fc = channel.cutoff_hz / wave.sample_rate;
  std::vector<double> h(static_cast<std::size_t>(taps));
  double sum = 0.0;
  for (int k = 0; k < taps; ++k) {
    const double m = k - half;
    const double sinc = m == 0 ? 2.0 * fc
                               : std::sin(kTwoPi * fc * m) / (std::numbers::pi * m);
    const double win =
        taps == 1 ? 1.0 : 0.54 - 0.46 * std::cos(kTwoPi * k / (taps - 1));
    h[static_cast<std::size_t>(k)] = sinc * win;
    sum += h[static_cast<std::size_t>(k)];
  }
  for (double &v : h) v /= sum;

  const auto n = static_cast<std::ptrdiff_t>(wave.samples.size());
  Waveform out;
  out.sample_rate = wave.sample_rate;
  out.samples.assign(wave.samples.size(), 0.0);
  double power = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < taps; ++k) {
      const std::ptrdiff_t j = i + half - k;
      if (j >= 0 && j < n) acc += h[static_cast<std::size_t>(k)] * wave.samples[j];
    }
    out.samples[i] = acc;
    power += acc * acc;
  }
  power /= std::max<std::ptrdiff_t>(n, 1);
  const double noise_std = std::sqrt(power / std::pow(10.0, channel.snr_db / 10.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, noise_std > 0 ? noise_std : 1e-12);
  for (double &s : out.samples) s += gauss(rng);
  return out;
}

TrialKey Corpus::KeyFor(const std::string &split,
                        const std::vector<std::string> &languages) const {
  TrialKey key(languages);
  for (const auto &u : utterances) {
    if (u.split != split) continue;
    if (key.LanguageIndex(u.language))
      key.Add(u.id, u.language);
    else
      key.AddOutOfSet(u.id);
  }
  return key;
}

std::vector<const Utterance *> Corpus::Split(const std::string &split) const {
  std::vector<const Utterance *> out;
  for (const auto &u : utterances)
    if (u.split == split) out.push_back(&u);
  return out;
}

Corpus GenerateCorpus(const std::vector<LanguageProfile> &profiles,
                      const std::vector<SplitCount> &counts, uint64_t seed) {
  if (profiles.size() < 2) throw Error(Errc::kInvalidProfile, "need at least two languages");
  std::set<std::string> ids;
  for (const auto &s : profiles) {
    s.Validate();
    if (!ids.insert(s.id).second)
      throw Error(Errc::kInvalidProfile, "language '" + s.id + "' given twice");
  }
  for (const auto &c : counts)
    if (c.per_language == 0)
      throw Error(Errc::kInvalidProfile, "split '" + c.split + "' has zero utterances");

  struct Job {
    const LanguageProfile *profile;
    const SplitCount *split;
    std::size_t index;
  };
  std::vector<Job> jobs;
  Corpus corpus;
  for (const auto &c : counts)
    for (const auto &s : profiles)
      for (std::size_t i = 0; i < c.per_language; ++i) {
        jobs.push_back({&s, &c, i});
        corpus.utterances.push_back({s.id + "_" + c.split + "_" + PadIndex(i), s.id,
                                     c.split, {}});
      }

  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const Job &job = jobs[static_cast<std::size_t>(j)];
    const uint64_t useed = DeriveSeed(seed, static_cast<uint64_t>(j));
    double seconds = job.split->seconds.value_or(0.0);
    if (!job.split->seconds) {
      std::mt19937_64 rng(useed);
      std::uniform_real_distribution<double> len(job.profile->min_seconds,
                                                 job.profile->max_seconds);
      seconds = len(rng);
    }
    corpus.utterances[static_cast<std::size_t>(j)].wave =
        SynthesizeUtterance(*job.profile, seconds, SplitMix64(useed));
  }
  return corpus;
}

void WriteCorpus(const Corpus &corpus, const std::string &dir,
                 const std::vector<std::string> &key_languages) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "wav");
  std::ofstream manifest(fs::path(dir) / "manifest.txt");
  std::ofstream refs(fs::path(dir) / "refs.txt");
  if (!manifest || !refs) throw Error(Errc::kIo, "cannot write manifests in " + dir);
  std::set<std::string> splits;
  for (const auto &u : corpus.utterances) {
    const std::string rel = "wav/" + u.id + ".wav";
    WriteWavFile((fs::path(dir) / rel).string(), u.wave);
    manifest << u.id << ' ' << u.language << ' ' << rel << ' ' << u.split << '\n';
    if (u.split == "ref") refs << u.language << ' ' << rel << '\n';
    splits.insert(u.split);
  }
  for (const auto &split : splits) {
    if (split == "train") continue;
    std::vector<std::string> langs;
    for (const auto &l : key_languages) {
      bool present = false;
      for (const auto &u : corpus.utterances)
        present = present || (u.split == split && u.language == l);
      if (present) langs.push_back(l);
    }
    if (langs.empty()) continue;
    std::ofstream key(fs::path(dir) / ("key_" + split + ".txt"));
    WriteKey(key, corpus.KeyFor(split, langs));
  }
}

std::vector<ManifestEntry> ReadManifest(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::kIo, "cannot open manifest " + path);
  namespace fs = std::filesystem;
  const fs::path base = fs::path(path).parent_path();
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() != 4)
      throw Error(Errc::kMalformedLine,
                  path + ":" + std::to_string(line_no) +
                      ": expected 'utt-id language-id wav-path split'",
                  line_no);
    fs::path wav(tok[2]);
    if (wav.is_relative()) wav = base / wav;
    entries.push_back({tok[0], tok[1], wav.string(), tok[3]});
  }
  return entries;
}

void ValidateSplits(const Corpus &corpus) {
  std::unordered_set<std::string> seen;
  for (const auto &u : corpus.utterances)
    if (!seen.insert(u.id).second)
      throw Error(Errc::kInvalidPlan, "utterance '" + u.id + "' appears in two splits");
}

Task ParseTask(const std::string &name) {
  if (name == "short_utterance") return Task::kShortUtterance;
  if (name == "cross_channel") return Task::kCrossChannel;
  if (name == "zero_resource") return Task::kZeroResource;
  throw Error(Errc::kInvalidConfig, "unknown task '" + name + "'");
}

const char *TaskName(Task task) {
  switch (task) {
    case Task::kShortUtterance: return "short_utterance";
    case Task::kCrossChannel: return "cross_channel";
    case Task::kZeroResource: return "zero_resource";
  }
  return "?";
}

ExperimentPlan ExperimentPlan::Default(Task task, uint64_t seed) {
  ExperimentPlan p;
  p.task = task;
  p.seed = seed;
  for (const char *id : {"syn-a", "syn-b", "syn-c"})
    p.train_languages.push_back(BuiltinLanguage(id));
  for (const char *id : {"syn-x", "syn-y"})
    p.unseen_languages.push_back(BuiltinLanguage(id));
  p.channel = ChannelConfig::LowPassNoise(800.0, 10.0);
  p.net_config.Set("net.size", "tiny");
  p.train.learn_rate = 0.02;
  p.train.batch_size = 16;
  p.train.epochs = 8;
  p.train.chunk_frames = 100;
  p.train.seed = seed;
  return p;
}

ExperimentPlan ExperimentPlan::FromConfig(const KeyValueConfig &c) {
  const uint64_t seed = static_cast<uint64_t>(c.GetInt("seed", 1));
  ExperimentPlan p = Default(ParseTask(c.GetString("task", "short_utterance")), seed);
  auto langs = [&](const std::string &key, const std::vector<std::string> &def) {
    std::vector<LanguageProfile> out;
    for (const auto &id : c.GetList(key, def)) out.push_back(LanguageFromConfig(c, id));
    return out;
  };
  p.train_languages = langs("harness.train_languages", {"syn-a", "syn-b", "syn-c"});
  p.unseen_languages = langs("harness.unseen_languages", {"syn-x", "syn-y"});
  auto count = [&](const std::string &key, std::size_t def) {
    const int64_t v = c.GetInt(key, static_cast<int64_t>(def));
    if (v <= 0) throw Error(Errc::kInvalidConfig, key + " must be positive");
    return static_cast<std::size_t>(v);
  };
  p.train_per_language = count("harness.train_per_language", p.train_per_language);
  p.test_per_language = count("harness.test_per_language", p.test_per_language);
  p.reference_per_language =
      count("harness.reference_per_language", p.reference_per_language);
  p.zero_resource_test_per_language = count("harness.zero_resource_test_per_language",
                                            p.zero_resource_test_per_language);
  p.test_seconds = c.GetDouble("harness.test_seconds", p.test_seconds);
  if (c.Has("harness.subset")) p.subset = c.GetList("harness.subset", {});
  if (c.Has("channel.type") || c.Has("channel.cutoff_hz") || c.Has("channel.snr_db") ||
      c.Has("channel.taps")) {
    p.channel = ChannelConfig::FromConfig(c);
  }
  for (const auto &[k, v] : c.entries())
    if (k.rfind("net.", 0) == 0) p.net_config.Set(k, v);
  TrainConfig defaults = p.train;
  KeyValueConfig train_keys;
  train_keys.Set("train.learn_rate", std::to_string(defaults.learn_rate));
  train_keys.Set("train.batch_size", std::to_string(defaults.batch_size));
  train_keys.Set("train.epochs", std::to_string(defaults.epochs));
  train_keys.Set("train.chunk_frames", std::to_string(defaults.chunk_frames));
  train_keys.Set("train.seed", std::to_string(seed));
  for (const auto &[k, v] : c.entries())
    if (k.rfind("train.", 0) == 0) train_keys.Set(k, v);
  p.train = TrainConfig::FromConfig(train_keys);
  p.fbank = FeatureConfig::FromConfig(c);
  p.vad = VadConfig::FromConfig(c);
  p.p_target = c.GetDouble("eval.p_target", p.p_target);
  p.Validate();
  return p;
}

void ExperimentPlan::Validate() const {
  auto bad = [](const std::string &what) { throw Error(Errc::kInvalidPlan, what); };
  if (train_languages.size() < 2) bad("need at least two training languages");
  std::set<std::string> trained;
  for (const auto &l : train_languages) {
    l.Validate();
    if (!trained.insert(l.id).second) bad("training language '" + l.id + "' repeated");
  }
  if (task == Task::kZeroResource) {
    if (unseen_languages.size() < 2) bad("zero-resource task needs two unseen languages");
    std::set<std::string> unseen;
    for (const auto &l : unseen_languages) {
      l.Validate();
      if (trained.count(l.id))
        bad("unseen language '" + l.id + "' is also a training language");
      if (!unseen.insert(l.id).second) bad("unseen language '" + l.id + "' repeated");
    }
  }
  if (subset) {
    if (subset->size() < 2) bad("subset needs at least two languages");
    for (const auto &id : *subset)
      if (!trained.count(id)) bad("subset language '" + id + "' was not trained");
  }
  if (!(test_seconds > 0)) bad("test_seconds must be positive");
  if (!(p_target > 0 && p_target < 1)) bad("p_target must lie in (0, 1)");
}

std::string TaskResult::ScoresText() const {
  std::ostringstream os;
  WriteScores(os, scores);
  return os.str();
}

std::string TaskResult::ReportText() const {
  std::ostringstream os;
  os << "task " << TaskName(task) << '\n';
  WriteReport(os, report);
  return os.str();
}

Experiment::Experiment(ExperimentPlan plan, const StepLogger &log)
    : plan_(std::move(plan)), extractor_(plan_.fbank) {
  plan_.Validate();
  std::vector<SplitCount> train_splits = {{"train", plan_.train_per_language, {}},
                                          {"test", plan_.test_per_language, {}}};
  corpus_ = GenerateCorpus(plan_.train_languages, train_splits, plan_.seed);
  if (plan_.task == Task::kZeroResource) {
    std::vector<SplitCount> zr_splits = {
        {"ref", plan_.reference_per_language, {}},
        {"zrtest", plan_.zero_resource_test_per_language, {}}};
    Corpus unseen =
        GenerateCorpus(plan_.unseen_languages, zr_splits, SplitMix64(plan_.seed ^ 0x5a5a));
    for (auto &u : unseen.utterances) corpus_.utterances.push_back(std::move(u));
  }
  ValidateSplits(corpus_);

  auto train_utts = corpus_.Split("train");
  std::vector<std::optional<FeatureMatrix>> feats(train_utts.size());
  const auto n = static_cast<std::ptrdiff_t>(train_utts.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    feats[k] = TryExtractFeatures(extractor_, train_utts[k]->wave, plan_.vad, nullptr);
  }
  const auto ids = TrainLanguageIds();
  const NetworkConfig net = NetworkConfig::FromConfig(plan_.net_config, ids.size());
  std::vector<LabeledFeatures> data;
  for (std::size_t k = 0; k < train_utts.size(); ++k) {
    if (!feats[k] || feats[k]->num_frames() < net.ReceptiveField()) continue;
    const auto label = std::find(ids.begin(), ids.end(), train_utts[k]->language) - ids.begin();
    data.push_back({&*feats[k], static_cast<int>(label)});
  }
  network_ = InitNetwork(net, SplitMix64(plan_.seed ^ 0x7e7e));
  Train(&network_, data, plan_.train, log);
}

std::vector<std::string> Experiment::TrainLanguageIds() const {
  std::vector<std::string> ids;
  for (const auto &l : plan_.train_languages) ids.push_back(l.id);
  return ids;
}

std::vector<std::string> Experiment::UnseenLanguageIds() const {
  std::vector<std::string> ids;
  for (const auto &l : plan_.unseen_languages) ids.push_back(l.id);
  return ids;
}

TaskResult Experiment::Run(Task task) const {
  switch (task) {
    case Task::kShortUtterance:
      return RunClosedSet(task, ChannelConfig{});
    case Task::kCrossChannel:
      return RunClosedSet(task, plan_.channel);
    case Task::kZeroResource:
      return RunZeroResource();
  }
  throw Error(Errc::kInvalidPlan, "unknown task");
}

TaskResult Experiment::RunClosedSet(Task task, const ChannelConfig &channel) const {
  const auto trained = TrainLanguageIds();
  std::vector<std::string> columns = plan_.subset.value_or(trained);
  std::vector<int> subset_idx;
  for (const auto &id : columns)
    subset_idx.push_back(
        static_cast<int>(std::find(trained.begin(), trained.end(), id) - trained.begin()));

  std::vector<const Utterance *> tests;
  for (const Utterance *u : corpus_.Split("test"))
    if (std::find(columns.begin(), columns.end(), u->language) != columns.end())
      tests.push_back(u);

  TaskResult result;
  result.task = task;
  result.scores.resize(tests.size());
  std::vector<std::string> warnings(tests.size());
  const auto crop_len = static_cast<std::size_t>(std::lround(plan_.test_seconds * kSampleRate));
  const auto n = static_cast<std::ptrdiff_t>(tests.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const Utterance &u = *tests[k];
    const uint64_t useed = DeriveSeed(plan_.seed ^ 0xc0ffee, k);
    Waveform crop;
    crop.sample_rate = u.wave.sample_rate;
    std::size_t offset = 0;
    if (u.wave.samples.size() > crop_len) {
      std::mt19937_64 rng(useed);
      offset = std::uniform_int_distribution<std::size_t>(
          0, u.wave.samples.size() - crop_len)(rng);
    }
    const std::size_t len = std::min(crop_len, u.wave.samples.size());
    crop.samples.assign(u.wave.samples.begin() + static_cast<std::ptrdiff_t>(offset),
                        u.wave.samples.begin() + static_cast<std::ptrdiff_t>(offset + len));
    crop = ApplyChannel(crop, channel, SplitMix64(useed));
    std::string warning;
    auto feats = TryExtractFeatures(extractor_, crop, plan_.vad, &warning);
    ScoreRecord rec{u.id, {}};
    if (!feats) {
      rec.scores.assign(columns.size(), -std::numeric_limits<double>::infinity());
      warnings[k] = u.id + ": " + warning;
    } else {
      SegmentScores s = ScoreClosedSet(network_, *feats, subset_idx);
      rec.scores = std::move(s.scores);
      if (!s.warnings.empty()) warnings[k] = u.id + ": " + s.warnings.front();
    }
    result.scores[k] = std::move(rec);
  }
  for (auto &w : warnings)
    if (!w.empty()) result.warnings.push_back(std::move(w));

  result.key = corpus_.KeyFor("test", columns);
  EvalConfig eval{plan_.p_target, columns.size(), ThresholdPolicy::MinSweep()};
  FillResult filled = FillMissing(result.scores, result.key);
  result.report = ComputeCavg(filled.records, result.key, eval);
  return result;
}

TaskResult Experiment::RunZeroResource() const {
  const auto unseen = UnseenLanguageIds();
  if (corpus_.Split("ref").empty())
    throw Error(Errc::kInvalidPlan, "experiment was not built for the zero-resource task");

  auto extract_all = [this](const std::vector<const Utterance *> &utts,
                            std::vector<std::string> *warnings) {
    std::vector<std::optional<FeatureMatrix>> feats(utts.size());
    warnings->assign(utts.size(), {});
    const auto n = static_cast<std::ptrdiff_t>(utts.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      feats[k] = TryExtractFeatures(extractor_, utts[k]->wave, plan_.vad, &(*warnings)[k]);
    }
    return feats;
  };

  TaskResult result;
  result.task = Task::kZeroResource;
  std::vector<std::string> warnings;

  auto refs = corpus_.Split("ref");
  auto ref_feats = extract_all(refs, &warnings);
  std::vector<std::pair<std::string, std::vector<FeatureMatrix>>> references;
  for (const auto &id : unseen) {
    std::vector<FeatureMatrix> list;
    for (std::size_t k = 0; k < refs.size(); ++k)
      if (refs[k]->language == id && ref_feats[k]) list.push_back(*ref_feats[k]);
    references.emplace_back(id, std::move(list));
  }
  const LanguageModelSet models = EnrollLanguages(network_, references);

  auto tests = corpus_.Split("zrtest");
  auto test_feats = extract_all(tests, &warnings);
  result.scores.resize(tests.size());
  for (std::size_t k = 0; k < tests.size(); ++k) {
    ScoreRecord rec{tests[k]->id, {}};
    if (!test_feats[k]) {
      rec.scores.assign(unseen.size(), -std::numeric_limits<double>::infinity());
      result.warnings.push_back(tests[k]->id + ": " + warnings[k]);
    } else {
      SegmentScores s = ScoreZeroResource(models, *test_feats[k], network_);
      rec.scores = std::move(s.scores);
      for (auto &w : s.warnings) result.warnings.push_back(tests[k]->id + ": " + w);
    }
    result.scores[k] = std::move(rec);
  }

  result.key = corpus_.KeyFor("zrtest", unseen);
  EvalConfig eval{plan_.p_target, unseen.size(), ThresholdPolicy::MinSweep()};
  FillResult filled = FillMissing(result.scores, result.key);
  result.report = ComputeCavg(filled.records, result.key, eval);
  return result;
}

TaskResult RunTask(const ExperimentPlan &plan, const StepLogger &log) {
  return Experiment(plan, log).Run(plan.task);
}

}  // namespace olr
