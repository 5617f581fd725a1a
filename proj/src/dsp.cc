// src/dsp.cc

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

#include "olr/dsp.h"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "olr/error.h"

namespace olr {

namespace {

// FFTW planning is not thread-safe; execution with new-array calls is.
std::mutex &PlannerMutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

std::size_t FeatureConfig::frame_length() const {
  return static_cast<std::size_t>(std::lround(sample_rate * frame_length_ms / 1000.0));
}

std::size_t FeatureConfig::frame_shift() const {
  return static_cast<std::size_t>(std::lround(sample_rate * frame_shift_ms / 1000.0));
}

void FeatureConfig::Validate() const {
  auto bad = [](const std::string &what) {
    throw Error(Errc::kInvalidConfig, "feature config: " + what);
  };
  if (!(sample_rate > 0)) bad("sample_rate must be positive");
  if (frame_length() == 0) bad("frame length must be at least one sample");
  if (frame_shift() == 0) bad("frame shift must be at least one sample");
  if (fft_size < static_cast<int>(frame_length())) bad("fft_size below frame length");
  if (num_mel_bins < 1) bad("num_mel_bins must be positive");
  if (!(low_freq >= 0 && low_freq < high_freq && high_freq <= sample_rate / 2))
    bad("need 0 <= low_freq < high_freq <= nyquist");
  if (!(preemph >= 0 && preemph < 1)) bad("preemph must lie in [0, 1)");
  if (!(log_floor > 0)) bad("log_floor must be positive");
}

FeatureConfig FeatureConfig::FromConfig(const KeyValueConfig &c) {
  FeatureConfig f;
  f.sample_rate = c.GetDouble("fbank.sample_rate", f.sample_rate);
  f.frame_length_ms = c.GetDouble("fbank.frame_length_ms", f.frame_length_ms);
  f.frame_shift_ms = c.GetDouble("fbank.frame_shift_ms", f.frame_shift_ms);
  f.fft_size = static_cast<int>(c.GetInt("fbank.fft_size", f.fft_size));
  f.num_mel_bins = static_cast<int>(c.GetInt("fbank.num_mel_bins", f.num_mel_bins));
  f.low_freq = c.GetDouble("fbank.low_freq", f.low_freq);
  f.high_freq = c.GetDouble("fbank.high_freq", f.high_freq);
  f.preemph = c.GetDouble("fbank.preemph", f.preemph);
  f.log_floor = c.GetDouble("fbank.log_floor", f.log_floor);
  f.Validate();
  return f;
}

VadConfig VadConfig::FromConfig(const KeyValueConfig &c) {
  VadConfig v;
  v.offset = c.GetDouble("vad.offset", v.offset);
  v.log_floor = c.GetDouble("vad.log_floor", v.log_floor);
  if (!(v.log_floor > 0))
    throw Error(Errc::kInvalidConfig, "vad.log_floor must be positive");
  return v;
}

std::size_t NumFrames(std::size_t num_samples, const FeatureConfig &config) {
  const std::size_t len = config.frame_length(), shift = config.frame_shift();
  if (num_samples < len) return 0;
  return 1 + (num_samples - len) / shift;
}

double HzToMel(double hz) { return 1127.0 * std::log(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::exp(mel / 1127.0) - 1.0); }

std::vector<double> MelCenterFrequencies(const FeatureConfig &config) {
  const double lo = HzToMel(config.low_freq), hi = HzToMel(config.high_freq);
  const double step = (hi - lo) / (config.num_mel_bins + 1);
  std::vector<double> centers(config.num_mel_bins);
  for (int m = 0; m < config.num_mel_bins; ++m)
    centers[m] = MelToHz(lo + (m + 1) * step);
  return centers;
}

FilterbankExtractor::FilterbankExtractor(const FeatureConfig &config)
    : config_(config) {
  config_.Validate();
  const std::size_t len = config_.frame_length();
  window_.resize(len);
  for (std::size_t n = 0; n < len; ++n) {
    window_[n] = len == 1 ? 1.0
                          : 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n /
                                                   static_cast<double>(len - 1));
  }

  const int num_bins = config_.fft_size / 2 + 1;
  const double lo = HzToMel(config_.low_freq), hi = HzToMel(config_.high_freq);
  const double step = (hi - lo) / (config_.num_mel_bins + 1);
  filters_.resize(config_.num_mel_bins);
  for (int m = 0; m < config_.num_mel_bins; ++m) {
    const double left = lo + m * step, center = left + step, right = center + step;
    Filter &f = filters_[m];
    f.first_bin = -1;
    for (int k = 0; k < num_bins; ++k) {
      double mel = HzToMel(k * config_.sample_rate / config_.fft_size);
      double w = 0.0;
      if (mel > left && mel <= center)
        w = (mel - left) / (center - left);
      else if (mel > center && mel < right)
        w = (right - mel) / (right - center);
      if (w <= 0.0) {
        if (f.first_bin >= 0) break;
        continue;
      }
      if (f.first_bin < 0) f.first_bin = k;
      f.weights.push_back(w);
    }
    if (f.first_bin < 0) f.first_bin = 0;
  }

  std::lock_guard<std::mutex> lock(PlannerMutex());
  std::vector<double> in(config_.fft_size);
  std::vector<std::complex<double>> out(num_bins);
  fftw_plan plan = fftw_plan_dft_r2c_1d(
      config_.fft_size, in.data(), reinterpret_cast<fftw_complex *>(out.data()),
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_ = std::shared_ptr<void>(plan, [](void *p) {
    std::lock_guard<std::mutex> l(PlannerMutex());
    fftw_destroy_plan(static_cast<fftw_plan>(p));
  });
}

double FilterbankExtractor::FilterWeight(int filter, int bin) const {
  const Filter &f = filters_.at(filter);
  int offset = bin - f.first_bin;
  if (offset < 0 || offset >= static_cast<int>(f.weights.size())) return 0.0;
  return f.weights[offset];
}

FeatureMatrix FilterbankExtractor::Compute(const Waveform &wave) const {
  if (std::abs(wave.sample_rate - config_.sample_rate) > 1e-9)
    throw Error(Errc::kInvalidConfig,
                "waveform rate " + std::to_string(wave.sample_rate) +
                    " Hz differs from feature config");
  const std::size_t len = config_.frame_length(), shift = config_.frame_shift();
  const std::size_t num_frames = NumFrames(wave.samples.size(), config_);
  if (num_frames == 0)
    throw Error(Errc::kTooShort, "waveform shorter than one frame");

  const int num_bins = config_.fft_size / 2 + 1;
  FeatureMatrix features;
  features.frames = Matrix(num_frames, config_.num_mel_bins);
  features.frame_shift = config_.frame_shift_ms / 1000.0;

  std::vector<double> buf(config_.fft_size);
  std::vector<std::complex<double>> bins(num_bins);
  std::vector<double> mag(num_bins);
  const auto plan = static_cast<fftw_plan>(plan_.get());
  const double floor = config_.log_floor;
  for (std::size_t t = 0; t < num_frames; ++t) {
    const double *x = wave.samples.data() + t * shift;
    std::fill(buf.begin(), buf.end(), 0.0);
    // Pre-emphasis restarts in every frame, so frames depend only on their
    // own samples.
    for (std::size_t n = 0; n < len; ++n) {
      double prev = n > 0 ? x[n - 1] : x[0];
      buf[n] = (x[n] - config_.preemph * prev) * window_[n];
    }
    fftw_execute_dft_r2c(plan, buf.data(),
                         reinterpret_cast<fftw_complex *>(bins.data()));
    for (int k = 0; k < num_bins; ++k) mag[k] = std::abs(bins[k]);
    auto row = features.frames.row(t);
    for (int m = 0; m < config_.num_mel_bins; ++m) {
      const Filter &f = filters_[m];
      double energy = 0.0;
      for (std::size_t i = 0; i < f.weights.size(); ++i)
        energy += f.weights[i] * mag[f.first_bin + i];
      row[m] = std::log(std::max(energy, floor));
    }
  }
  return features;
}

std::vector<double> FrameLogEnergy(const Waveform &wave,
                                   const FeatureConfig &config) {
  const std::size_t len = config.frame_length(), shift = config.frame_shift();
  const std::size_t num_frames = NumFrames(wave.samples.size(), config);
  std::vector<double> energy(num_frames);
  for (std::size_t t = 0; t < num_frames; ++t) {
    const double *x = wave.samples.data() + t * shift;
    double sum = 0.0;
    for (std::size_t n = 0; n < len; ++n) sum += x[n] * x[n];
    energy[t] = std::log(std::max(sum / static_cast<double>(len), config.log_floor));
  }
  return energy;
}

std::vector<bool> EnergyVad(const std::vector<double> &log_energy,
                            const VadConfig &config) {
  std::vector<bool> mask(log_energy.size(), false);
  if (log_energy.empty()) return mask;
  double mean = 0.0;
  for (double e : log_energy) mean += e;
  mean /= static_cast<double>(log_energy.size());
  const double silence = std::log(config.log_floor);
  const double threshold = mean + config.offset;
  for (std::size_t t = 0; t < log_energy.size(); ++t)
    mask[t] = log_energy[t] > threshold && log_energy[t] > silence;
  return mask;
}

FeatureMatrix ApplyVad(const FeatureMatrix &features,
                       const std::vector<bool> &mask) {
  if (mask.size() != features.num_frames())
    throw Error(Errc::kDimMismatch, "VAD mask length " + std::to_string(mask.size()) +
                                        " != " + std::to_string(features.num_frames()) +
                                        " frames");
  std::size_t kept = 0;
  for (bool m : mask) kept += m;
  if (kept == 0) throw Error(Errc::kAllFramesRemoved, "VAD removed every frame");
  FeatureMatrix out;
  out.frame_shift = features.frame_shift;
  out.vad_mask_applied = true;
  out.frames = Matrix(kept, features.dim());
  std::size_t r = 0;
  for (std::size_t t = 0; t < mask.size(); ++t) {
    if (!mask[t]) continue;
    auto src = features.frames.row(t);
    std::copy(src.begin(), src.end(), out.frames.row(r++).begin());
  }
  return out;
}

FeatureMatrix ExtractSpeechFeatures(const FilterbankExtractor &extractor,
                                    const Waveform &wave, const VadConfig &vad) {
  FeatureMatrix features = extractor.Compute(wave);
  auto mask = EnergyVad(FrameLogEnergy(wave, extractor.config()), vad);
  return ApplyVad(features, mask);
}

}  // namespace olr
