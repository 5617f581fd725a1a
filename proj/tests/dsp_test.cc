// tests/dsp_test.cc

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

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "olr/dsp.h"
#include "olr/error.h"
#include "olr/wav.h"

using namespace olr;

namespace {

Waveform Sine(double hz, double seconds, double amp = 0.5) {
  Waveform w;
  w.samples.resize(static_cast<std::size_t>(seconds * w.sample_rate));
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    w.samples[i] = amp * std::sin(2.0 * std::numbers::pi * hz * i / w.sample_rate);
  return w;
}

Waveform Noise(std::size_t n, uint64_t seed, double amp = 0.1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, amp);
  Waveform w;
  w.samples.resize(n);
  for (double &x : w.samples) x = d(rng);
  return w;
}

int ArgMax(std::span<const double> row) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(row.size()); ++i)
    if (row[i] > row[best]) best = i;
  return best;
}

}  // namespace

TEST_CASE("frame count") {
  FeatureConfig c;
  CHECK(c.frame_length() == 400);
  CHECK(c.frame_shift() == 160);
  FilterbankExtractor ex(c);
  auto f = ex.Compute(Noise(16000, 1));
  CHECK(f.num_frames() == 1 + (16000 - 400) / 160);
  CHECK(f.num_frames() == 98);
  CHECK(f.dim() == 40);
  CHECK(ex.Compute(Noise(400, 1)).num_frames() == 1);
  try {
    ex.Compute(Noise(399, 1));
    FAIL("expected TooShort");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::kTooShort);
  }
}

TEST_CASE("1 kHz sine peaks in the filter centred nearest 1 kHz") {
  FeatureConfig c;
  // Analytic centres: equally spaced on the mel scale between the edges.
  auto mel = [](double hz) { return 1127.0 * std::log(1.0 + hz / 700.0); };
  const double lo = mel(c.low_freq), hi = mel(c.high_freq);
  const double step = (hi - lo) / (c.num_mel_bins + 1);
  int nearest = 0;
  double best = 1e300;
  for (int m = 0; m < c.num_mel_bins; ++m) {
    const double hz = 700.0 * (std::exp((lo + (m + 1) * step) / 1127.0) - 1.0);
    if (std::abs(hz - 1000.0) < best) {
      best = std::abs(hz - 1000.0);
      nearest = m;
    }
  }
  FilterbankExtractor ex(c);
  auto f = ex.Compute(Sine(1000.0, 1.0));
  for (std::size_t t = 0; t < f.num_frames(); ++t) CHECK(ArgMax(f.frames.row(t)) == nearest);
  auto centres = MelCenterFrequencies(c);
  CHECK(centres[nearest] == doctest::Approx(700.0 * (std::exp((lo + (nearest + 1) * step) / 1127.0) - 1.0)));
}

TEST_CASE("silence sits at the log floor") {
  FeatureConfig c;
  FilterbankExtractor ex(c);
  Waveform zero;
  zero.samples.assign(8000, 0.0);
  auto f = ex.Compute(zero);
  for (double v : f.frames.data()) CHECK(v == std::log(c.log_floor));
}

TEST_CASE("determinism and shift equivariance") {
  FeatureConfig c;
  FilterbankExtractor ex(c);
  auto w = Noise(12000, 7);
  CHECK(ex.Compute(w).frames == ex.Compute(w).frames);
  const std::size_t k = 3;
  Waveform delayed;
  delayed.samples.assign(k * c.frame_shift(), 0.0);
  delayed.samples.insert(delayed.samples.end(), w.samples.begin(), w.samples.end());
  auto a = ex.Compute(w), b = ex.Compute(delayed);
  REQUIRE(b.num_frames() == a.num_frames() + k);
  for (std::size_t t = 0; t < a.num_frames(); ++t)
    for (std::size_t d = 0; d < a.dim(); ++d)
      CHECK(std::abs(b.frames(t + k, d) - a.frames(t, d)) <= 1e-6 * std::abs(a.frames(t, d)) + 1e-12);
}

TEST_CASE("mel filters partition the band") {
  FeatureConfig c;
  FilterbankExtractor ex(c);
  const int bins = c.fft_size / 2 + 1;
  const auto centres = MelCenterFrequencies(c);
  for (int k = 0; k < bins; ++k) {
    const double hz = k * c.sample_rate / c.fft_size;
    double sum = 0.0;
    for (int m = 0; m < c.num_mel_bins; ++m) {
      const double w = ex.FilterWeight(m, k);
      CHECK(w >= 0.0);
      sum += w;
    }
    CHECK(sum <= 1.0001);
    if (hz > c.low_freq && hz < c.high_freq) CHECK(sum > 0.0);
    // Flat between the first and last centres.
    if (hz >= centres.front() && hz <= centres.back()) CHECK(sum == doctest::Approx(1.0));
  }
}

TEST_CASE("frame energy and scaling") {
  FeatureConfig c;
  auto w = Noise(8000, 3);
  auto e = FrameLogEnergy(w, c);
  REQUIRE(e.size() == NumFrames(w.samples.size(), c));
  for (std::size_t t = 0; t < e.size(); ++t) {
    double s = 0.0;
    for (std::size_t n = 0; n < c.frame_length(); ++n) {
      double x = w.samples[t * c.frame_shift() + n];
      s += x * x;
    }
    CHECK(e[t] == doctest::Approx(std::log(s / c.frame_length())).epsilon(1e-12));
  }
  Waveform scaled = w;
  for (double &x : scaled.samples) x *= 3.0;
  auto es = FrameLogEnergy(scaled, c);
  for (std::size_t t = 0; t < e.size(); ++t)
    CHECK(es[t] - e[t] == doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-9));
  CHECK(EnergyVad(es, {}) == EnergyVad(e, {}));
}

TEST_CASE("energy vad") {
  FeatureConfig c;
  auto tone = FrameLogEnergy(Sine(440.0, 1.0), c);
  for (bool keep : EnergyVad(tone, {})) CHECK(keep);

  Waveform zero;
  zero.samples.assign(16000, 0.0);
  for (bool keep : EnergyVad(FrameLogEnergy(zero, c), {})) CHECK_FALSE(keep);
  CHECK(EnergyVad({}, {}).empty());

  // Loud first half, silent second half.
  Waveform half = Noise(16000, 9, 0.3);
  for (std::size_t i = 8000; i < half.samples.size(); ++i) half.samples[i] = 0.0;
  auto energy = FrameLogEnergy(half, c);
  auto mask = EnergyVad(energy, {});
  double mean = 0.0;
  for (double v : energy) mean += v;
  mean /= static_cast<double>(energy.size());
  for (std::size_t t = 0; t < mask.size(); ++t) {
    CHECK(mask[t] == (energy[t] > mean - 1.0 && energy[t] > std::log(1e-10)));
    // Silent frames sit at the floor and drag the mean far down, so every
    // frame holding any loud sample survives.
    CHECK(mask[t] == (t * c.frame_shift() < 8000));
  }
}

TEST_CASE("apply vad") {
  FeatureMatrix f;
  f.frames = Matrix(4, 2);
  for (std::size_t t = 0; t < 4; ++t) f.frames(t, 0) = f.frames(t, 1) = static_cast<double>(t);
  auto all = ApplyVad(f, {true, true, true, true});
  CHECK(all.frames == f.frames);
  CHECK(all.vad_mask_applied);
  auto alt = ApplyVad(f, {true, false, true, false});
  REQUIRE(alt.num_frames() == 2);
  CHECK(alt.frames(0, 0) == 0.0);
  CHECK(alt.frames(1, 0) == 2.0);
  try {
    ApplyVad(f, {false, false, false, false});
    FAIL("expected AllFramesRemoved");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::kAllFramesRemoved);
  }
  CHECK_THROWS_AS(ApplyVad(f, {true}), Error);
}

TEST_CASE("config validation") {
  FeatureConfig c;
  c.high_freq = 9000.0;
  CHECK_THROWS_AS(c.Validate(), Error);
  c = FeatureConfig{};
  c.fft_size = 256;
  CHECK_THROWS_AS(FilterbankExtractor{c}, Error);
  FilterbankExtractor ex;
  Waveform w = Noise(1000, 1);
  w.sample_rate = 8000.0;
  CHECK_THROWS_AS(ex.Compute(w), Error);
}

TEST_CASE("wav round trip") {
  Waveform w = Noise(1234, 4, 0.2);
  QuantizeTo16Bit(&w);
  std::stringstream ss;
  WriteWav(ss, w);
  auto back = ReadWav(ss);
  CHECK(back.samples == w.samples);
  CHECK(back.sample_rate == 16000.0);

  std::string bytes = ss.str();
  bytes[22] = 2;  // channel count
  std::istringstream stereo(bytes);
  try {
    ReadWav(stereo);
    FAIL("expected UnsupportedAudio");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::kUnsupportedAudio);
  }
  std::istringstream junk("not a wav file at all, clearly");
  CHECK_THROWS_AS(ReadWav(junk), Error);
}
