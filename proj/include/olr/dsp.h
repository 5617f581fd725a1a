// olr/dsp.h

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

#ifndef OLR_DSP_H_
#define OLR_DSP_H_

#include <memory>
#include <vector>

#include "olr/config.h"
#include "olr/matrix.h"
#include "olr/wav.h"

namespace olr {

struct FeatureConfig {
  double sample_rate = 16000.0;
  double frame_length_ms = 25.0;
  double frame_shift_ms = 10.0;
  int fft_size = 512;
  int num_mel_bins = 40;
  double low_freq = 20.0;
  double high_freq = 7600.0;
  double preemph = 0.97;
  double log_floor = 1e-10;

  std::size_t frame_length() const;  // samples
  std::size_t frame_shift() const;   // samples
  void Validate() const;

  /// Reads "fbank.*" keys; missing keys keep the defaults above.
  static FeatureConfig FromConfig(const KeyValueConfig &config);
};

struct VadConfig {
  double offset = -1.0;  // nats relative to the mean frame log-energy
  double log_floor = 1e-10;

  static VadConfig FromConfig(const KeyValueConfig &config);
};

/// T x D log-mel filterbank frames of one utterance.
struct FeatureMatrix {
  Matrix frames;
  double frame_shift = 0.01;  // seconds
  bool vad_mask_applied = false;

  std::size_t num_frames() const { return frames.rows(); }
  std::size_t dim() const { return frames.cols(); }
};

std::size_t NumFrames(std::size_t num_samples, const FeatureConfig &config);

double HzToMel(double hz);
double MelToHz(double mel);

/// Center frequency (Hz) of each triangular mel filter.
std::vector<double> MelCenterFrequencies(const FeatureConfig &config);

/// Per-frame pre-emphasis, Hamming window, |FFT|, triangular mel filters and
/// log with a floor. Holds the FFT plan; Compute() is safe to call from
/// several threads at once.
class FilterbankExtractor {
 public:
  explicit FilterbankExtractor(const FeatureConfig &config = {});

  const FeatureConfig &config() const { return config_; }

  /// Throws kTooShort when the waveform is shorter than one frame and
  /// kInvalidConfig on a sample-rate mismatch.
  FeatureMatrix Compute(const Waveform &wave) const;

  /// Weight of mel filter `filter` at FFT bin `bin`.
  double FilterWeight(int filter, int bin) const;

 private:
  struct Filter {
    int first_bin = 0;
    std::vector<double> weights;
  };

  FeatureConfig config_;
  std::vector<double> window_;
  std::vector<Filter> filters_;
  std::shared_ptr<void> plan_;
};

/// log(max(mean(x^2), floor)) of each raw frame, aligned with feature rows.
std::vector<double> FrameLogEnergy(const Waveform &wave,
                                   const FeatureConfig &config);

/// Keeps frame t iff its log-energy exceeds mean + offset and is above the
/// floor. An all-false mask is a valid result.
std::vector<bool> EnergyVad(const std::vector<double> &log_energy,
                            const VadConfig &config);

/// Drops masked-out rows. Throws kAllFramesRemoved if nothing survives and
/// kDimMismatch if the mask length differs from the row count.
FeatureMatrix ApplyVad(const FeatureMatrix &features,
                       const std::vector<bool> &mask);

/// Filterbanks followed by energy VAD.
FeatureMatrix ExtractSpeechFeatures(const FilterbankExtractor &extractor,
                                    const Waveform &wave,
                                    const VadConfig &vad);

}  // namespace olr

#endif  // OLR_DSP_H_
