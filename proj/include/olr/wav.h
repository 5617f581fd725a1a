// olr/wav.h

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

#ifndef OLR_WAV_H_
#define OLR_WAV_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace olr {

/// Mono audio with samples nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  double sample_rate = 16000.0;

  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Reads a RIFF/WAVE file holding mono 16-bit PCM. Samples are scaled by
/// 1/32768. Anything else is rejected with kUnsupportedAudio.
Waveform ReadWav(std::istream &is, const std::string &source = "<wav>");
Waveform ReadWavFile(const std::string &path);

/// Writes mono 16-bit PCM; samples are clipped to the int16 range.
void WriteWav(std::ostream &os, const Waveform &wave);
void WriteWavFile(const std::string &path, const Waveform &wave);

/// Rounds every sample to the 16-bit grid WriteWav uses, so an in-memory
/// waveform equals what a write/read cycle would give back.
void QuantizeTo16Bit(Waveform *wave);

}  // namespace olr

#endif  // OLR_WAV_H_
