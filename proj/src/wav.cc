// src/wav.cc

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

#include "olr/wav.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "olr/error.h"

namespace olr {

namespace {

uint32_t ReadU32(const unsigned char *p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const unsigned char *p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::ostream &os, uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff),
                     static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

void PutU16(std::ostream &os, uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  os.write(b, 2);
}

int16_t ToPcm(double sample) {
  double scaled = std::nearbyint(sample * 32768.0);
  return static_cast<int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

[[noreturn]] void Unsupported(const std::string &source, const std::string &what) {
  throw Error(Errc::kUnsupportedAudio, source + ": " + what);
}

}  // namespace

Waveform ReadWav(std::istream &is, const std::string &source) {
  std::array<unsigned char, 12> riff{};
  if (!is.read(reinterpret_cast<char *>(riff.data()), 12) ||
      std::memcmp(riff.data(), "RIFF", 4) != 0 ||
      std::memcmp(riff.data() + 8, "WAVE", 4) != 0)
    Unsupported(source, "not a RIFF/WAVE file");

  bool have_fmt = false;
  uint16_t channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  while (true) {
    std::array<unsigned char, 8> chunk{};
    if (!is.read(reinterpret_cast<char *>(chunk.data()), 8))
      Unsupported(source, "no data chunk");
    uint32_t size = ReadU32(chunk.data() + 4);
    if (std::memcmp(chunk.data(), "fmt ", 4) == 0) {
      if (size < 16) Unsupported(source, "short fmt chunk");
      std::vector<unsigned char> fmt(size + (size & 1));
      if (!is.read(reinterpret_cast<char *>(fmt.data()),
                   static_cast<std::streamsize>(fmt.size())))
        Unsupported(source, "truncated fmt chunk");
      uint16_t format = ReadU16(fmt.data());
      channels = ReadU16(fmt.data() + 2);
      sample_rate = ReadU32(fmt.data() + 4);
      bits = ReadU16(fmt.data() + 14);
      if (format != 1) Unsupported(source, "only PCM encoding is supported");
      if (channels != 1) Unsupported(source, "only mono audio is supported");
      if (bits != 16) Unsupported(source, "only 16-bit samples are supported");
      if (sample_rate == 0) Unsupported(source, "zero sample rate");
      have_fmt = true;
    } else if (std::memcmp(chunk.data(), "data", 4) == 0) {
      if (!have_fmt) Unsupported(source, "data chunk before fmt chunk");
      std::vector<unsigned char> raw(size);
      if (!is.read(reinterpret_cast<char *>(raw.data()),
                   static_cast<std::streamsize>(size)))
        Unsupported(source, "truncated data chunk");
      Waveform wave;
      wave.sample_rate = sample_rate;
      wave.samples.resize(size / 2);
      for (std::size_t i = 0; i < wave.samples.size(); ++i) {
        auto v = static_cast<int16_t>(ReadU16(raw.data() + 2 * i));
        wave.samples[i] = static_cast<double>(v) / 32768.0;
      }
      return wave;
    } else {
      is.ignore(static_cast<std::streamsize>(size + (size & 1)));
      if (!is) Unsupported(source, "truncated chunk");
    }
  }
}

Waveform ReadWavFile(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::kIo, "cannot open " + path);
  return ReadWav(is, path);
}

void WriteWav(std::ostream &os, const Waveform &wave) {
  const auto rate = static_cast<uint32_t>(std::lround(wave.sample_rate));
  const auto data_bytes = static_cast<uint32_t>(wave.samples.size() * 2);
  os.write("RIFF", 4);
  PutU32(os, 36 + data_bytes);
  os.write("WAVEfmt ", 8);
  PutU32(os, 16);
  PutU16(os, 1);
  PutU16(os, 1);
  PutU32(os, rate);
  PutU32(os, rate * 2);
  PutU16(os, 2);
  PutU16(os, 16);
  os.write("data", 4);
  PutU32(os, data_bytes);
  for (double s : wave.samples) PutU16(os, static_cast<uint16_t>(ToPcm(s)));
}

void WriteWavFile(const std::string &path, const Waveform &wave) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::kIo, "cannot write " + path);
  WriteWav(os, wave);
  if (!os) throw Error(Errc::kIo, "write failed for " + path);
}

void QuantizeTo16Bit(Waveform *wave) {
  for (double &s : wave->samples) s = static_cast<double>(ToPcm(s)) / 32768.0;
}

}  // namespace olr
