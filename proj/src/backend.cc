// src/backend.cc

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

#include "olr/backend.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "olr/error.h"
#include "olr/submission.h"

namespace olr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

SegmentScores ScoreClosedSet(const NetworkParams &params,
                             const FeatureMatrix &features,
                             const std::optional<std::vector<int>> &subset) {
  const std::size_t n = params.num_classes();
  if (subset) {
    for (int idx : *subset)
      if (idx < 0 || static_cast<std::size_t>(idx) >= n)
        throw Error(Errc::kUnknownLanguage,
                    "subset index " + std::to_string(idx) + " not a trained class");
  }
  const std::size_t width = subset ? subset->size() : n;
  SegmentScores out;
  std::vector<double> full;
  try {
    full = Forward(params, features).log_posteriors;
  } catch (const Error &e) {
    if (e.code() != Errc::kTooFewFrames) throw;
    out.scores.assign(width, kNegInf);
    out.warnings.push_back(e.what());
    return out;
  }
  if (!subset) {
    out.scores = std::move(full);
  } else {
    for (int idx : *subset) out.scores.push_back(full[static_cast<std::size_t>(idx)]);
  }
  return out;
}

LanguageModelSet EnrollFromXVectors(
    const std::vector<std::pair<std::string, std::vector<std::vector<double>>>> &xvectors) {
  LanguageModelSet models;
  for (const auto &[lang, vecs] : xvectors) {
    if (vecs.empty())
      throw Error(Errc::kNoUsableReferences,
                  "no usable reference utterances for language '" + lang + "'");
    std::vector<double> centroid(vecs.front().size(), 0.0);
    for (const auto &v : vecs) {
      if (v.size() != centroid.size())
        throw Error(Errc::kDimMismatch, "x-vector dims differ within '" + lang + "'");
      for (std::size_t i = 0; i < v.size(); ++i) centroid[i] += v[i];
    }
    for (double &c : centroid) c /= static_cast<double>(vecs.size());
    models.language_ids.push_back(lang);
    models.centroids.push_back(std::move(centroid));
    models.num_reference_utts.push_back(vecs.size());
  }
  return models;
}

LanguageModelSet EnrollLanguages(
    const NetworkParams &params,
    const std::vector<std::pair<std::string, std::vector<FeatureMatrix>>> &references) {
  std::vector<std::pair<std::string, std::vector<std::vector<double>>>> xvectors;
  for (const auto &[lang, feats] : references) {
    std::vector<std::vector<double>> vecs;
    for (const auto &f : feats) {
      try {
        vecs.push_back(ExtractXVector(params, f).values);
      } catch (const Error &e) {
        if (e.code() != Errc::kTooFewFrames) throw;
      }
    }
    xvectors.emplace_back(lang, std::move(vecs));
  }
  return EnrollFromXVectors(xvectors);
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(Errc::kDimMismatch, "cosine of vectors with different dims");
  const double na = Norm(a), nb = Norm(b);
  if (na == 0.0 || nb == 0.0)
    throw Error(Errc::kZeroNormVector, "cosine similarity of a zero-norm vector");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

SegmentScores ScoreZeroResource(const LanguageModelSet &models,
                                const std::vector<double> &xvector) {
  SegmentScores out;
  out.scores.reserve(models.centroids.size());
  for (std::size_t i = 0; i < models.centroids.size(); ++i) {
    try {
      out.scores.push_back(CosineSimilarity(xvector, models.centroids[i]));
    } catch (const Error &e) {
      if (e.code() != Errc::kZeroNormVector) throw;
      out.scores.push_back(kNegInf);
      out.warnings.push_back("language '" + models.language_ids[i] + "': " + e.what());
    }
  }
  return out;
}

SegmentScores ScoreZeroResource(const LanguageModelSet &models,
                                const FeatureMatrix &features,
                                const NetworkParams &params) {
  try {
    return ScoreZeroResource(models, ExtractXVector(params, features).values);
  } catch (const Error &e) {
    if (e.code() != Errc::kTooFewFrames) throw;
    SegmentScores out;
    out.scores.assign(models.centroids.size(), kNegInf);
    out.warnings.push_back(e.what());
    return out;
  }
}

void WriteLanguageModels(std::ostream &os, const LanguageModelSet &models) {
  for (std::size_t i = 0; i < models.language_ids.size(); ++i) {
    os << models.language_ids[i] << ' ' << models.num_reference_utts[i];
    // 17 significant digits, so centroids survive a write/read exactly.
    for (double v : models.centroids[i]) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      os << ' ' << buf;
    }
    os << '\n';
  }
}

LanguageModelSet ReadLanguageModels(std::istream &is, const std::string &source) {
  LanguageModelSet models;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string lang;
    if (!(ls >> lang) || lang.front() == '#') continue;
    std::size_t count = 0;
    std::vector<double> centroid;
    std::string tok;
    if (!(ls >> count) || count == 0)
      throw Error(Errc::kMalformedLine,
                  source + ":" + std::to_string(line_no) + ": bad reference count",
                  line_no);
    while (ls >> tok) {
      try {
        centroid.push_back(std::stod(tok));
      } catch (const std::exception &) {
        throw Error(Errc::kMalformedLine,
                    source + ":" + std::to_string(line_no) + ": bad value '" + tok + "'",
                    line_no);
      }
    }
    if (centroid.empty() ||
        (!models.centroids.empty() && centroid.size() != models.centroids[0].size()))
      throw Error(Errc::kMalformedLine,
                  source + ":" + std::to_string(line_no) + ": centroid dimension", line_no);
    models.language_ids.push_back(lang);
    models.num_reference_utts.push_back(count);
    models.centroids.push_back(std::move(centroid));
  }
  return models;
}

std::optional<FeatureMatrix> TryExtractFeatures(const FilterbankExtractor &extractor,
                                                const Waveform &wave,
                                                const VadConfig &vad,
                                                std::string *warning) {
  try {
    return ExtractSpeechFeatures(extractor, wave, vad);
  } catch (const Error &e) {
    if (e.code() != Errc::kAllFramesRemoved && e.code() != Errc::kTooShort) throw;
    if (warning != nullptr) *warning = e.what();
    return std::nullopt;
  }
}

std::vector<std::optional<FeatureMatrix>> ExtractFeaturesBatch(
    const FilterbankExtractor &extractor, const std::vector<Waveform> &waves,
    const VadConfig &vad, std::vector<std::string> *warnings) {
  std::vector<std::optional<FeatureMatrix>> out(waves.size());
  warnings->assign(waves.size(), {});
  const auto n = static_cast<std::ptrdiff_t>(waves.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = TryExtractFeatures(extractor, waves[k], vad, &(*warnings)[k]);
  }
  return out;
}

}  // namespace olr
