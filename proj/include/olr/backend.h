// olr/backend.h

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

#ifndef OLR_BACKEND_H_
#define OLR_BACKEND_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "olr/dsp.h"
#include "olr/net.h"

namespace olr {

/// Scores for one segment plus any diagnostics raised while producing them.
struct SegmentScores {
  std::vector<double> scores;
  std::vector<std::string> warnings;
};

/// Log posteriors of the trained classes. With `subset`, only those columns
/// are reported, in subset order and without renormalization. Segments the
/// network cannot process score -inf everywhere.
SegmentScores ScoreClosedSet(const NetworkParams &params,
                             const FeatureMatrix &features,
                             const std::optional<std::vector<int>> &subset = {});

/// Language-level x-vectors for zero-resource scoring.
struct LanguageModelSet {
  std::vector<std::string> language_ids;
  std::vector<std::vector<double>> centroids;
  std::vector<std::size_t> num_reference_utts;
};

/// Centroid of each language = mean of its usable reference x-vectors.
/// References with too few frames are skipped; a language with none left
/// throws kNoUsableReferences.
LanguageModelSet EnrollLanguages(
    const NetworkParams &params,
    const std::vector<std::pair<std::string, std::vector<FeatureMatrix>>> &references);

/// Same, from precomputed x-vectors.
LanguageModelSet EnrollFromXVectors(
    const std::vector<std::pair<std::string, std::vector<std::vector<double>>>> &xvectors);

/// <a, b> / (|a| |b|). Throws kZeroNormVector if either norm is zero.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

/// Cosine similarity of the test x-vector to every centroid. A zero-norm
/// vector yields -inf in the affected columns and a warning.
SegmentScores ScoreZeroResource(const LanguageModelSet &models,
                                const std::vector<double> &xvector);
SegmentScores ScoreZeroResource(const LanguageModelSet &models,
                                const FeatureMatrix &features,
                                const NetworkParams &params);

void WriteLanguageModels(std::ostream &os, const LanguageModelSet &models);
LanguageModelSet ReadLanguageModels(std::istream &is,
                                    const std::string &source = "<models>");

/// Filterbanks + VAD; nullopt (with a warning) when VAD removes everything
/// or the audio is shorter than a frame.
std::optional<FeatureMatrix> TryExtractFeatures(const FilterbankExtractor &extractor,
                                                const Waveform &wave,
                                                const VadConfig &vad,
                                                std::string *warning);

/// TryExtractFeatures over many waveforms in parallel. `warnings` gets one
/// entry per waveform (empty when extraction succeeded).
std::vector<std::optional<FeatureMatrix>> ExtractFeaturesBatch(
    const FilterbankExtractor &extractor, const std::vector<Waveform> &waves,
    const VadConfig &vad, std::vector<std::string> *warnings);

}  // namespace olr

#endif  // OLR_BACKEND_H_
