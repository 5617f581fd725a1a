// tests/backend_test.cc

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
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "olr/backend.h"
#include "olr/error.h"

using namespace olr;

namespace {

FeatureMatrix RandomFeatures(std::mt19937_64 &rng, std::size_t frames, std::size_t dim) {
  std::normal_distribution<double> d(0.0, 1.0);
  FeatureMatrix f;
  f.frames = Matrix(frames, dim);
  for (double &x : f.frames.data()) x = d(rng);
  return f;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("closed-set scores are log posteriors") {
  std::mt19937_64 rng(1);
  auto params = InitNetwork(NetworkConfig::Tiny(10), 1);
  auto f = RandomFeatures(rng, 40, 40);
  auto full = ScoreClosedSet(params, f);
  REQUIRE(full.scores.size() == 10);
  double total = 0.0;
  for (double s : full.scores) total += std::exp(s);
  CHECK(std::abs(total - 1.0) <= 1e-9);

  std::vector<int> subset = {7, 0, 3, 9, 4, 1};
  auto part = ScoreClosedSet(params, f, subset);
  REQUIRE(part.scores.size() == 6);
  for (std::size_t i = 0; i < subset.size(); ++i)
    CHECK(part.scores[i] == full.scores[static_cast<std::size_t>(subset[i])]);

  CHECK_THROWS_AS(ScoreClosedSet(params, f, std::vector<int>{10}), Error);

  auto tiny = ScoreClosedSet(params, RandomFeatures(rng, 5, 40), subset);
  CHECK(tiny.scores == std::vector<double>(6, -kInf));
  CHECK(tiny.warnings.size() == 1);
}

TEST_CASE("silent audio cannot produce features") {
  FilterbankExtractor ex;
  Waveform silent;
  silent.samples.assign(16000, 0.0);
  std::string warning;
  CHECK_FALSE(TryExtractFeatures(ex, silent, {}, &warning).has_value());
  CHECK_FALSE(warning.empty());
  Waveform blip;
  blip.samples.assign(100, 0.1);
  CHECK_FALSE(TryExtractFeatures(ex, blip, {}, &warning).has_value());
}

TEST_CASE("cosine similarity") {
  std::vector<double> a = {1.0, 2.0, -0.5}, b = {-2.0, 1.0, 0.0};
  CHECK(CosineSimilarity(a, a) == doctest::Approx(1.0));
  CHECK(CosineSimilarity(a, b) == doctest::Approx(0.0));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> d;
  for (int i = 0; i < 50; ++i) {
    std::vector<double> x(8), y(8);
    for (double &v : x) v = d(rng);
    for (double &v : y) v = d(rng);
    const double s = CosineSimilarity(x, y);
    CHECK(s == CosineSimilarity(y, x));
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
    auto scaled = x;
    for (double &v : scaled) v *= 3.7;
    CHECK(CosineSimilarity(scaled, y) == doctest::Approx(s).epsilon(1e-12));
  }
  std::vector<double> zero(3, 0.0);
  try {
    CosineSimilarity(a, zero);
    FAIL("expected ZeroNormVector");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::kZeroNormVector);
    CHECK(IsNumericalError(e.code()));
  }
}

TEST_CASE("enrollment centroids") {
  std::vector<double> v = {1.0, -2.0, 0.5};
  auto single = EnrollFromXVectors({{"x", {v}}});
  CHECK(single.centroids[0] == v);
  CHECK(single.num_reference_utts[0] == 1);

  std::vector<double> neg = {-1.0, 2.0, -0.5};
  auto cancel = EnrollFromXVectors({{"x", {v, neg}}, {"y", {v}}});
  for (double c : cancel.centroids[0]) CHECK(c == 0.0);
  auto scored = ScoreZeroResource(cancel, v);
  CHECK(scored.scores[0] == -kInf);
  CHECK(scored.scores[1] == doctest::Approx(1.0));
  CHECK(scored.warnings.size() == 1);

  try {
    EnrollFromXVectors({{"x", {}}});
    FAIL("expected NoUsableReferences");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::kNoUsableReferences);
  }

  std::mt19937_64 rng(3);
  auto params = InitNetwork(NetworkConfig::Tiny(3), 2);
  std::vector<FeatureMatrix> refs;
  for (int i = 0; i < 10; ++i) refs.push_back(RandomFeatures(rng, 30, 40));
  refs.push_back(RandomFeatures(rng, 4, 40));  // too short, skipped
  auto models = EnrollLanguages(params, {{"x", refs}});
  CHECK(models.num_reference_utts[0] == 10);
  std::vector<double> mean(models.centroids[0].size(), 0.0);
  for (int i = 0; i < 10; ++i) {
    auto x = ExtractXVector(params, refs[static_cast<std::size_t>(i)]).values;
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += x[k] / 10.0;
  }
  for (std::size_t k = 0; k < mean.size(); ++k)
    CHECK(std::abs(models.centroids[0][k] - mean[k]) <= 1e-12);

  auto x0 = ExtractXVector(params, refs[0]).values;
  auto via_features = ScoreZeroResource(models, refs[0], params);
  CHECK(via_features.scores == ScoreZeroResource(models, x0).scores);
  CHECK(ScoreZeroResource(models, RandomFeatures(rng, 3, 40), params).scores[0] == -kInf);
}

TEST_CASE("language model file round trip") {
  LanguageModelSet m;
  m.language_ids = {"syn-x", "syn-y"};
  m.centroids = {{0.1, -1.0 / 3.0, 2e-7}, {5.0, 0.0, -1.25}};
  m.num_reference_utts = {10, 9};
  std::stringstream ss;
  WriteLanguageModels(ss, m);
  auto back = ReadLanguageModels(ss);
  CHECK(back.language_ids == m.language_ids);
  CHECK(back.num_reference_utts == m.num_reference_utts);
  CHECK(back.centroids == m.centroids);
  std::istringstream bad("x 1 0.5\ny 1 0.5 0.25\n");
  CHECK_THROWS_AS(ReadLanguageModels(bad), Error);
}
