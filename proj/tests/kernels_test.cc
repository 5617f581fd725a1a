// tests/kernels_test.cc

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
#include <random>

#include "doctest.h"
#include "olr/kernels.h"
#include "checks.h"
#include "oracles.h"

using namespace olr;
using namespace olr::kernels;

namespace {

Matrix RandomMatrix(std::mt19937_64 &rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix m(r, c);
  for (double &x : m.data()) x = d(rng);
  return m;
}

std::vector<double> RandomVector(std::mt19937_64 &rng, std::size_t n) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (double &x : v) x = d(rng);
  return v;
}

double Dot(const Matrix &a, const Matrix &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double MaxAbsDiff(const std::vector<double> &a, const std::vector<double> &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

constexpr double kH = 1e-4;

}  // namespace

TEST_CASE("spliced frame count") {
  const std::vector<int> ctx = {-2, 0, 2};
  CHECK(SplicedFrames(10, ctx) == 6);
  CHECK(SplicedFrames(5, ctx) == 1);
  CHECK(SplicedFrames(4, ctx) == 0);
}

TEST_CASE("parallel kernels agree with serial references") {
  std::mt19937_64 rng(1);
  const std::vector<std::vector<int>> contexts = {{-2, -1, 0, 1, 2}, {-3, 0, 3}, {0}};
  for (const auto &ctx : contexts) {
    Matrix in = RandomMatrix(rng, 37, 6);
    Matrix w = RandomMatrix(rng, 9, 6 * ctx.size());
    auto b = RandomVector(rng, 9);
    for (bool relu : {false, true}) {
      Matrix o1, o2;
      SpliceAffineForward(in, ctx, w, b, relu, &o1);
      SpliceAffineForwardSerial(in, ctx, w, b, relu, &o2);
      CHECK(o1 == o2);
    }
    Matrix out;
    SpliceAffineForward(in, ctx, w, b, false, &out);
    Matrix d_out = RandomMatrix(rng, out.rows(), out.cols());
    Matrix di1, di2, dw1(w.rows(), w.cols()), dw2(w.rows(), w.cols());
    std::vector<double> db1(9, 0.0), db2(9, 0.0);
    SpliceAffineBackward(in, ctx, w, d_out, &di1, &dw1, &db1);
    SpliceAffineBackwardSerial(in, ctx, w, d_out, &di2, &dw2, &db2);
    CHECK(MaxAbsDiff(di1.data(), di2.data()) < 1e-12);
    CHECK(MaxAbsDiff(dw1.data(), dw2.data()) < 1e-12);
    CHECK(MaxAbsDiff(db1, db2) < 1e-12);
  }
  Matrix h = RandomMatrix(rng, 50, 7);
  std::vector<double> p1, p2;
  StatsPoolForward(h, &p1);
  StatsPoolForwardSerial(h, &p2);
  CHECK(p1 == p2);
  auto dp = RandomVector(rng, 14);
  Matrix dh1, dh2;
  StatsPoolBackward(h, p1, dp, 1e-10, &dh1);
  StatsPoolBackwardSerial(h, p1, dp, 1e-10, &dh2);
  CHECK(MaxAbsDiff(dh1.data(), dh2.data()) < 1e-12);
}

TEST_CASE("pooling matches two-pass statistics") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix h = RandomMatrix(rng, 3 + trial * 7, 5);
    for (double &x : h.data()) x = x * 10.0 + 100.0;
    std::vector<double> pooled;
    StatsPoolForward(h, &pooled);
    for (std::size_t d = 0; d < h.cols(); ++d) {
      double mean = 0.0;
      for (std::size_t t = 0; t < h.rows(); ++t) mean += h(t, d);
      mean /= static_cast<double>(h.rows());
      double var = 0.0;
      for (std::size_t t = 0; t < h.rows(); ++t) var += (h(t, d) - mean) * (h(t, d) - mean);
      var /= static_cast<double>(h.rows());
      CHECK(std::abs(pooled[d] - mean) <= 1e-10);
      CHECK(std::abs(pooled[h.cols() + d] - std::sqrt(var)) <= 1e-10);
    }
  }
  Matrix constant(20, 3, 0.7);
  std::vector<double> pooled;
  StatsPoolForward(constant, &pooled);
  for (std::size_t d = 0; d < 3; ++d) {
    CHECK(std::abs(pooled[d] - 0.7) <= 1e-10);
    CHECK(std::abs(pooled[3 + d]) <= 1e-10);
  }
  std::vector<double> dp = {1, 1, 1, 1, 1, 1};
  Matrix dh;
  StatsPoolBackward(constant, pooled, dp, 1e-10, &dh);
  for (double v : dh.data()) CHECK(std::isfinite(v));
}

TEST_CASE("kernel gradients match finite differences") {
  for (uint64_t seed = 1; seed <= 8; ++seed) {
    CAPTURE(seed);
    CHECK(checks::SpliceAffineGradientError(seed) < 1e-4);
    CHECK(checks::StatsPoolGradientError(seed) < 1e-4);
  }
}

TEST_CASE("relu backward masks inactive units") {
  Matrix act(1, 3);
  act(0, 0) = 0.0;
  act(0, 1) = 2.0;
  act(0, 2) = 0.0;
  Matrix g(1, 3, 5.0);
  ReluBackward(act, &g);
  CHECK(g(0, 0) == 0.0);
  CHECK(g(0, 1) == 5.0);
  CHECK(g(0, 2) == 0.0);
}
