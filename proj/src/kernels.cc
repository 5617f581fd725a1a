// src/kernels.cc

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

#include "olr/kernels.h"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace olr::kernels {

namespace {

int MinOffset(std::span<const int> offsets) {
  return *std::min_element(offsets.begin(), offsets.end());
}

std::ptrdiff_t ToSigned(std::size_t n) { return static_cast<std::ptrdiff_t>(n); }

}  // namespace

std::size_t SplicedFrames(std::size_t in_frames, std::span<const int> offsets) {
  auto [lo, hi] = std::minmax_element(offsets.begin(), offsets.end());
  const auto span = static_cast<std::size_t>(*hi - *lo);
  return in_frames > span ? in_frames - span : 0;
}

void SpliceAffineForward(const Matrix &in, std::span<const int> offsets,
                         const Matrix &weight, std::span<const double> bias,
                         bool relu, Matrix *out) {
  const std::size_t in_dim = in.cols(), out_dim = weight.rows();
  const std::size_t frames = SplicedFrames(in.rows(), offsets);
  assert(weight.cols() == offsets.size() * in_dim);
  *out = Matrix(frames, out_dim);
  const int lo = MinOffset(offsets);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < ToSigned(frames); ++t) {
    auto dst = out->row(static_cast<std::size_t>(t));
    for (std::size_t o = 0; o < out_dim; ++o) {
      const double *w = weight.row(o).data();
      double acc = bias[o];
      for (std::size_t j = 0; j < offsets.size(); ++j) {
        const double *x = in.row(static_cast<std::size_t>(t + offsets[j] - lo)).data();
        const double *wj = w + j * in_dim;
        for (std::size_t i = 0; i < in_dim; ++i) acc += wj[i] * x[i];
      }
      dst[o] = relu ? std::max(acc, 0.0) : acc;
    }
  }
}

void SpliceAffineForwardSerial(const Matrix &in, std::span<const int> offsets,
                               const Matrix &weight, std::span<const double> bias,
                               bool relu, Matrix *out) {
  const std::size_t in_dim = in.cols(), out_dim = weight.rows();
  const std::size_t frames = SplicedFrames(in.rows(), offsets);
  *out = Matrix(frames, out_dim);
  const int lo = MinOffset(offsets);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t o = 0; o < out_dim; ++o) {
      double acc = bias[o];
      for (std::size_t j = 0; j < offsets.size(); ++j)
        for (std::size_t i = 0; i < in_dim; ++i)
          acc += weight(o, j * in_dim + i) * in(t + offsets[j] - lo, i);
      (*out)(t, o) = relu ? std::max(acc, 0.0) : acc;
    }
  }
}

void SpliceAffineBackward(const Matrix &in, std::span<const int> offsets,
                          const Matrix &weight, const Matrix &d_out,
                          Matrix *d_in, Matrix *d_weight,
                          std::vector<double> *d_bias) {
  const std::size_t in_dim = in.cols(), out_dim = weight.rows();
  const std::size_t frames = d_out.rows();
  const int lo = MinOffset(offsets);

  // Each thread owns whole rows of d_weight; the sum over t stays in order.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t o = 0; o < ToSigned(out_dim); ++o) {
    const auto uo = static_cast<std::size_t>(o);
    double *dw = d_weight->row(uo).data();
    double db = 0.0;
    for (std::size_t t = 0; t < frames; ++t) {
      const double g = d_out(t, uo);
      db += g;
      if (g == 0.0) continue;
      for (std::size_t j = 0; j < offsets.size(); ++j) {
        const double *x = in.row(t + offsets[j] - lo).data();
        double *dwj = dw + j * in_dim;
        for (std::size_t i = 0; i < in_dim; ++i) dwj[i] += g * x[i];
      }
    }
    (*d_bias)[uo] += db;
  }

  if (d_in == nullptr) return;
  *d_in = Matrix(in.rows(), in_dim);
  // Gather form: input frame s collects from every output frame that read it.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < ToSigned(in.rows()); ++s) {
    double *dst = d_in->row(static_cast<std::size_t>(s)).data();
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      const std::ptrdiff_t t = s - (offsets[j] - lo);
      if (t < 0 || t >= ToSigned(frames)) continue;
      const double *g = d_out.row(static_cast<std::size_t>(t)).data();
      for (std::size_t o = 0; o < out_dim; ++o) {
        if (g[o] == 0.0) continue;
        const double *wj = weight.row(o).data() + j * in_dim;
        for (std::size_t i = 0; i < in_dim; ++i) dst[i] += g[o] * wj[i];
      }
    }
  }
}

void SpliceAffineBackwardSerial(const Matrix &in, std::span<const int> offsets,
                                const Matrix &weight, const Matrix &d_out,
                                Matrix *d_in, Matrix *d_weight,
                                std::vector<double> *d_bias) {
  const std::size_t in_dim = in.cols(), out_dim = weight.rows();
  const int lo = MinOffset(offsets);
  if (d_in != nullptr) *d_in = Matrix(in.rows(), in_dim);
  for (std::size_t t = 0; t < d_out.rows(); ++t) {
    for (std::size_t o = 0; o < out_dim; ++o) {
      const double g = d_out(t, o);
      (*d_bias)[o] += g;
      for (std::size_t j = 0; j < offsets.size(); ++j) {
        const std::size_t s = t + offsets[j] - lo;
        for (std::size_t i = 0; i < in_dim; ++i) {
          (*d_weight)(o, j * in_dim + i) += g * in(s, i);
          if (d_in != nullptr) (*d_in)(s, i) += g * weight(o, j * in_dim + i);
        }
      }
    }
  }
}

void ReluBackward(const Matrix &activation, Matrix *grad) {
  auto &g = grad->data();
  const auto &a = activation.data();
  for (std::size_t k = 0; k < g.size(); ++k)
    if (a[k] <= 0.0) g[k] = 0.0;
}

void StatsPoolForward(const Matrix &h, std::vector<double> *pooled) {
  const std::size_t frames = h.rows(), dim = h.cols();
  pooled->assign(2 * dim, 0.0);
  const double inv = 1.0 / static_cast<double>(frames);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t d = 0; d < ToSigned(dim); ++d) {
    const auto ud = static_cast<std::size_t>(d);
    double sum = 0.0;
    for (std::size_t t = 0; t < frames; ++t) sum += h(t, ud);
    const double mean = sum * inv;
    double sq = 0.0;
    for (std::size_t t = 0; t < frames; ++t) {
      const double c = h(t, ud) - mean;
      sq += c * c;
    }
    (*pooled)[ud] = mean;
    (*pooled)[dim + ud] = std::sqrt(sq * inv);
  }
}

void StatsPoolForwardSerial(const Matrix &h, std::vector<double> *pooled) {
  const std::size_t frames = h.rows(), dim = h.cols();
  pooled->assign(2 * dim, 0.0);
  const double inv = 1.0 / static_cast<double>(frames);
  std::vector<double> sum(dim, 0.0), sq(dim, 0.0);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t d = 0; d < dim; ++d) sum[d] += h(t, d);
  for (std::size_t d = 0; d < dim; ++d) (*pooled)[d] = sum[d] * inv;
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t d = 0; d < dim; ++d) {
      const double c = h(t, d) - (*pooled)[d];
      sq[d] += c * c;
    }
  for (std::size_t d = 0; d < dim; ++d) (*pooled)[dim + d] = std::sqrt(sq[d] * inv);
}

void StatsPoolBackward(const Matrix &h, std::span<const double> pooled,
                       std::span<const double> d_pooled, double var_floor,
                       Matrix *d_h) {
  const std::size_t frames = h.rows(), dim = h.cols();
  *d_h = Matrix(frames, dim);
  const double inv = 1.0 / static_cast<double>(frames);
  const double std_floor = std::sqrt(var_floor);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t d = 0; d < ToSigned(dim); ++d) {
    const auto ud = static_cast<std::size_t>(d);
    const double mean = pooled[ud];
    const double scale = d_pooled[dim + ud] * inv / std::max(pooled[dim + ud], std_floor);
    const double from_mean = d_pooled[ud] * inv;
    for (std::size_t t = 0; t < frames; ++t)
      (*d_h)(t, ud) = from_mean + scale * (h(t, ud) - mean);
  }
}

void StatsPoolBackwardSerial(const Matrix &h, std::span<const double> pooled,
                             std::span<const double> d_pooled, double var_floor,
                             Matrix *d_h) {
  const std::size_t frames = h.rows(), dim = h.cols();
  *d_h = Matrix(frames, dim);
  const double inv = 1.0 / static_cast<double>(frames);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t d = 0; d < dim; ++d) {
      const double sd = std::max(pooled[dim + d], std::sqrt(var_floor));
      (*d_h)(t, d) = d_pooled[d] * inv +
                     d_pooled[dim + d] * inv / sd * (h(t, d) - pooled[d]);
    }
}

}  // namespace olr::kernels
