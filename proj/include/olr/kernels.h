// olr/kernels.h

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

#ifndef OLR_KERNELS_H_
#define OLR_KERNELS_H_

#include <span>
#include <vector>

#include "olr/matrix.h"

// Data-parallel building blocks of the embedding network. Each kernel has an
// OpenMP version used by the library and a plain serial reference kept for
// tests and benchmarks. The parallel forward kernels are bit-identical to
// their references; backward kernels agree to rounding.
namespace olr::kernels {

/// Number of output frames a splice over `offsets` leaves from `in_frames`.
std::size_t SplicedFrames(std::size_t in_frames, std::span<const int> offsets);

/// out[t] = W * [in[t + o_0 - o_min]; ...; in[t + o_k - o_min]] + b, followed
/// by max(0, .) when `relu` is set. W is out_dim x (|offsets| * in_dim).
void SpliceAffineForward(const Matrix &in, std::span<const int> offsets,
                         const Matrix &weight, std::span<const double> bias,
                         bool relu, Matrix *out);
void SpliceAffineForwardSerial(const Matrix &in, std::span<const int> offsets,
                               const Matrix &weight, std::span<const double> bias,
                               bool relu, Matrix *out);

/// Backpropagates `d_out` (gradient w.r.t. the affine output, i.e. after any
/// rectifier mask has been applied). Accumulates into `d_weight`/`d_bias`
/// and overwrites `d_in` unless it is null.
void SpliceAffineBackward(const Matrix &in, std::span<const int> offsets,
                          const Matrix &weight, const Matrix &d_out,
                          Matrix *d_in, Matrix *d_weight,
                          std::vector<double> *d_bias);
void SpliceAffineBackwardSerial(const Matrix &in, std::span<const int> offsets,
                                const Matrix &weight, const Matrix &d_out,
                                Matrix *d_in, Matrix *d_weight,
                                std::vector<double> *d_bias);

/// Zeroes entries of `grad` where the rectified `activation` is 0.
void ReluBackward(const Matrix &activation, Matrix *grad);

/// Per-dimension mean and population standard deviation over rows, as
/// [mean_0..mean_{D-1}, std_0..std_{D-1}]. Two-pass variance.
void StatsPoolForward(const Matrix &h, std::vector<double> *pooled);
void StatsPoolForwardSerial(const Matrix &h, std::vector<double> *pooled);

/// Gradient of the pooled statistics w.r.t. the input rows. The standard
/// deviation in the denominator is floored at sqrt(var_floor).
void StatsPoolBackward(const Matrix &h, std::span<const double> pooled,
                       std::span<const double> d_pooled, double var_floor,
                       Matrix *d_h);
void StatsPoolBackwardSerial(const Matrix &h, std::span<const double> pooled,
                             std::span<const double> d_pooled, double var_floor,
                             Matrix *d_h);

}  // namespace olr::kernels

#endif  // OLR_KERNELS_H_
