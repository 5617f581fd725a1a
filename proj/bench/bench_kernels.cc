// bench/bench_kernels.cc

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

// Serial reference vs OpenMP kernels on layer shapes of the embedding
// network. Run with OMP_NUM_THREADS to control the parallel side.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "olr/kernels.h"

namespace {

using olr::Matrix;
namespace k = olr::kernels;

const std::vector<int> kOffsets = {-2, 0, 2};
constexpr std::size_t kDim = 512;

Matrix Random(std::size_t rows, std::size_t cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (double &x : m.data()) x = n(rng);
  return m;
}

struct Layer {
  explicit Layer(std::size_t frames)
      : in(Random(frames, kDim, 1)),
        weight(Random(kDim, kOffsets.size() * kDim, 2)),
        bias(kDim, 0.1),
        d_out(Random(k::SplicedFrames(frames, kOffsets), kDim, 3)) {}
  Matrix in, weight;
  std::vector<double> bias;
  Matrix d_out;
};

template <bool kSerial>
void BM_SpliceAffineForward(benchmark::State &state) {
  Layer l(state.range(0));
  Matrix out;
  for (auto _ : state) {
    if (kSerial)
      k::SpliceAffineForwardSerial(l.in, kOffsets, l.weight, l.bias, true, &out);
    else
      k::SpliceAffineForward(l.in, kOffsets, l.weight, l.bias, true, &out);
    benchmark::DoNotOptimize(out.data().data());
  }
}

template <bool kSerial>
void BM_SpliceAffineBackward(benchmark::State &state) {
  Layer l(state.range(0));
  Matrix d_in, d_weight(l.weight.rows(), l.weight.cols());
  std::vector<double> d_bias(kDim, 0.0);
  for (auto _ : state) {
    if (kSerial)
      k::SpliceAffineBackwardSerial(l.in, kOffsets, l.weight, l.d_out, &d_in, &d_weight, &d_bias);
    else
      k::SpliceAffineBackward(l.in, kOffsets, l.weight, l.d_out, &d_in, &d_weight, &d_bias);
    benchmark::DoNotOptimize(d_in.data().data());
  }
}

template <bool kSerial>
void BM_StatsPoolForward(benchmark::State &state) {
  Matrix h = Random(state.range(0), 1500, 4);
  std::vector<double> pooled;
  for (auto _ : state) {
    if (kSerial)
      k::StatsPoolForwardSerial(h, &pooled);
    else
      k::StatsPoolForward(h, &pooled);
    benchmark::DoNotOptimize(pooled.data());
  }
}

template <bool kSerial>
void BM_StatsPoolBackward(benchmark::State &state) {
  Matrix h = Random(state.range(0), 1500, 5);
  std::vector<double> pooled;
  k::StatsPoolForwardSerial(h, &pooled);
  std::vector<double> d_pooled(pooled.size(), 0.01);
  Matrix d_h;
  for (auto _ : state) {
    if (kSerial)
      k::StatsPoolBackwardSerial(h, pooled, d_pooled, 1e-10, &d_h);
    else
      k::StatsPoolBackward(h, pooled, d_pooled, 1e-10, &d_h);
    benchmark::DoNotOptimize(d_h.data().data());
  }
}

}  // namespace

BENCHMARK(BM_SpliceAffineForward<true>)->Name("SpliceAffineForward/serial")->Arg(100)->Arg(400);
BENCHMARK(BM_SpliceAffineForward<false>)->Name("SpliceAffineForward/omp")->Arg(100)->Arg(400);
BENCHMARK(BM_SpliceAffineBackward<true>)->Name("SpliceAffineBackward/serial")->Arg(100)->Arg(400);
BENCHMARK(BM_SpliceAffineBackward<false>)->Name("SpliceAffineBackward/omp")->Arg(100)->Arg(400);
BENCHMARK(BM_StatsPoolForward<true>)->Name("StatsPoolForward/serial")->Arg(100)->Arg(400);
BENCHMARK(BM_StatsPoolForward<false>)->Name("StatsPoolForward/omp")->Arg(100)->Arg(400);
BENCHMARK(BM_StatsPoolBackward<true>)->Name("StatsPoolBackward/serial")->Arg(100)->Arg(400);
BENCHMARK(BM_StatsPoolBackward<false>)->Name("StatsPoolBackward/omp")->Arg(100)->Arg(400);

BENCHMARK_MAIN();
