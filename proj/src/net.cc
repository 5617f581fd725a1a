// src/net.cc

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

#include "olr/net.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

#include "olr/error.h"
#include "olr/kernels.h"

namespace olr {

namespace {

constexpr double kStdVarFloor = 1e-10;
constexpr char kModelMagic[4] = {'O', 'L', 'R', 'N'};
constexpr uint32_t kModelVersion = 1;

const char *kFrameNames[] = {"frame1", "frame2", "frame3", "frame4", "frame5",
                             "frame6", "frame7", "frame8", "frame9"};

std::vector<double> Dense(const AffineLayer &layer, std::span<const double> x,
                          bool relu) {
  const Matrix &w = layer.weight;
  std::vector<double> y(w.rows());
  for (std::size_t o = 0; o < w.rows(); ++o) {
    const double *row = w.row(o).data();
    double acc = layer.bias[o];
    for (std::size_t i = 0; i < w.cols(); ++i) acc += row[i] * x[i];
    y[o] = relu ? std::max(acc, 0.0) : acc;
  }
  return y;
}

// Accumulates the weight/bias gradient of a dense layer and returns the
// gradient w.r.t. its input.
std::vector<double> DenseBackward(const AffineLayer &layer,
                                  std::span<const double> x,
                                  std::span<const double> d_y, Matrix *d_w,
                                  std::vector<double> *d_b) {
  const Matrix &w = layer.weight;
  std::vector<double> d_x(w.cols(), 0.0);
  for (std::size_t o = 0; o < w.rows(); ++o) {
    const double g = d_y[o];
    (*d_b)[o] += g;
    if (g == 0.0) continue;
    double *dw = d_w->row(o).data();
    const double *row = w.row(o).data();
    for (std::size_t i = 0; i < w.cols(); ++i) {
      dw[i] += g * x[i];
      d_x[i] += g * row[i];
    }
  }
  return d_x;
}

void MaskRelu(std::span<const double> activation, std::vector<double> *grad) {
  for (std::size_t i = 0; i < grad->size(); ++i)
    if (activation[i] <= 0.0) (*grad)[i] = 0.0;
}

std::vector<double> LogSoftmax(const std::vector<double> &z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - m);
  const double lse = m + std::log(sum);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] - lse;
  return out;
}

// Per-example loss and accumulated gradient.
double BackwardOne(const NetworkParams &params, const FeatureMatrix &features,
                   int label, Gradients *g) {
  ForwardResult fwd = Forward(params, features);
  const ForwardCache &c = fwd.cache;
  const auto &layers = params.layers();
  const std::size_t nf = params.num_frame_layers();
  const double loss = -fwd.log_posteriors[static_cast<std::size_t>(label)];

  std::vector<double> d_logits = fwd.posteriors;
  d_logits[static_cast<std::size_t>(label)] -= 1.0;

  const std::size_t out_idx = layers.size() - 1, s7 = nf + 1, s6 = nf;
  auto d_seg7 = DenseBackward(layers[out_idx], c.segment7_out, d_logits,
                              &g->weight[out_idx], &g->bias[out_idx]);
  MaskRelu(c.segment7_out, &d_seg7);
  auto d_seg6 = DenseBackward(layers[s7], c.segment6_out, d_seg7, &g->weight[s7],
                              &g->bias[s7]);
  MaskRelu(c.segment6_out, &d_seg6);
  auto d_pooled =
      DenseBackward(layers[s6], c.pooled, d_seg6, &g->weight[s6], &g->bias[s6]);

  Matrix d_act;
  kernels::StatsPoolBackward(c.frame_outputs.back(), c.pooled, d_pooled,
                             kStdVarFloor, &d_act);
  for (std::size_t l = nf; l-- > 0;) {
    kernels::ReluBackward(c.frame_outputs[l], &d_act);
    const Matrix &input = l == 0 ? features.frames : c.frame_outputs[l - 1];
    Matrix d_in;
    kernels::SpliceAffineBackward(input, layers[l].profile.context, layers[l].weight,
                                  d_act, l == 0 ? nullptr : &d_in,
                                  &g->weight[l], &g->bias[l]);
    d_act = std::move(d_in);
  }
  return loss;
}

template <typename T>
void Put(std::ostream &os, T value) {
  static_assert(std::endian::native == std::endian::little,
                "model I/O assumes a little-endian host");
  os.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T>
T Get(std::istream &is) {
  T value{};
  if (!is.read(reinterpret_cast<char *>(&value), sizeof(T)))
    throw Error(Errc::kCorruptModel, "model stream truncated");
  return value;
}

}  // namespace

NetworkConfig NetworkConfig::Standard(std::size_t num_classes) {
  NetworkConfig c;
  c.num_classes = num_classes;
  return c;
}

NetworkConfig NetworkConfig::Tiny(std::size_t num_classes, std::size_t width,
                                  std::size_t pool_width) {
  NetworkConfig c;
  c.frame_dims = {width, width, width, width, pool_width};
  c.segment6_dim = width;
  c.segment7_dim = width;
  c.num_classes = num_classes;
  return c;
}

NetworkConfig NetworkConfig::FromConfig(const KeyValueConfig &config,
                                        std::size_t num_classes) {
  const std::string size = config.GetString("net.size", "tiny");
  NetworkConfig c;
  if (size == "standard") {
    c = Standard(num_classes);
  } else if (size == "tiny") {
    c = Tiny(num_classes, static_cast<std::size_t>(config.GetInt("net.width", 32)),
             static_cast<std::size_t>(config.GetInt("net.pool_width", 64)));
  } else {
    throw Error(Errc::kInvalidConfig, "net.size must be 'standard' or 'tiny'");
  }
  c.feat_dim = static_cast<std::size_t>(
      config.GetInt("net.feat_dim", static_cast<int64_t>(c.feat_dim)));
  c.segment6_dim = static_cast<std::size_t>(
      config.GetInt("net.segment6_dim", static_cast<int64_t>(c.segment6_dim)));
  c.segment7_dim = static_cast<std::size_t>(
      config.GetInt("net.segment7_dim", static_cast<int64_t>(c.segment7_dim)));
  c.Validate();
  return c;
}

std::vector<LayerShape> NetworkConfig::Layers() const {
  std::vector<LayerShape> profiles;
  std::size_t prev = feat_dim;
  for (std::size_t l = 0; l < frame_dims.size(); ++l) {
    profiles.push_back({kFrameNames[l], LayerKind::kFrame, frame_contexts[l],
                     frame_contexts[l].size() * prev, frame_dims[l], true});
    prev = frame_dims[l];
  }
  profiles.push_back({"stats_pooling", LayerKind::kStatsPooling, {}, prev, 2 * prev, false});
  profiles.push_back({"segment6", LayerKind::kSegment, {0}, 2 * prev, segment6_dim, true});
  profiles.push_back(
      {"segment7", LayerKind::kSegment, {0}, segment6_dim, segment7_dim, true});
  profiles.push_back({"softmax", LayerKind::kOutput, {0}, segment7_dim, num_classes, false});
  return profiles;
}

std::size_t NetworkConfig::ReceptiveField() const {
  std::size_t field = 1;
  for (const auto &ctx : frame_contexts) {
    auto [lo, hi] = std::minmax_element(ctx.begin(), ctx.end());
    field += static_cast<std::size_t>(*hi - *lo);
  }
  return field;
}

void NetworkConfig::Validate() const {
  auto bad = [](const std::string &what) {
    throw Error(Errc::kInvalidConfig, "network config: " + what);
  };
  if (num_classes < 2) bad("need at least two classes");
  if (frame_dims.empty() || frame_dims.size() != frame_contexts.size())
    bad("frame_dims and frame_contexts must be nonempty and aligned");
  if (frame_dims.size() > std::size(kFrameNames)) bad("too many frame layers");
  if (feat_dim == 0 || segment6_dim == 0 || segment7_dim == 0) bad("zero width");
  for (std::size_t l = 0; l < frame_dims.size(); ++l) {
    if (frame_dims[l] == 0) bad("zero width");
    if (frame_contexts[l].empty()) bad("empty context");
    if (!std::is_sorted(frame_contexts[l].begin(), frame_contexts[l].end()))
      bad("context offsets must be ascending");
  }
}

NetworkParams::NetworkParams(const NetworkConfig &config) : config_(config) {
  config_.Validate();
  for (const auto &profile : config_.Layers()) {
    if (profile.kind == LayerKind::kStatsPooling) continue;
    layers_.push_back({profile, Matrix(profile.out_dim, profile.in_dim),
                       std::vector<double>(profile.out_dim, 0.0)});
  }
}

std::size_t NetworkParams::ParameterCount() const {
  std::size_t n = 0;
  for (const auto &l : layers_) n += l.weight.data().size() + l.bias.size();
  return n;
}

std::size_t NetworkParams::EmbeddingParameterCount() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i + 2 < layers_.size(); ++i)
    n += layers_[i].weight.data().size() + layers_[i].bias.size();
  return n;
}

bool NetworkParams::AllFinite() const {
  for (const auto &l : layers_) {
    for (double v : l.weight.data())
      if (!std::isfinite(v)) return false;
    for (double v : l.bias)
      if (!std::isfinite(v)) return false;
  }
  return true;
}

bool NetworkParams::operator==(const NetworkParams &other) const {
  if (layers_.size() != other.layers_.size()) return false;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto &a = layers_[i], &b = other.layers_[i];
    if (!(a.profile == b.profile) || !(a.weight == b.weight) || a.bias != b.bias)
      return false;
  }
  return true;
}

NetworkParams InitNetwork(const NetworkConfig &config, uint64_t seed) {
  NetworkParams params(config);
  std::mt19937_64 rng(seed);
  for (auto &layer : params.layers()) {
    std::normal_distribution<double> dist(
        0.0, 1.0 / std::sqrt(static_cast<double>(layer.profile.in_dim)));
    for (double &w : layer.weight.data()) w = dist(rng);
  }
  return params;
}

ForwardResult Forward(const NetworkParams &params, const FeatureMatrix &features) {
  const NetworkConfig &config = params.config();
  if (features.dim() != config.feat_dim)
    throw Error(Errc::kDimMismatch, "features have dim " +
                                        std::to_string(features.dim()) +
                                        ", network expects " +
                                        std::to_string(config.feat_dim));
  if (features.num_frames() < config.ReceptiveField())
    throw Error(Errc::kTooFewFrames,
                std::to_string(features.num_frames()) + " frames, need at least " +
                    std::to_string(config.ReceptiveField()));

  ForwardResult result;
  ForwardCache &c = result.cache;
  const auto &layers = params.layers();
  const std::size_t nf = params.num_frame_layers();
  c.frame_outputs.resize(nf);
  const Matrix *input = &features.frames;
  for (std::size_t l = 0; l < nf; ++l) {
    kernels::SpliceAffineForward(*input, layers[l].profile.context, layers[l].weight,
                                 layers[l].bias, true, &c.frame_outputs[l]);
    input = &c.frame_outputs[l];
  }
  kernels::StatsPoolForward(c.frame_outputs.back(), &c.pooled);
  c.segment6_affine = Dense(params.segment6(), c.pooled, false);
  c.segment6_out = c.segment6_affine;
  for (double &v : c.segment6_out) v = std::max(v, 0.0);
  c.segment7_out = Dense(params.segment7(), c.segment6_out, true);
  c.logits = Dense(params.output(), c.segment7_out, false);
  result.log_posteriors = LogSoftmax(c.logits);
  result.posteriors.resize(result.log_posteriors.size());
  for (std::size_t i = 0; i < result.posteriors.size(); ++i)
    result.posteriors[i] = std::exp(result.log_posteriors[i]);
  return result;
}

XVector ExtractXVector(const NetworkParams &params, const FeatureMatrix &features,
                       const std::string &segment_id) {
  ForwardResult fwd = Forward(params, features);
  return {std::move(fwd.cache.segment6_affine), segment_id};
}

Gradients Gradients::ZerosLike(const NetworkParams &params) {
  Gradients g;
  for (const auto &l : params.layers()) {
    g.weight.emplace_back(l.weight.rows(), l.weight.cols());
    g.bias.emplace_back(l.bias.size(), 0.0);
  }
  return g;
}

void Gradients::Add(const Gradients &other) {
  for (std::size_t l = 0; l < weight.size(); ++l) {
    auto &w = weight[l].data();
    const auto &ow = other.weight[l].data();
    for (std::size_t k = 0; k < w.size(); ++k) w[k] += ow[k];
    for (std::size_t k = 0; k < bias[l].size(); ++k) bias[l][k] += other.bias[l][k];
  }
}

void Gradients::Scale(double factor) {
  for (std::size_t l = 0; l < weight.size(); ++l) {
    for (double &v : weight[l].data()) v *= factor;
    for (double &v : bias[l]) v *= factor;
  }
}

double ComputeGradients(const NetworkParams &params,
                        const std::vector<LabeledFeatures> &batch,
                        Gradients *grads) {
  if (batch.empty()) throw Error(Errc::kInvalidConfig, "empty training batch");
  for (const auto &ex : batch) {
    if (ex.label < 0 || static_cast<std::size_t>(ex.label) >= params.num_classes())
      throw Error(Errc::kUnknownLanguage,
                  "label " + std::to_string(ex.label) + " out of range");
  }
  *grads = Gradients::ZerosLike(params);
  const auto n = static_cast<std::ptrdiff_t>(batch.size());
  std::vector<Gradients> per_example(batch.size());
  std::vector<double> losses(batch.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    per_example[k] = Gradients::ZerosLike(params);
    losses[k] = BackwardOne(params, *batch[k].features, batch[k].label,
                            &per_example[k]);
  }
  // Fixed-order reduction keeps results independent of the thread count.
  double loss = 0.0;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    grads->Add(per_example[k]);
    loss += losses[k];
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  grads->Scale(inv);
  return loss * inv;
}

TrainConfig TrainConfig::FromConfig(const KeyValueConfig &config) {
  TrainConfig t;
  t.learn_rate = config.GetDouble("train.learn_rate", t.learn_rate);
  t.batch_size = static_cast<std::size_t>(
      config.GetInt("train.batch_size", static_cast<int64_t>(t.batch_size)));
  t.epochs = static_cast<std::size_t>(
      config.GetInt("train.epochs", static_cast<int64_t>(t.epochs)));
  t.chunk_frames = static_cast<std::size_t>(
      config.GetInt("train.chunk_frames", static_cast<int64_t>(t.chunk_frames)));
  t.seed = static_cast<uint64_t>(config.GetInt("train.seed", static_cast<int64_t>(t.seed)));
  if (!(t.learn_rate >= 0) || t.batch_size == 0)
    throw Error(Errc::kInvalidConfig, "train: need learn_rate >= 0 and batch_size > 0");
  return t;
}

double TrainStep(NetworkParams *params, const std::vector<LabeledFeatures> &batch,
                 double learn_rate) {
  Gradients grads;
  const double loss = ComputeGradients(*params, batch, &grads);
  if (!std::isfinite(loss))
    throw Error(Errc::kNonFiniteLoss, "training loss is not finite");
  if (learn_rate == 0.0) return loss;
  auto &layers = params->layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto &w = layers[l].weight.data();
    const auto &gw = grads.weight[l].data();
    for (std::size_t k = 0; k < w.size(); ++k) w[k] -= learn_rate * gw[k];
    for (std::size_t k = 0; k < layers[l].bias.size(); ++k)
      layers[l].bias[k] -= learn_rate * grads.bias[l][k];
  }
  return loss;
}

std::vector<double> Train(NetworkParams *params,
                          const std::vector<LabeledFeatures> &data,
                          const TrainConfig &config, const StepLogger &log) {
  if (data.empty()) throw Error(Errc::kInvalidConfig, "no training data");
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t min_frames = params->config().ReceptiveField();
  std::vector<double> losses;
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::vector<FeatureMatrix> crops;
      crops.reserve(end - start);
      std::vector<LabeledFeatures> batch;
      for (std::size_t i = start; i < end; ++i) {
        const LabeledFeatures &ex = data[order[i]];
        const FeatureMatrix &f = *ex.features;
        const std::size_t len = config.chunk_frames;
        if (len >= min_frames && f.num_frames() > len) {
          std::uniform_int_distribution<std::size_t> pick(0, f.num_frames() - len);
          const std::size_t off = pick(rng);
          FeatureMatrix crop;
          crop.frame_shift = f.frame_shift;
          crop.vad_mask_applied = f.vad_mask_applied;
          crop.frames = Matrix(len, f.dim());
          for (std::size_t t = 0; t < len; ++t) {
            auto src = f.frames.row(off + t);
            std::copy(src.begin(), src.end(), crop.frames.row(t).begin());
          }
          crops.push_back(std::move(crop));
          batch.push_back({&crops.back(), ex.label});
        } else {
          batch.push_back(ex);
        }
      }
      const double loss = TrainStep(params, batch, config.learn_rate);
      losses.push_back(loss);
      if (log) log(step, loss);
      ++step;
    }
  }
  return losses;
}

void SaveParams(std::ostream &os, const NetworkParams &params) {
  const NetworkConfig &c = params.config();
  os.write(kModelMagic, 4);
  Put<uint32_t>(os, kModelVersion);
  Put<uint32_t>(os, static_cast<uint32_t>(c.feat_dim));
  Put<uint32_t>(os, static_cast<uint32_t>(c.num_classes));
  Put<uint32_t>(os, static_cast<uint32_t>(c.frame_dims.size()));
  for (std::size_t l = 0; l < c.frame_dims.size(); ++l) {
    Put<uint32_t>(os, static_cast<uint32_t>(c.frame_dims[l]));
    Put<uint32_t>(os, static_cast<uint32_t>(c.frame_contexts[l].size()));
    for (int off : c.frame_contexts[l]) Put<int32_t>(os, off);
  }
  Put<uint32_t>(os, static_cast<uint32_t>(c.segment6_dim));
  Put<uint32_t>(os, static_cast<uint32_t>(c.segment7_dim));
  for (const auto &layer : params.layers()) {
    Put<uint32_t>(os, static_cast<uint32_t>(layer.profile.out_dim));
    Put<uint32_t>(os, static_cast<uint32_t>(layer.profile.in_dim));
    for (double v : layer.weight.data()) Put<double>(os, v);
    for (double v : layer.bias) Put<double>(os, v);
  }
}

NetworkParams LoadParams(std::istream &is,
                         std::optional<std::size_t> expected_classes) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kModelMagic, 4) != 0)
    throw Error(Errc::kCorruptModel, "not a model file (bad magic)");
  if (Get<uint32_t>(is) != kModelVersion)
    throw Error(Errc::kCorruptModel, "unsupported model version");
  NetworkConfig c;
  c.feat_dim = Get<uint32_t>(is);
  c.num_classes = Get<uint32_t>(is);
  const uint32_t num_frame = Get<uint32_t>(is);
  if (num_frame == 0 || num_frame > std::size(kFrameNames))
    throw Error(Errc::kCorruptModel, "bad frame layer count");
  c.frame_dims.clear();
  c.frame_contexts.clear();
  for (uint32_t l = 0; l < num_frame; ++l) {
    c.frame_dims.push_back(Get<uint32_t>(is));
    const uint32_t n_ctx = Get<uint32_t>(is);
    if (n_ctx == 0 || n_ctx > 64) throw Error(Errc::kCorruptModel, "bad context size");
    std::vector<int> ctx(n_ctx);
    for (int &off : ctx) off = Get<int32_t>(is);
    c.frame_contexts.push_back(std::move(ctx));
  }
  c.segment6_dim = Get<uint32_t>(is);
  c.segment7_dim = Get<uint32_t>(is);
  if (expected_classes && *expected_classes != c.num_classes)
    throw Error(Errc::kDimMismatch, "model has " + std::to_string(c.num_classes) +
                                        " classes, expected " +
                                        std::to_string(*expected_classes));
  try {
    c.Validate();
  } catch (const Error &e) {
    throw Error(Errc::kCorruptModel, std::string("bad model header: ") + e.what());
  }
  NetworkParams params(c);
  for (auto &layer : params.layers()) {
    const uint32_t out = Get<uint32_t>(is), in = Get<uint32_t>(is);
    if (out != layer.profile.out_dim || in != layer.profile.in_dim)
      throw Error(Errc::kDimMismatch, "layer " + layer.profile.name +
                                          " dims disagree with the model header");
    for (double &v : layer.weight.data()) v = Get<double>(is);
    for (double &v : layer.bias) v = Get<double>(is);
  }
  if (!params.AllFinite())
    throw Error(Errc::kCorruptModel, "model contains non-finite values");
  return params;
}

void SaveParamsFile(const std::string &path, const NetworkParams &params) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::kIo, "cannot write " + path);
  SaveParams(os, params);
  if (!os) throw Error(Errc::kIo, "write failed for " + path);
}

NetworkParams LoadParamsFile(const std::string &path,
                             std::optional<std::size_t> expected_classes) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::kIo, "cannot open " + path);
  return LoadParams(is, expected_classes);
}

}  // namespace olr
