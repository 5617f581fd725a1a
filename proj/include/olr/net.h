// olr/net.h

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

#ifndef OLR_NET_H_
#define OLR_NET_H_

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "olr/config.h"
#include "olr/dsp.h"
#include "olr/matrix.h"

namespace olr {

enum class LayerKind { kFrame, kStatsPooling, kSegment, kOutput };

struct LayerShape {
  std::string name;
  LayerKind kind = LayerKind::kFrame;
  std::vector<int> context;  // frame offsets; {0} for segment-level layers
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  bool has_nonlinearity = true;

  bool operator==(const LayerShape &) const = default;
};

/// Shape of the x-vector TDNN. Frame layers splice the previous layer at
/// their context offsets; statistics pooling follows the last frame layer.
struct NetworkConfig {
  std::size_t feat_dim = 40;
  std::vector<std::size_t> frame_dims = {512, 512, 512, 512, 1500};
  std::vector<std::vector<int>> frame_contexts = {
      {-2, -1, 0, 1, 2}, {-2, 0, 2}, {-3, 0, 3}, {0}, {0}};
  std::size_t segment6_dim = 512;
  std::size_t segment7_dim = 512;
  std::size_t num_classes = 10;

  /// The full-size embedding network.
  static NetworkConfig Standard(std::size_t num_classes);
  /// Same topology, tiny widths; for tests and desk-scale experiments.
  static NetworkConfig Tiny(std::size_t num_classes, std::size_t width = 8,
                            std::size_t pool_width = 12);
  /// "net.size" = standard|tiny plus optional "net.*" width overrides.
  static NetworkConfig FromConfig(const KeyValueConfig &config,
                                  std::size_t num_classes);

  /// frame1..frame5, stats pooling, segment6, segment7, softmax.
  std::vector<LayerShape> Layers() const;
  /// Frames of input consumed by one output of the last frame layer.
  std::size_t ReceptiveField() const;
  void Validate() const;
};

struct AffineLayer {
  LayerShape profile;
  Matrix weight;              // out_dim x in_dim
  std::vector<double> bias;   // out_dim
};

class NetworkParams {
 public:
  NetworkParams() = default;
  explicit NetworkParams(const NetworkConfig &config);

  const NetworkConfig &config() const { return config_; }
  std::size_t num_classes() const { return config_.num_classes; }

  /// Affine layers in order: frame1..frame5, segment6, segment7, softmax.
  std::vector<AffineLayer> &layers() { return layers_; }
  const std::vector<AffineLayer> &layers() const { return layers_; }
  std::size_t num_frame_layers() const { return config_.frame_dims.size(); }
  AffineLayer &segment6() { return layers_[num_frame_layers()]; }
  const AffineLayer &segment6() const { return layers_[num_frame_layers()]; }
  AffineLayer &segment7() { return layers_[num_frame_layers() + 1]; }
  const AffineLayer &segment7() const { return layers_[num_frame_layers() + 1]; }
  AffineLayer &output() { return layers_.back(); }
  const AffineLayer &output() const { return layers_.back(); }

  std::size_t ParameterCount() const;
  /// Parameters of the embedding part: everything but segment7 and softmax.
  std::size_t EmbeddingParameterCount() const;

  bool AllFinite() const;
  bool operator==(const NetworkParams &other) const;

 private:
  NetworkConfig config_;
  std::vector<AffineLayer> layers_;
};

/// Weights ~ N(0, 1/in_dim) from a seeded generator; biases zero.
NetworkParams InitNetwork(const NetworkConfig &config, uint64_t seed);

struct ForwardCache {
  std::vector<Matrix> frame_outputs;  // after the rectifier, one per layer
  std::vector<double> pooled;         // [mean; std]
  std::vector<double> segment6_affine;
  std::vector<double> segment6_out;
  std::vector<double> segment7_out;
  std::vector<double> logits;
};

struct ForwardResult {
  std::vector<double> posteriors;
  std::vector<double> log_posteriors;
  ForwardCache cache;
};

/// Needs at least ReceptiveField() frames; throws kTooFewFrames otherwise.
ForwardResult Forward(const NetworkParams &params, const FeatureMatrix &features);

struct XVector {
  std::vector<double> values;
  std::string source_segment;
};

/// The segment6 affine output, taken before its rectifier.
XVector ExtractXVector(const NetworkParams &params, const FeatureMatrix &features,
                       const std::string &segment_id = {});

struct Gradients {
  std::vector<Matrix> weight;
  std::vector<std::vector<double>> bias;

  static Gradients ZerosLike(const NetworkParams &params);
  void Add(const Gradients &other);
  void Scale(double factor);
};

struct LabeledFeatures {
  const FeatureMatrix *features = nullptr;
  int label = 0;
};

/// Mean cross-entropy over the batch and its gradient. Per-example
/// gradients are computed in parallel and summed in batch order.
double ComputeGradients(const NetworkParams &params,
                        const std::vector<LabeledFeatures> &batch,
                        Gradients *grads);

struct TrainConfig {
  double learn_rate = 0.01;
  std::size_t batch_size = 16;
  std::size_t epochs = 10;
  std::size_t chunk_frames = 0;  // random crop length per example; 0 = whole
  uint64_t seed = 1;

  static TrainConfig FromConfig(const KeyValueConfig &config);
};

/// One SGD update in place; returns the batch loss before the update.
/// Throws kNonFiniteLoss when the loss diverges.
double TrainStep(NetworkParams *params, const std::vector<LabeledFeatures> &batch,
                 double learn_rate);

using StepLogger = std::function<void(std::size_t step, double loss)>;

/// Shuffled minibatch SGD over `data` for config.epochs epochs. Returns the
/// per-step losses.
std::vector<double> Train(NetworkParams *params,
                          const std::vector<LabeledFeatures> &data,
                          const TrainConfig &config,
                          const StepLogger &log = nullptr);

/// Versioned little-endian model file.
void SaveParams(std::ostream &os, const NetworkParams &params);
/// Throws kCorruptModel on a malformed stream and kDimMismatch when
/// `expected_classes` is given and differs from the stored value.
NetworkParams LoadParams(std::istream &is,
                         std::optional<std::size_t> expected_classes = std::nullopt);

void SaveParamsFile(const std::string &path, const NetworkParams &params);
NetworkParams LoadParamsFile(const std::string &path,
                             std::optional<std::size_t> expected_classes = std::nullopt);

}  // namespace olr

#endif  // OLR_NET_H_
