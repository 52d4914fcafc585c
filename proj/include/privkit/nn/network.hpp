// Copyright 2026 The privkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "privkit/nn/tensor.hpp"

namespace privkit::nn {

enum class LayerKind { kConv2d, kRelu, kMaxPool, kDense, kFlatten };
enum class Padding { kSame, kValid };

/// One layer of the network vocabulary: conv2d, relu, maxpool, dense, flatten.
struct LayerSpec {
  LayerKind kind = LayerKind::kRelu;
  // conv2d
  int filters = 0;
  int kernel = 0;
  int stride = 1;
  Padding padding = Padding::kSame;
  // maxpool
  int window = 0;
  int pool_stride = 0;  // defaults to window
  // dense
  int out_dim = 0;

  static LayerSpec conv2d(int filters, int kernel, int stride = 1,
                          Padding padding = Padding::kSame);
  static LayerSpec relu();
  static LayerSpec maxpool(int window, int stride = 0);
  static LayerSpec dense(int out_dim);
  static LayerSpec flatten();

  std::string describe() const;
};

/// Per-example shape, batch dimension excluded: {h, w, c} or {features}.
using Shape = std::vector<index>;

/// Ordered layer stack with shapes resolved at construction, so a bad
/// composition fails before any parameter exists.
struct NetworkSpec {
  Shape input;
  std::vector<LayerSpec> layers;
  std::vector<Shape> output_shapes;  // one per layer

  static NetworkSpec make(Shape input, std::vector<LayerSpec> layers);

  const Shape& output_shape() const;
  index output_size() const;
  index input_size() const;
  std::string describe() const;
  std::uint64_t hash() const;
};

/// Weight and bias tensors per layer (empty for layers without parameters).
struct ModelParams {
  struct LayerParams {
    Tensor W;
    Tensor b;
  };
  std::vector<LayerParams> layers;

  index param_count() const;
  /// L2 norm of the difference, flattened across all tensors.
  static double delta_norm(const ModelParams& a, const ModelParams& b);
  double grad_sq_norm() const;
  bool same_shapes(const ModelParams& other) const;
};

/// Zero-initialized parameters with the shapes the spec requires.
ModelParams zero_params(const NetworkSpec& spec);

/// Fan-balanced uniform init: weights in +-sqrt(6/(fan_in+fan_out)), biases
/// zero. Deterministic per seed.
ModelParams xavier_init(const NetworkSpec& spec, std::uint64_t seed);

/// Intermediates retained by forward for the matching backward call.
struct Cache {
  struct Layer {
    Tensor input;               // relu / dense input activations
    Tensor cols;                // conv2d im2col matrix
    std::vector<index> argmax;  // maxpool winner per output element
    std::vector<index> input_dims;
  };
  std::uint64_t spec_hash = 0;
  std::vector<index> input_dims;
  std::vector<Layer> layers;
  /// Hash over the discrete forward state (relu masks, pool argmaxes); two
  /// evaluations with equal signatures lie on the same smooth piece.
  std::uint64_t signature = 0;
};

/// Runs the stack on a batch; first tensor dim is the batch. Pass a cache to
/// retain what backward needs.
Tensor forward(const NetworkSpec& spec, const ModelParams& params,
               const Tensor& batch, Cache* cache = nullptr);

struct CeLoss {
  double loss = 0.0;
  Tensor dlogits;
};

/// Mean softmax cross-entropy over the batch; gradient w.r.t. logits is
/// (softmax - onehot) / batch. Log stabilized by max subtraction.
CeLoss loss_ce(const Tensor& logits, std::span<const int> labels);

/// Softmax probabilities per row.
Tensor softmax(const Tensor& logits);

/// Fraction of rows whose argmax logit equals the label.
double accuracy(const Tensor& logits, std::span<const int> labels);

struct BackwardResult {
  ModelParams grads;
  Tensor input_grad;
};

/// Backpropagates dlogits through the cached forward pass, producing
/// gradients for every parameter and for the input batch. Throws on a cache
/// that does not match the spec (stale cache).
BackwardResult backward(const NetworkSpec& spec, const ModelParams& params,
                        const Cache& cache, const Tensor& dlogits);

// Named architectures used by the experiments, parameterized on input size.
NetworkSpec adversary_preset(int size, int channels, int classes);
NetworkSpec protected_preset(int size, int channels, int classes);
NetworkSpec encoder_preset(int size, int channels, int feature_dim = 32);
NetworkSpec decoder_preset(int feature_dim, int size, int channels);
/// Scaled-down analogs of the published layer stacks.
NetworkSpec genki_adversary_preset(int size, int channels, int classes);
NetworkSpec hands_adversary_preset(int size, int channels, int classes);
NetworkSpec hands_protected_preset(int size, int channels, int classes);

}  // namespace privkit::nn
