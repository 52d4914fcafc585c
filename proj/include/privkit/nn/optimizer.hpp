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

#include "privkit/nn/network.hpp"

namespace privkit::nn {

enum class Direction { kDescend, kAscend };

/// SGD with momentum is the default; Adam sits behind the `adam` switch.
struct OptimConfig {
  double lr = 0.05;
  double momentum = 0.9;
  double clip_norm = 5.0;  // global gradient-norm clip; <= 0 disables
  bool adam = false;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct OptimState {
  OptimConfig cfg;
  ModelParams velocity;  // momentum buffer (first moment for Adam)
  ModelParams second;    // second moment (Adam only)
  long step = 0;

  static OptimState make(const NetworkSpec& spec, OptimConfig cfg);
};

/// One update against (descend) or along (ascend) the gradient. Gradients are
/// globally norm-clipped first. Ascending is exactly descending on the
/// negated gradient.
void opt_step(ModelParams& params, const ModelParams& grads, OptimState& state,
              Direction direction);

}  // namespace privkit::nn
