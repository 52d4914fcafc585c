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

#include "privkit/nn/optimizer.hpp"

#include <cmath>

namespace privkit::nn {

OptimState OptimState::make(const NetworkSpec& spec, OptimConfig cfg) {
  OptimState s;
  s.cfg = cfg;
  s.velocity = zero_params(spec);
  if (cfg.adam) s.second = zero_params(spec);
  return s;
}

namespace {

template <typename Fn>
void for_each_tensor(ModelParams& p, Fn&& fn) {
  for (auto& l : p.layers) {
    fn(l.W);
    fn(l.b);
  }
}

}  // namespace

void opt_step(ModelParams& params, const ModelParams& grads, OptimState& state,
              Direction direction) {
  if (!params.same_shapes(grads) || !params.same_shapes(state.velocity)) {
    throw DimensionError("opt_step: shape mismatch");
  }
  const OptimConfig& cfg = state.cfg;
  const double sign = direction == Direction::kAscend ? -1.0 : 1.0;

  double scale = 1.0;
  if (cfg.clip_norm > 0.0) {
    const double norm = std::sqrt(grads.grad_sq_norm());
    if (norm > cfg.clip_norm) scale = cfg.clip_norm / norm;
  }

  ++state.step;
  for (std::size_t li = 0; li < params.layers.size(); ++li) {
    auto apply = [&](Tensor& w, const Tensor& g, Tensor& vel, Tensor* sec) {
      for (index j = 0; j < w.size(); ++j) {
        const double gj = sign * scale * g[j];
        if (cfg.adam) {
          double& m = vel[j];
          double& v = (*sec)[j];
          m = cfg.beta1 * m + (1.0 - cfg.beta1) * gj;
          v = cfg.beta2 * v + (1.0 - cfg.beta2) * gj * gj;
          const double mhat =
              m / (1.0 - std::pow(cfg.beta1, static_cast<double>(state.step)));
          const double vhat =
              v / (1.0 - std::pow(cfg.beta2, static_cast<double>(state.step)));
          w[j] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
        } else {
          double& v = vel[j];
          v = cfg.momentum * v + gj;
          w[j] -= cfg.lr * v;
        }
      }
    };
    auto& pl = params.layers[li];
    const auto& gl = grads.layers[li];
    auto& vl = state.velocity.layers[li];
    Tensor* secW = cfg.adam ? &state.second.layers[li].W : nullptr;
    Tensor* secB = cfg.adam ? &state.second.layers[li].b : nullptr;
    apply(pl.W, gl.W, vl.W, secW);
    apply(pl.b, gl.b, vl.b, secB);
  }
}

}  // namespace privkit::nn
