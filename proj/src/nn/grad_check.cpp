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

#include "privkit/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "privkit/rng.hpp"

namespace privkit::nn {

namespace {

constexpr index kMaxParams = 5000;

double rel_error(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-3});
}

// Deterministically samples up to `cap` coordinates of a tensor.
std::vector<index> sample_coords(index size, int cap, Rng rng) {
  std::vector<index> coords;
  if (size <= cap) {
    coords.resize(static_cast<std::size_t>(size));
    for (index i = 0; i < size; ++i) coords[static_cast<std::size_t>(i)] = i;
    return coords;
  }
  for (int i = 0; i < cap; ++i) {
    coords.push_back(static_cast<index>(rng.below(static_cast<std::size_t>(size))));
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  return coords;
}

}  // namespace

GradCheckResult grad_check(const NetworkSpec& spec, std::uint64_t seed,
                           double eps, int max_coords_per_tensor) {
  ModelParams params = xavier_init(spec, seed);
  if (params.param_count() > kMaxParams) {
    throw ConfigError("grad_check: net too large (param cap 5000)");
  }
  Rng root(seed);
  Rng rin = root.substream("gc-input");
  Rng rlabel = root.substream("gc-labels");
  Rng rsample = root.substream("gc-sample");

  const index B = 4;
  std::vector<index> batch_dims{B};
  batch_dims.insert(batch_dims.end(), spec.input.begin(), spec.input.end());
  Tensor batch(batch_dims);
  for (index i = 0; i < batch.size(); ++i) batch[i] = rin.uniform(-1.0, 1.0);

  const index classes = spec.output_size();
  std::vector<int> labels(static_cast<std::size_t>(B));
  for (auto& l : labels) {
    l = static_cast<int>(rlabel.below(static_cast<std::size_t>(classes)));
  }

  Cache cache;
  const Tensor logits = forward(spec, params, batch, &cache);
  const CeLoss ce = loss_ce(logits, labels);
  const BackwardResult analytic = backward(spec, params, cache, ce.dlogits);

  auto loss_and_sig = [&](double* sig_out) {
    Cache c;
    const Tensor lg = forward(spec, params, batch, &c);
    *sig_out = static_cast<double>(c.signature);
    return loss_ce(lg, labels).loss;
  };

  GradCheckResult result;
  auto check_coord = [&](double& value, double analytic_grad) {
    const double saved = value;
    double sig_plus = 0.0, sig_minus = 0.0;
    value = saved + eps;
    const double lp = loss_and_sig(&sig_plus);
    value = saved - eps;
    const double lm = loss_and_sig(&sig_minus);
    value = saved;
    if (sig_plus != sig_minus) {
      ++result.skipped;  // straddles a kink; the difference quotient lies
      return;
    }
    const double numeric = (lp - lm) / (2.0 * eps);
    result.max_rel_error =
        std::max(result.max_rel_error, rel_error(analytic_grad, numeric));
    ++result.checked;
  };

  for (std::size_t li = 0; li < params.layers.size(); ++li) {
    auto& lp = params.layers[li];
    const auto& gl = analytic.grads.layers[li];
    for (const index j :
         sample_coords(lp.W.size(), max_coords_per_tensor, rsample)) {
      check_coord(lp.W[j], gl.W[j]);
    }
    for (const index j :
         sample_coords(lp.b.size(), max_coords_per_tensor, rsample)) {
      check_coord(lp.b[j], gl.b[j]);
    }
  }
  for (const index j :
       sample_coords(batch.size(), max_coords_per_tensor, rsample)) {
    check_coord(batch[j], analytic.input_grad[j]);
  }
  return result;
}

}  // namespace privkit::nn
