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

#include "privkit/nn/network.hpp"

namespace privkit::nn {

struct GradCheckResult {
  double max_rel_error = 0.0;
  int checked = 0;
  int skipped = 0;  // coordinates straddling a relu/maxpool kink
};

/// Central finite differences against backward on random inputs and labels.
/// Coordinates whose +-eps evaluations land on different smooth pieces
/// (detected via the discrete forward signature) are skipped, never scored.
/// Checks both parameter and input gradients. Guarded to small nets.
GradCheckResult grad_check(const NetworkSpec& spec, std::uint64_t seed,
                           double eps = 1e-5, int max_coords_per_tensor = 200);

}  // namespace privkit::nn
