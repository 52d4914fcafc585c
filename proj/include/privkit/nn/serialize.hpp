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

#include <filesystem>

#include "privkit/nn/network.hpp"

namespace privkit::nn {

/// Flat binary checkpoint: header (magic, spec hash, layer count, tensor
/// shapes) followed by little-endian 64-bit floats in layer order.
void save_params(const std::filesystem::path& path, const NetworkSpec& spec,
                 const ModelParams& params);

/// Loads a checkpoint, validating the spec hash and every shape.
ModelParams load_params(const std::filesystem::path& path,
                        const NetworkSpec& spec);

/// Raw tensor dump in the same envelope (used for generated image batches).
void save_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor load_tensor(const std::filesystem::path& path);

}  // namespace privkit::nn
