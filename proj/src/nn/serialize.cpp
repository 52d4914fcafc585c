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

#include "privkit/nn/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace privkit::nn {

namespace {

constexpr std::uint32_t kParamsMagic = 0x504b4e4e;  // "PKNN"
constexpr std::uint32_t kTensorMagic = 0x504b5446;  // "PKTF"
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian");

template <typename T>
void write_pod(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw IoError("checkpoint: truncated file");
  return v;
}

void write_tensor_body(std::ostream& out, const Tensor& t) {
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
  for (const index d : t.dims()) write_pod<std::int64_t>(out, d);
  out.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
}

Tensor read_tensor_body(std::istream& in) {
  const auto rank = read_pod<std::uint32_t>(in);
  if (rank > 8) throw IoError("checkpoint: implausible tensor rank");
  std::vector<index> dims(rank);
  for (auto& d : dims) d = read_pod<std::int64_t>(in);
  Tensor t(dims);
  in.read(reinterpret_cast<char*>(t.data()),
          static_cast<std::streamsize>(t.size() * sizeof(double)));
  if (!in) throw IoError("checkpoint: truncated tensor data");
  return t;
}

}  // namespace

void save_params(const std::filesystem::path& path, const NetworkSpec& spec,
                 const ModelParams& params) {
  if (params.layers.size() != spec.layers.size()) {
    throw DimensionError("save_params: params do not match spec");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("save_params: cannot open " + path.string());
  write_pod(out, kParamsMagic);
  write_pod(out, kVersion);
  write_pod<std::uint64_t>(out, spec.hash());
  write_pod<std::uint64_t>(out, params.layers.size());
  for (const auto& l : params.layers) {
    write_tensor_body(out, l.W);
    write_tensor_body(out, l.b);
  }
  if (!out) throw IoError("save_params: write failed for " + path.string());
}

ModelParams load_params(const std::filesystem::path& path,
                        const NetworkSpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_params: cannot open " + path.string());
  if (read_pod<std::uint32_t>(in) != kParamsMagic) {
    throw IoError("load_params: bad magic in " + path.string());
  }
  if (read_pod<std::uint32_t>(in) != kVersion) {
    throw IoError("load_params: unsupported version");
  }
  if (read_pod<std::uint64_t>(in) != spec.hash()) {
    throw IoError("load_params: checkpoint does not match network spec");
  }
  const auto count = read_pod<std::uint64_t>(in);
  if (count != spec.layers.size()) {
    throw IoError("load_params: layer count mismatch");
  }
  ModelParams expected = zero_params(spec);
  ModelParams out;
  out.layers.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.layers[i].W = read_tensor_body(in);
    out.layers[i].b = read_tensor_body(in);
    if (!out.layers[i].W.same_dims(expected.layers[i].W) ||
        !out.layers[i].b.same_dims(expected.layers[i].b)) {
      throw IoError("load_params: tensor shape mismatch at layer " +
                    std::to_string(i));
    }
  }
  return out;
}

void save_tensor(const std::filesystem::path& path, const Tensor& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("save_tensor: cannot open " + path.string());
  write_pod(out, kTensorMagic);
  write_pod(out, kVersion);
  write_tensor_body(out, t);
  if (!out) throw IoError("save_tensor: write failed for " + path.string());
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_tensor: cannot open " + path.string());
  if (read_pod<std::uint32_t>(in) != kTensorMagic) {
    throw IoError("load_tensor: bad magic in " + path.string());
  }
  if (read_pod<std::uint32_t>(in) != kVersion) {
    throw IoError("load_tensor: unsupported version");
  }
  return read_tensor_body(in);
}

}  // namespace privkit::nn
