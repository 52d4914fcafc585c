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

#include "privkit/nn/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "privkit/rng.hpp"

namespace privkit::nn {

LayerSpec LayerSpec::conv2d(int filters, int kernel, int stride,
                            Padding padding) {
  LayerSpec s;
  s.kind = LayerKind::kConv2d;
  s.filters = filters;
  s.kernel = kernel;
  s.stride = stride;
  s.padding = padding;
  return s;
}

LayerSpec LayerSpec::relu() {
  LayerSpec s;
  s.kind = LayerKind::kRelu;
  return s;
}

LayerSpec LayerSpec::maxpool(int window, int stride) {
  LayerSpec s;
  s.kind = LayerKind::kMaxPool;
  s.window = window;
  s.pool_stride = stride > 0 ? stride : window;
  return s;
}

LayerSpec LayerSpec::dense(int out_dim) {
  LayerSpec s;
  s.kind = LayerKind::kDense;
  s.out_dim = out_dim;
  return s;
}

LayerSpec LayerSpec::flatten() {
  LayerSpec s;
  s.kind = LayerKind::kFlatten;
  return s;
}

std::string LayerSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case LayerKind::kConv2d:
      os << "conv2d(f=" << filters << ",k=" << kernel << ",s=" << stride
         << ",p=" << (padding == Padding::kSame ? "same" : "valid") << ")";
      break;
    case LayerKind::kRelu:
      os << "relu";
      break;
    case LayerKind::kMaxPool:
      os << "maxpool(w=" << window << ",s=" << pool_stride << ")";
      break;
    case LayerKind::kDense:
      os << "dense(" << out_dim << ")";
      break;
    case LayerKind::kFlatten:
      os << "flatten";
      break;
  }
  return os.str();
}

namespace {

struct ConvGeometry {
  index oh = 0, ow = 0;
  index pad_top = 0, pad_left = 0;
};

ConvGeometry conv_geometry(index h, index w, const LayerSpec& l) {
  ConvGeometry g;
  const index k = l.kernel;
  const index s = l.stride;
  if (l.padding == Padding::kSame) {
    g.oh = (h + s - 1) / s;
    g.ow = (w + s - 1) / s;
    const index pad_h = std::max<index>(0, (g.oh - 1) * s + k - h);
    const index pad_w = std::max<index>(0, (g.ow - 1) * s + k - w);
    g.pad_top = pad_h / 2;
    g.pad_left = pad_w / 2;
  } else {
    if (k > h || k > w) {
      throw DimensionError("conv2d: kernel exceeds input with valid padding");
    }
    g.oh = (h - k) / s + 1;
    g.ow = (w - k) / s + 1;
  }
  return g;
}

Shape infer_shape(const Shape& in, const LayerSpec& l) {
  switch (l.kind) {
    case LayerKind::kConv2d: {
      if (in.size() != 3) throw DimensionError("conv2d needs an image input");
      if (l.kernel < 1 || l.filters < 1 || l.stride < 1) {
        throw ConfigError("conv2d: bad geometry");
      }
      if (l.padding == Padding::kSame && l.kernel > in[0] + l.kernel - 1) {
        throw DimensionError("conv2d: kernel exceeds padded input");
      }
      const auto g = conv_geometry(in[0], in[1], l);
      return {g.oh, g.ow, l.filters};
    }
    case LayerKind::kRelu:
      return in;
    case LayerKind::kMaxPool: {
      if (in.size() != 3) throw DimensionError("maxpool needs an image input");
      if (l.window < 1 || l.pool_stride < 1) {
        throw ConfigError("maxpool: bad geometry");
      }
      if (l.window > in[0] || l.window > in[1]) {
        throw DimensionError("maxpool: window exceeds input");
      }
      return {(in[0] - l.window) / l.pool_stride + 1,
              (in[1] - l.window) / l.pool_stride + 1, in[2]};
    }
    case LayerKind::kDense: {
      if (in.size() != 1) {
        throw DimensionError("dense needs a flat input (insert flatten)");
      }
      if (l.out_dim < 1) throw ConfigError("dense: out_dim must be >= 1");
      return {l.out_dim};
    }
    case LayerKind::kFlatten: {
      index total = 1;
      for (const index d : in) total *= d;
      return {total};
    }
  }
  throw ConfigError("unknown layer kind");
}

index shape_size(const Shape& s) {
  index total = 1;
  for (const index d : s) total *= d;
  return total;
}

}  // namespace

NetworkSpec NetworkSpec::make(Shape input, std::vector<LayerSpec> layers) {
  if (input.empty()) throw DimensionError("NetworkSpec: empty input shape");
  for (const index d : input) {
    if (d < 1) throw DimensionError("NetworkSpec: non-positive input dim");
  }
  NetworkSpec spec;
  spec.input = std::move(input);
  spec.layers = std::move(layers);
  Shape cur = spec.input;
  for (const auto& l : spec.layers) {
    cur = infer_shape(cur, l);
    spec.output_shapes.push_back(cur);
  }
  return spec;
}

const Shape& NetworkSpec::output_shape() const {
  return output_shapes.empty() ? input : output_shapes.back();
}

index NetworkSpec::output_size() const { return shape_size(output_shape()); }

index NetworkSpec::input_size() const { return shape_size(input); }

std::string NetworkSpec::describe() const {
  std::ostringstream os;
  os << "input:";
  for (std::size_t i = 0; i < input.size(); ++i) {
    os << (i ? "x" : "") << input[i];
  }
  for (const auto& l : layers) os << "|" << l.describe();
  return os.str();
}

std::uint64_t NetworkSpec::hash() const { return Rng::fnv1a(describe()); }

index ModelParams::param_count() const {
  index n = 0;
  for (const auto& l : layers) n += l.W.size() + l.b.size();
  return n;
}

double ModelParams::delta_norm(const ModelParams& a, const ModelParams& b) {
  if (a.layers.size() != b.layers.size()) {
    throw DimensionError("delta_norm: layer count mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    const auto& la = a.layers[i];
    const auto& lb = b.layers[i];
    if (!la.W.same_dims(lb.W) || !la.b.same_dims(lb.b)) {
      throw DimensionError("delta_norm: shape mismatch");
    }
    for (index j = 0; j < la.W.size(); ++j) {
      const double d = la.W[j] - lb.W[j];
      s += d * d;
    }
    for (index j = 0; j < la.b.size(); ++j) {
      const double d = la.b[j] - lb.b[j];
      s += d * d;
    }
  }
  return std::sqrt(s);
}

double ModelParams::grad_sq_norm() const {
  double s = 0.0;
  for (const auto& l : layers) {
    s += l.W.squared_norm() + l.b.squared_norm();
  }
  return s;
}

bool ModelParams::same_shapes(const ModelParams& other) const {
  if (layers.size() != other.layers.size()) return false;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (!layers[i].W.same_dims(other.layers[i].W)) return false;
    if (!layers[i].b.same_dims(other.layers[i].b)) return false;
  }
  return true;
}

namespace {

struct Fans {
  index fan_in = 0, fan_out = 0;
};

std::vector<index> weight_dims(const NetworkSpec& spec, std::size_t li,
                               Fans* fans) {
  const auto& l = spec.layers[li];
  const Shape& in = li == 0 ? spec.input : spec.output_shapes[li - 1];
  if (l.kind == LayerKind::kConv2d) {
    const index cin = in[2];
    fans->fan_in = static_cast<index>(l.kernel) * l.kernel * cin;
    fans->fan_out = static_cast<index>(l.kernel) * l.kernel * l.filters;
    return {l.kernel, l.kernel, cin, l.filters};
  }
  if (l.kind == LayerKind::kDense) {
    fans->fan_in = in[0];
    fans->fan_out = l.out_dim;
    return {in[0], l.out_dim};
  }
  return {};
}

}  // namespace

ModelParams zero_params(const NetworkSpec& spec) {
  ModelParams p;
  p.layers.resize(spec.layers.size());
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    Fans fans;
    const auto wdims = weight_dims(spec, i, &fans);
    if (!wdims.empty()) {
      p.layers[i].W = Tensor(wdims);
      p.layers[i].b = Tensor({wdims.back()});
    }
  }
  return p;
}

ModelParams xavier_init(const NetworkSpec& spec, std::uint64_t seed) {
  ModelParams p = zero_params(spec);
  Rng rng = Rng(seed).substream("xavier");
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    Fans fans;
    const auto wdims = weight_dims(spec, i, &fans);
    if (wdims.empty()) continue;
    const double bound =
        std::sqrt(6.0 / static_cast<double>(fans.fan_in + fans.fan_out));
    Tensor& W = p.layers[i].W;
    for (index j = 0; j < W.size(); ++j) W[j] = rng.uniform(-bound, bound);
    // biases stay zero
  }
  return p;
}

namespace {

void fold(std::uint64_t& h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

Tensor conv_forward(const LayerSpec& l, const Shape& in_shape,
                    const ModelParams::LayerParams& p, const Tensor& x,
                    Tensor* cols_out) {
  const index B = x.dim(0);
  const index h = in_shape[0], w = in_shape[1], cin = in_shape[2];
  const auto g = conv_geometry(h, w, l);
  const index k = l.kernel, s = l.stride;
  const index patch = k * k * cin;

  Tensor cols({B * g.oh * g.ow, patch});
  double* cp = cols.data();
  const double* xp = x.data();
  for (index b = 0; b < B; ++b) {
    const double* img = xp + b * h * w * cin;
    for (index oy = 0; oy < g.oh; ++oy) {
      for (index ox = 0; ox < g.ow; ++ox) {
        double* row = cp + ((b * g.oh + oy) * g.ow + ox) * patch;
        for (index ky = 0; ky < k; ++ky) {
          const index iy = oy * s - g.pad_top + ky;
          for (index kx = 0; kx < k; ++kx) {
            const index ix = ox * s - g.pad_left + kx;
            double* dst = row + (ky * k + kx) * cin;
            if (iy >= 0 && iy < h && ix >= 0 && ix < w) {
              const double* src = img + (iy * w + ix) * cin;
              std::copy_n(src, cin, dst);
            } else {
              std::fill_n(dst, cin, 0.0);
            }
          }
        }
      }
    }
  }

  Tensor out({B, g.oh, g.ow, l.filters});
  auto out_mat = as_matrix(out, B * g.oh * g.ow, l.filters);
  out_mat.noalias() =
      as_matrix(cols, B * g.oh * g.ow, patch) *
      as_matrix(p.W, patch, l.filters);
  out_mat.rowwise() +=
      Eigen::Map<const Eigen::RowVectorXd>(p.b.data(), l.filters);
  if (cols_out) *cols_out = std::move(cols);
  return out;
}

void conv_backward(const LayerSpec& l, const Shape& in_shape,
                   const ModelParams::LayerParams& p, const Tensor& cols,
                   const Tensor& dout, index B,
                   ModelParams::LayerParams* grads, Tensor* dx) {
  const index h = in_shape[0], w = in_shape[1], cin = in_shape[2];
  const auto g = conv_geometry(h, w, l);
  const index k = l.kernel, s = l.stride;
  const index patch = k * k * cin;
  const index rows = B * g.oh * g.ow;

  const auto dmat = as_matrix(dout, rows, l.filters);
  auto dW = as_matrix(grads->W, patch, l.filters);
  dW.noalias() = as_matrix(cols, rows, patch).transpose() * dmat;
  Eigen::Map<Eigen::RowVectorXd>(grads->b.data(), l.filters) =
      dmat.colwise().sum();

  RowMat dcols = dmat * as_matrix(p.W, patch, l.filters)
                            .transpose();  // rows x patch

  *dx = Tensor({B, h, w, cin});
  double* dxp = dx->data();
  for (index b = 0; b < B; ++b) {
    double* img = dxp + b * h * w * cin;
    for (index oy = 0; oy < g.oh; ++oy) {
      for (index ox = 0; ox < g.ow; ++ox) {
        const double* row = dcols.data() + ((b * g.oh + oy) * g.ow + ox) * patch;
        for (index ky = 0; ky < k; ++ky) {
          const index iy = oy * s - g.pad_top + ky;
          if (iy < 0 || iy >= h) continue;
          for (index kx = 0; kx < k; ++kx) {
            const index ix = ox * s - g.pad_left + kx;
            if (ix < 0 || ix >= w) continue;
            const double* src = row + (ky * k + kx) * cin;
            double* dst = img + (iy * w + ix) * cin;
            for (index c = 0; c < cin; ++c) dst[c] += src[c];
          }
        }
      }
    }
  }
}

Tensor maxpool_forward(const LayerSpec& l, const Shape& in_shape,
                       const Tensor& x, std::vector<index>* argmax,
                       std::uint64_t* sig) {
  const index B = x.dim(0);
  const index h = in_shape[0], w = in_shape[1], c = in_shape[2];
  const index oh = (h - l.window) / l.pool_stride + 1;
  const index ow = (w - l.window) / l.pool_stride + 1;
  Tensor out({B, oh, ow, c});
  argmax->assign(static_cast<std::size_t>(out.size()), -1);
  const double* xp = x.data();
  double* op = out.data();
  index oi = 0;
  for (index b = 0; b < B; ++b) {
    for (index oy = 0; oy < oh; ++oy) {
      for (index ox = 0; ox < ow; ++ox) {
        for (index ch = 0; ch < c; ++ch, ++oi) {
          double best = -std::numeric_limits<double>::infinity();
          index best_idx = -1;
          for (index ky = 0; ky < l.window; ++ky) {
            const index iy = oy * l.pool_stride + ky;
            for (index kx = 0; kx < l.window; ++kx) {
              const index ix = ox * l.pool_stride + kx;
              const index idx = ((b * h + iy) * w + ix) * c + ch;
              // strict >: first row-major max wins ties
              if (xp[idx] > best) {
                best = xp[idx];
                best_idx = idx;
              }
            }
          }
          op[oi] = best;
          (*argmax)[static_cast<std::size_t>(oi)] = best_idx;
          if (sig) fold(*sig, static_cast<std::uint64_t>(best_idx));
        }
      }
    }
  }
  return out;
}

}  // namespace

Tensor forward(const NetworkSpec& spec, const ModelParams& params,
               const Tensor& batch, Cache* cache) {
  if (batch.rank() < 2 ||
      std::vector<index>(batch.dims().begin() + 1, batch.dims().end()) !=
          spec.input) {
    throw DimensionError("forward: batch shape does not match spec input");
  }
  if (params.layers.size() != spec.layers.size()) {
    throw DimensionError("forward: params do not match spec");
  }
  const index B = batch.dim(0);
  if (cache) {
    *cache = Cache{};
    cache->spec_hash = spec.hash();
    cache->input_dims = batch.dims();
    cache->layers.resize(spec.layers.size());
    cache->signature = 0xcbf29ce484222325ULL;
  }

  Tensor cur = batch;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const auto& l = spec.layers[i];
    const Shape& in_shape = i == 0 ? spec.input : spec.output_shapes[i - 1];
    const Shape& out_shape = spec.output_shapes[i];
    Cache::Layer* lc = cache ? &cache->layers[i] : nullptr;
    switch (l.kind) {
      case LayerKind::kConv2d: {
        Tensor cols;
        Tensor out = conv_forward(l, in_shape, params.layers[i], cur,
                                  cache ? &cols : nullptr);
        if (lc) lc->cols = std::move(cols);
        cur = std::move(out);
        break;
      }
      case LayerKind::kRelu: {
        if (lc) lc->input = cur;
        Tensor out = cur;
        double* p = out.data();
        for (index j = 0; j < out.size(); ++j) {
          if (p[j] < 0.0) p[j] = 0.0;
          if (cache) fold(cache->signature, p[j] > 0.0 ? 1u : 0u);
        }
        cur = std::move(out);
        break;
      }
      case LayerKind::kMaxPool: {
        std::vector<index> argmax;
        Tensor out = maxpool_forward(l, in_shape, cur, &argmax,
                                     cache ? &cache->signature : nullptr);
        if (lc) lc->argmax = std::move(argmax);
        cur = std::move(out);
        break;
      }
      case LayerKind::kDense: {
        if (lc) lc->input = cur;
        const index fin = in_shape[0], fout = l.out_dim;
        Tensor out({B, fout});
        auto om = as_matrix(out, B, fout);
        om.noalias() =
            as_matrix(cur, B, fin) *
            as_matrix(params.layers[i].W, fin, fout);
        om.rowwise() +=
            Eigen::Map<const Eigen::RowVectorXd>(params.layers[i].b.data(),
                                                 fout);
        cur = std::move(out);
        break;
      }
      case LayerKind::kFlatten: {
        if (lc) lc->input_dims = cur.dims();
        std::vector<index> nd{B, shape_size(out_shape)};
        cur = cur.reshaped(std::move(nd));
        break;
      }
    }
  }
  return cur;
}

CeLoss loss_ce(const Tensor& logits, std::span<const int> labels) {
  if (logits.rank() != 2) throw DimensionError("loss_ce: logits must be 2-d");
  const index B = logits.dim(0);
  const index k = logits.dim(1);
  if (static_cast<index>(labels.size()) != B) {
    throw DimensionError("loss_ce: labels size != batch");
  }
  CeLoss out;
  out.dlogits = Tensor({B, k});
  const double* lp = logits.data();
  double* dp = out.dlogits.data();
  double total = 0.0;
  for (index i = 0; i < B; ++i) {
    const int label = labels[static_cast<std::size_t>(i)];
    if (label < 0 || label >= k) throw DimensionError("loss_ce: bad label");
    const double* row = lp + i * k;
    double mx = row[0];
    for (index j = 1; j < k; ++j) mx = std::max(mx, row[j]);
    double sum = 0.0;
    for (index j = 0; j < k; ++j) sum += std::exp(row[j] - mx);
    const double logsum = std::log(sum) + mx;
    total += logsum - row[label];
    for (index j = 0; j < k; ++j) {
      const double p = std::exp(row[j] - logsum);
      dp[i * k + j] = (p - (j == label ? 1.0 : 0.0)) / static_cast<double>(B);
    }
  }
  out.loss = total / static_cast<double>(B);
  return out;
}

Tensor softmax(const Tensor& logits) {
  if (logits.rank() != 2) throw DimensionError("softmax: logits must be 2-d");
  Tensor out = logits;
  const index B = out.dim(0), k = out.dim(1);
  double* p = out.data();
  for (index i = 0; i < B; ++i) {
    double* row = p + i * k;
    double mx = row[0];
    for (index j = 1; j < k; ++j) mx = std::max(mx, row[j]);
    double sum = 0.0;
    for (index j = 0; j < k; ++j) {
      row[j] = std::exp(row[j] - mx);
      sum += row[j];
    }
    for (index j = 0; j < k; ++j) row[j] /= sum;
  }
  return out;
}

double accuracy(const Tensor& logits, std::span<const int> labels) {
  const index B = logits.dim(0), k = logits.dim(1);
  if (static_cast<index>(labels.size()) != B) {
    throw DimensionError("accuracy: labels size != batch");
  }
  index hits = 0;
  const double* p = logits.data();
  for (index i = 0; i < B; ++i) {
    const double* row = p + i * k;
    index arg = 0;
    for (index j = 1; j < k; ++j) {
      if (row[j] > row[arg]) arg = j;
    }
    if (arg == labels[static_cast<std::size_t>(i)]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(B);
}

BackwardResult backward(const NetworkSpec& spec, const ModelParams& params,
                        const Cache& cache, const Tensor& dlogits) {
  if (cache.spec_hash != spec.hash() ||
      cache.layers.size() != spec.layers.size()) {
    throw ConfigError("backward: stale or mismatched cache");
  }
  const index B = cache.input_dims.at(0);
  BackwardResult out;
  out.grads = zero_params(spec);

  Tensor grad = dlogits;
  for (std::size_t ri = spec.layers.size(); ri-- > 0;) {
    const auto& l = spec.layers[ri];
    const Shape& in_shape = ri == 0 ? spec.input : spec.output_shapes[ri - 1];
    const Cache::Layer& lc = cache.layers[ri];
    switch (l.kind) {
      case LayerKind::kConv2d: {
        Tensor dx;
        conv_backward(l, in_shape, params.layers[ri], lc.cols, grad, B,
                      &out.grads.layers[ri], &dx);
        grad = std::move(dx);
        break;
      }
      case LayerKind::kRelu: {
        Tensor dx = grad;
        const double* xin = lc.input.data();
        double* g = dx.data();
        for (index j = 0; j < dx.size(); ++j) {
          if (xin[j] <= 0.0) g[j] = 0.0;
        }
        grad = std::move(dx);
        break;
      }
      case LayerKind::kMaxPool: {
        Tensor dx({B, in_shape[0], in_shape[1], in_shape[2]});
        double* dst = dx.data();
        const double* src = grad.data();
        for (index j = 0; j < grad.size(); ++j) {
          dst[lc.argmax[static_cast<std::size_t>(j)]] += src[j];
        }
        grad = std::move(dx);
        break;
      }
      case LayerKind::kDense: {
        const index fin = in_shape[0], fout = l.out_dim;
        const auto gm = as_matrix(grad, B, fout);
        auto& gl = out.grads.layers[ri];
        as_matrix(gl.W, fin, fout).noalias() =
            as_matrix(lc.input, B, fin).transpose() * gm;
        Eigen::Map<Eigen::RowVectorXd>(gl.b.data(), fout) = gm.colwise().sum();
        Tensor dx({B, fin});
        as_matrix(dx, B, fin).noalias() =
            gm * as_matrix(params.layers[ri].W, fin, fout).transpose();
        grad = std::move(dx);
        break;
      }
      case LayerKind::kFlatten: {
        grad = grad.reshaped(lc.input_dims);
        break;
      }
    }
  }
  out.input_grad = std::move(grad);
  return out;
}

NetworkSpec adversary_preset(int size, int channels, int classes) {
  return NetworkSpec::make(
      {size, size, channels},
      {LayerSpec::conv2d(4, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
       LayerSpec::conv2d(8, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
       LayerSpec::flatten(), LayerSpec::dense(32), LayerSpec::relu(),
       LayerSpec::dense(classes)});
}

NetworkSpec protected_preset(int size, int channels, int classes) {
  return NetworkSpec::make(
      {size, size, channels},
      {LayerSpec::conv2d(6, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
       LayerSpec::conv2d(12, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
       LayerSpec::flatten(), LayerSpec::dense(32), LayerSpec::relu(),
       LayerSpec::dense(classes)});
}

NetworkSpec encoder_preset(int size, int channels, int feature_dim) {
  return NetworkSpec::make(
      {size, size, channels},
      {LayerSpec::conv2d(4, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
       LayerSpec::conv2d(8, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
       LayerSpec::flatten(), LayerSpec::dense(feature_dim), LayerSpec::relu()});
}

NetworkSpec decoder_preset(int feature_dim, int size, int channels) {
  return NetworkSpec::make(
      {static_cast<index>(feature_dim)},
      {LayerSpec::dense(size * size * channels)});
}

NetworkSpec genki_adversary_preset(int size, int channels, int classes) {
  // two conv layers of sixteen 7x7 filters, each max-pooled, then fc 128
  return NetworkSpec::make(
      {size, size, channels},
      {LayerSpec::conv2d(16, 7), LayerSpec::relu(), LayerSpec::maxpool(2),
       LayerSpec::conv2d(16, 7), LayerSpec::relu(), LayerSpec::maxpool(2),
       LayerSpec::flatten(), LayerSpec::dense(128), LayerSpec::relu(),
       LayerSpec::dense(classes)});
}

NetworkSpec hands_adversary_preset(int size, int channels, int classes) {
  // three conv layers: two 3x3, four 4x4, eight 3x3, each max-pooled; fc 32
  return NetworkSpec::make(
      {size, size, channels},
      {LayerSpec::conv2d(2, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
       LayerSpec::conv2d(4, 4), LayerSpec::relu(), LayerSpec::maxpool(2),
       LayerSpec::conv2d(8, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
       LayerSpec::flatten(), LayerSpec::dense(32), LayerSpec::relu(),
       LayerSpec::dense(classes)});
}

NetworkSpec hands_protected_preset(int size, int channels, int classes) {
  // four 3x3, eight 4x4, sixteen 3x3, each max-pooled; fc 64
  return NetworkSpec::make(
      {size, size, channels},
      {LayerSpec::conv2d(4, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
       LayerSpec::conv2d(8, 4), LayerSpec::relu(), LayerSpec::maxpool(2),
       LayerSpec::conv2d(16, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
       LayerSpec::flatten(), LayerSpec::dense(64), LayerSpec::relu(),
       LayerSpec::dense(classes)});
}

}  // namespace privkit::nn
