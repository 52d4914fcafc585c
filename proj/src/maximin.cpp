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

#include "privkit/maximin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "privkit/csv.hpp"

namespace privkit {

NoiseBudget NoiseBudget::from_per_image(double d, index count) {
  if (d < 0) throw ConfigError("NoiseBudget: negative budget");
  NoiseBudget b;
  b.per_image = d;
  b.total = d * static_cast<double>(count);
  return b;
}

NoiseBudget NoiseBudget::from_total(double total, index count) {
  if (total < 0) throw ConfigError("NoiseBudget: negative budget");
  if (count < 1) throw ConfigError("NoiseBudget: empty dataset");
  NoiseBudget b;
  b.total = total;
  b.per_image = total / static_cast<double>(count);
  return b;
}

MaximinSpecs MaximinSpecs::desk_default(int size, int channels, int classes) {
  MaximinSpecs s;
  s.adversary = nn::adversary_preset(size, channels, classes);
  s.protected_net = nn::protected_preset(size, channels, classes);
  s.encoder = nn::encoder_preset(size, channels, 32);
  s.decoder = nn::decoder_preset(32, size, channels);
  return s;
}

namespace {

void fold(std::uint64_t& h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

index image_pixels(const nn::Tensor& X) {
  index p = 1;
  for (std::size_t i = 1; i < X.dims().size(); ++i) {
    p *= X.dims()[i];
  }
  return p;
}

}  // namespace

nn::Tensor privatize(const nn::Tensor& X, const PrivatizerModel& privatizer,
                     const NoiseBudget& budget, PrivatizeCache* cache) {
  const index B = X.dim(0);
  const index pix = image_pixels(X);
  if (privatizer.decoder_spec.output_size() != pix) {
    throw DimensionError("privatize: decoder output does not match image");
  }

  nn::Cache local_enc, local_dec;
  nn::Cache* ec = cache ? &cache->encoder_cache : &local_enc;
  nn::Cache* dc = cache ? &cache->decoder_cache : &local_dec;

  const nn::Tensor feats =
      nn::forward(privatizer.encoder_spec, privatizer.encoder, X, ec);
  const nn::Tensor raw_flat =
      nn::forward(privatizer.decoder_spec, privatizer.decoder, feats, dc);
  nn::Tensor raw = raw_flat.reshaped(X.dims());

  std::vector<double> raw_sq(static_cast<std::size_t>(B), 0.0);
  std::vector<double> scale(static_cast<std::size_t>(B), 1.0);
  nn::Tensor out = X;
  nn::Tensor noisy = X;
  std::uint64_t sig = ec->signature;
  fold(sig, dc->signature);

  const double d = budget.per_image;
  for (index i = 0; i < B; ++i) {
    const double* r = raw.data() + i * pix;
    double sq = 0.0;
    for (index j = 0; j < pix; ++j) sq += r[j] * r[j];
    raw_sq[static_cast<std::size_t>(i)] = sq;
    double s = 1.0;
    if (sq > d) {
      s = d > 0.0 ? std::sqrt(d / sq) : 0.0;
    }
    scale[static_cast<std::size_t>(i)] = s;
    fold(sig, s == 1.0 ? 1u : 0u);
    const double* x = X.data() + i * pix;
    double* n = noisy.data() + i * pix;
    double* o = out.data() + i * pix;
    for (index j = 0; j < pix; ++j) {
      n[j] = x[j] + s * r[j];
      o[j] = std::clamp(n[j], 0.0, 1.0);
      fold(sig, (n[j] > 0.0 && n[j] < 1.0) ? 1u : 0u);
    }
  }
  if (cache) {
    cache->raw_noise = std::move(raw);
    cache->noisy = std::move(noisy);
    cache->raw_sq = std::move(raw_sq);
    cache->scale = std::move(scale);
    cache->signature = sig;
  }
  return out;
}

PrivatizerGrads privatize_backward(const PrivatizerModel& privatizer,
                                   const PrivatizeCache& cache,
                                   const nn::Tensor& dXpriv,
                                   const NoiseBudget& budget) {
  const index B = dXpriv.dim(0);
  const index pix = image_pixels(dXpriv);
  nn::Tensor draw = dXpriv;  // becomes d(loss)/d(raw noise)

  const double d = budget.per_image;
  for (index i = 0; i < B; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    double* g = draw.data() + i * pix;
    const double* n = cache.noisy.data() + i * pix;
    // clamp: gradient passes only where the pre-clamp value stayed in (0,1)
    for (index j = 0; j < pix; ++j) {
      if (!(n[j] > 0.0 && n[j] < 1.0)) g[j] = 0.0;
    }
    const double s = cache.scale[ii];
    if (s == 1.0) continue;
    if (d <= 0.0 || cache.raw_sq[ii] <= 0.0) {
      std::fill_n(g, pix, 0.0);
      continue;
    }
    // dX = sqrt(d) * u / ||u||: pull g back through the normalization
    const double* u = cache.raw_noise.data() + i * pix;
    double dot = 0.0;
    for (index j = 0; j < pix; ++j) dot += u[j] * g[j];
    const double coef = dot / cache.raw_sq[ii];
    for (index j = 0; j < pix; ++j) g[j] = s * (g[j] - coef * u[j]);
  }

  const nn::Tensor draw_flat =
      draw.reshaped({B, privatizer.decoder_spec.output_size()});
  const nn::BackwardResult dec_back =
      nn::backward(privatizer.decoder_spec, privatizer.decoder,
                   cache.decoder_cache, draw_flat);
  const nn::BackwardResult enc_back =
      nn::backward(privatizer.encoder_spec, privatizer.encoder,
                   cache.encoder_cache, dec_back.input_grad);

  PrivatizerGrads grads;
  grads.encoder = enc_back.grads;
  grads.decoder = dec_back.grads;
  return grads;
}

BatchCursor::BatchCursor(index count, int batch_size, Rng rng)
    : batch_size_(batch_size), rng_(rng) {
  if (count < 1) throw ConfigError("BatchCursor: empty dataset");
  if (batch_size < 1) throw ConfigError("BatchCursor: bad batch size");
  order_.resize(static_cast<std::size_t>(count));
  std::iota(order_.begin(), order_.end(), index{0});
  rng_.shuffle(order_);
}

const std::vector<index>& BatchCursor::next() {
  batch_.clear();
  for (int i = 0; i < batch_size_; ++i) {
    if (pos_ == order_.size()) {
      rng_.shuffle(order_);
      pos_ = 0;
    }
    batch_.push_back(order_[pos_++]);
  }
  return batch_;
}

nn::Tensor gather_images(const nn::Tensor& images,
                         const std::vector<index>& rows) {
  const index pix = image_pixels(images);
  std::vector<index> dims = images.dims();
  dims[0] = static_cast<index>(rows.size());
  nn::Tensor out(dims);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(images.data() + rows[i] * pix, pix,
                out.data() + static_cast<index>(i) * pix);
  }
  return out;
}

std::vector<int> gather_labels(const std::vector<int>& labels,
                               const std::vector<index>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (const index r : rows) out.push_back(labels[static_cast<std::size_t>(r)]);
  return out;
}

nn::ModelParams train_classifier(const nn::NetworkSpec& spec,
                                 const nn::Tensor& images,
                                 const std::vector<int>& labels,
                                 const nn::OptimConfig& opt, int epochs,
                                 int batch_size, Rng rng,
                                 double stop_at_accuracy) {
  nn::ModelParams params = nn::xavier_init(spec, rng.substream("init").seed());
  nn::OptimState state = nn::OptimState::make(spec, opt);
  BatchCursor cursor(images.dim(0), batch_size, rng.substream("batches"));
  const index total = images.dim(0);
  const index steps_per_epoch = (total + batch_size - 1) / batch_size;

  for (int e = 0; e < epochs; ++e) {
    for (index s = 0; s < steps_per_epoch; ++s) {
      const auto& idx = cursor.next();
      const nn::Tensor xb = gather_images(images, idx);
      const std::vector<int> yb = gather_labels(labels, idx);
      nn::Cache cache;
      const nn::Tensor logits = nn::forward(spec, params, xb, &cache);
      const nn::CeLoss ce = nn::loss_ce(logits, yb);
      const nn::BackwardResult back = nn::backward(spec, params, cache, ce.dlogits);
      nn::opt_step(params, back.grads, state, nn::Direction::kDescend);
    }
    if (stop_at_accuracy <= 1.0) {
      const nn::Tensor logits = nn::forward(spec, params, images);
      if (nn::accuracy(logits, labels) >= stop_at_accuracy) break;
    }
  }
  return params;
}

nn::ModelParams pretrain_protected(const ImageDataset& train,
                                   const nn::NetworkSpec& spec,
                                   const AlternationConfig& cfg) {
  const std::string label = train.label_with_role(LabelRole::kProtected);
  nn::OptimConfig opt;
  opt.lr = cfg.lr_pro;
  opt.clip_norm = cfg.clip_norm;
  opt.adam = cfg.adam;
  const Rng rng = Rng(cfg.seed).substream("pretrain-protected");
  nn::ModelParams params =
      train_classifier(spec, train.images, train.label(label), opt,
                       cfg.pretrain_epochs, cfg.batch_size, rng,
                       cfg.pretrain_target_acc);
  if (cfg.pretrain_epochs > 0) {
    const nn::Tensor logits = nn::forward(spec, params, train.images);
    const double acc = nn::accuracy(logits, train.label(label));
    if (acc < 0.60) {
      throw NumericError("pretrain_protected: accuracy " + std::to_string(acc) +
                         " below 0.60; protected factor not learnable");
    }
  }
  return params;
}

namespace {

struct BatchLoss {
  double total = 0.0;
  int steps = 0;
  double mean() const { return steps ? total / steps : 0.0; }
};

}  // namespace

double adversary_phase(nn::ModelParams& adversary,
                       const nn::NetworkSpec& adversary_spec,
                       nn::OptimState& opt, const PrivatizerModel& privatizer,
                       const NoiseBudget& budget, const ImageDataset& data,
                       const std::string& label, int steps,
                       BatchCursor& cursor) {
  const std::vector<int>& labels = data.label(label);
  BatchLoss loss;
  for (int s = 0; s < steps; ++s) {
    const auto& idx = cursor.next();
    const nn::Tensor xb = gather_images(data.images, idx);
    const std::vector<int> yb = gather_labels(labels, idx);
    const nn::Tensor xp = privatize(xb, privatizer, budget);
    nn::Cache cache;
    const nn::Tensor logits = nn::forward(adversary_spec, adversary, xp, &cache);
    const nn::CeLoss ce = nn::loss_ce(logits, yb);
    const nn::BackwardResult back =
        nn::backward(adversary_spec, adversary, cache, ce.dlogits);
    nn::opt_step(adversary, back.grads, opt, nn::Direction::kDescend);
    loss.total += ce.loss;
    ++loss.steps;
  }
  return loss.mean();
}

namespace {

// Shared body of the two privatizer phases: push the model loss gradient
// through the privatization and step both privatizer nets.
double privatizer_phase(PrivatizerModel& privatizer, nn::OptimState& opt_enc,
                        nn::OptimState& opt_dec,
                        const nn::ModelParams& frozen_model,
                        const nn::NetworkSpec& frozen_spec,
                        const NoiseBudget& budget, const ImageDataset& data,
                        const std::string& label, int steps,
                        BatchCursor& cursor, nn::Direction direction) {
  const std::vector<int>& labels = data.label(label);
  BatchLoss loss;
  for (int s = 0; s < steps; ++s) {
    const auto& idx = cursor.next();
    const nn::Tensor xb = gather_images(data.images, idx);
    const std::vector<int> yb = gather_labels(labels, idx);
    PrivatizeCache pc;
    const nn::Tensor xp = privatize(xb, privatizer, budget, &pc);
    nn::Cache cache;
    const nn::Tensor logits = nn::forward(frozen_spec, frozen_model, xp, &cache);
    const nn::CeLoss ce = nn::loss_ce(logits, yb);
    const nn::BackwardResult back =
        nn::backward(frozen_spec, frozen_model, cache, ce.dlogits);
    const PrivatizerGrads grads =
        privatize_backward(privatizer, pc, back.input_grad, budget);
    nn::opt_step(privatizer.encoder, grads.encoder, opt_enc, direction);
    nn::opt_step(privatizer.decoder, grads.decoder, opt_dec, direction);
    loss.total += ce.loss;
    ++loss.steps;
  }
  return loss.mean();
}

}  // namespace

double privatizer_max_phase(PrivatizerModel& privatizer,
                            nn::OptimState& opt_enc, nn::OptimState& opt_dec,
                            const nn::ModelParams& adversary,
                            const nn::NetworkSpec& adversary_spec,
                            const NoiseBudget& budget, const ImageDataset& data,
                            const std::string& label, int steps,
                            BatchCursor& cursor) {
  return privatizer_phase(privatizer, opt_enc, opt_dec, adversary,
                          adversary_spec, budget, data, label, steps, cursor,
                          nn::Direction::kAscend);
}

double privatizer_protect_phase(PrivatizerModel& privatizer,
                                nn::OptimState& opt_enc,
                                nn::OptimState& opt_dec,
                                const nn::ModelParams& protected_params,
                                const nn::NetworkSpec& protected_spec,
                                const NoiseBudget& budget,
                                const ImageDataset& data,
                                const std::string& label, int steps,
                                BatchCursor& cursor) {
  return privatizer_phase(privatizer, opt_enc, opt_dec, protected_params,
                          protected_spec, budget, data, label, steps, cursor,
                          nn::Direction::kDescend);
}

namespace {

struct FullSetEval {
  double loss = 0.0;
  double noise_mean_sq = 0.0;
  double noise_max_sq = 0.0;
};

FullSetEval eval_on_privatized(const nn::NetworkSpec& spec,
                               const nn::ModelParams& params,
                               const PrivatizerModel& privatizer,
                               const NoiseBudget& budget,
                               const nn::Tensor& images,
                               const std::vector<int>& labels) {
  const nn::Tensor xp = privatize(images, privatizer, budget);
  const index B = images.dim(0);
  const index pix = image_pixels(images);
  FullSetEval out;
  for (index i = 0; i < B; ++i) {
    double sq = 0.0;
    const double* a = images.data() + i * pix;
    const double* b = xp.data() + i * pix;
    for (index j = 0; j < pix; ++j) {
      const double dxe = b[j] - a[j];
      sq += dxe * dxe;
    }
    out.noise_mean_sq += sq;
    out.noise_max_sq = std::max(out.noise_max_sq, sq);
  }
  out.noise_mean_sq /= static_cast<double>(B);
  const nn::Tensor logits = nn::forward(spec, params, xp);
  out.loss = nn::loss_ce(logits, labels).loss;
  return out;
}

}  // namespace

MaximinResult solve_maximin(const ImageDataset& train, const MaximinSpecs& specs,
                            const AlternationConfig& cfg) {
  train.validate();
  const std::string private_label = train.label_with_role(LabelRole::kPrivate);
  const std::string protected_label =
      train.label_with_role(LabelRole::kProtected);

  MaximinResult result;
  result.budget = NoiseBudget::from_per_image(cfg.per_image_budget,
                                              train.count());
  result.protected_params =
      pretrain_protected(train, specs.protected_net, cfg);

  const Rng root(cfg.seed);
  result.adversary =
      nn::xavier_init(specs.adversary, root.substream("adv-init").seed());
  result.privatizer.encoder_spec = specs.encoder;
  result.privatizer.decoder_spec = specs.decoder;
  result.privatizer.encoder =
      nn::xavier_init(specs.encoder, root.substream("enc-init").seed());
  result.privatizer.decoder =
      nn::xavier_init(specs.decoder, root.substream("dec-init").seed());

  nn::OptimConfig adv_opt;
  adv_opt.lr = cfg.lr_adv;
  adv_opt.clip_norm = cfg.clip_norm;
  adv_opt.adam = cfg.adam;
  nn::OptimConfig priv_opt = adv_opt;
  priv_opt.lr = cfg.lr_priv;
  nn::OptimConfig pro_opt = adv_opt;
  pro_opt.lr = cfg.lr_pro;

  nn::OptimState opt_adv = nn::OptimState::make(specs.adversary, adv_opt);
  nn::OptimState opt_max_enc = nn::OptimState::make(specs.encoder, priv_opt);
  nn::OptimState opt_max_dec = nn::OptimState::make(specs.decoder, priv_opt);
  nn::OptimState opt_pro_enc = nn::OptimState::make(specs.encoder, pro_opt);
  nn::OptimState opt_pro_dec = nn::OptimState::make(specs.decoder, pro_opt);

  BatchCursor adv_cursor(train.count(), cfg.batch_size,
                         root.substream("adv-batches"));
  BatchCursor priv_cursor(train.count(), cfg.batch_size,
                          root.substream("priv-batches"));
  BatchCursor pro_cursor(train.count(), cfg.batch_size,
                         root.substream("pro-batches"));

  for (int iter = 1; iter <= cfg.outer_iters; ++iter) {
    const nn::ModelParams adv_before = result.adversary;
    const nn::ModelParams enc_before = result.privatizer.encoder;
    const nn::ModelParams dec_before = result.privatizer.decoder;

    adversary_phase(result.adversary, specs.adversary, opt_adv,
                    result.privatizer, result.budget, train, private_label,
                    cfg.k_adv, adv_cursor);
    const FullSetEval after_adv = eval_on_privatized(
        specs.adversary, result.adversary, result.privatizer, result.budget,
        train.images, train.label(private_label));

    privatizer_max_phase(result.privatizer, opt_max_enc, opt_max_dec,
                         result.adversary, specs.adversary, result.budget,
                         train, private_label, cfg.k_priv, priv_cursor);
    privatizer_protect_phase(result.privatizer, opt_pro_enc, opt_pro_dec,
                             result.protected_params, specs.protected_net,
                             result.budget, train, protected_label, cfg.k_pro,
                             pro_cursor);

    const FullSetEval after_priv = eval_on_privatized(
        specs.adversary, result.adversary, result.privatizer, result.budget,
        train.images, train.label(private_label));
    const FullSetEval pro_eval = eval_on_privatized(
        specs.protected_net, result.protected_params, result.privatizer,
        result.budget, train.images, train.label(protected_label));

    IterationRecord rec;
    rec.iter = iter;
    rec.adv_loss = after_adv.loss;
    rec.priv_adv_loss = after_priv.loss;
    rec.protected_loss = pro_eval.loss;
    rec.dtheta_adv =
        nn::ModelParams::delta_norm(result.adversary, adv_before);
    const double denc =
        nn::ModelParams::delta_norm(result.privatizer.encoder, enc_before);
    const double ddec =
        nn::ModelParams::delta_norm(result.privatizer.decoder, dec_before);
    rec.dtheta_priv = std::sqrt(denc * denc + ddec * ddec);
    rec.noise_mean_sq = after_priv.noise_mean_sq;
    rec.noise_max_sq = after_priv.noise_max_sq;
    result.history.iterations.push_back(rec);

    if (rec.dtheta_adv < cfg.epsilon && rec.dtheta_priv < cfg.epsilon) {
      result.history.converged = true;
      break;
    }
  }
  return result;
}

const AccuracyRow& EvalReport::row(const std::string& model) const {
  for (const auto& r : rows) {
    if (r.model == model) return r;
  }
  throw ConfigError("EvalReport: no row for " + model);
}

EvalReport evaluate_privatization(const MaximinResult& result,
                                  const ImageDataset& train,
                                  const ImageDataset& test,
                                  const MaximinSpecs& specs,
                                  const AlternationConfig& cfg) {
  const std::string private_label = train.label_with_role(LabelRole::kPrivate);
  const std::string protected_label =
      train.label_with_role(LabelRole::kProtected);
  const std::string public_label = train.label_with_role(LabelRole::kPublic);

  const nn::Tensor test_priv =
      privatize(test.images, result.privatizer, result.budget);
  const nn::Tensor train_priv =
      privatize(train.images, result.privatizer, result.budget);

  EvalReport report;
  {
    const index B = test.images.dim(0);
    const index pix = image_pixels(test.images);
    double mean = 0.0, mx = 0.0;
    for (index i = 0; i < B; ++i) {
      double sq = 0.0;
      for (index j = 0; j < pix; ++j) {
        const double d =
            test_priv.data()[i * pix + j] - test.images.data()[i * pix + j];
        sq += d * d;
      }
      mean += sq;
      mx = std::max(mx, sq);
    }
    report.noise_mean_sq = mean / static_cast<double>(B);
    report.noise_max_sq = mx;
  }

  auto add_row = [&](const std::string& model, const nn::NetworkSpec& spec,
                     const nn::ModelParams& params, const std::string& label,
                     LabelRole role) {
    AccuracyRow row;
    row.model = model;
    row.label = label;
    row.role = role;
    row.clean_acc =
        nn::accuracy(nn::forward(spec, params, test.images), test.label(label));
    row.priv_acc =
        nn::accuracy(nn::forward(spec, params, test_priv), test.label(label));
    report.rows.push_back(row);
  };

  // (a) the adversary trained inside the alternation, frozen
  add_row("fixed_adversary", specs.adversary, result.adversary, private_label,
          LabelRole::kPrivate);

  // (b) a fresh adversary that simulates the privatization: trained from
  // scratch on privatized training images
  nn::OptimConfig opt;
  opt.lr = cfg.lr_adv;
  opt.clip_norm = cfg.clip_norm;
  opt.adam = cfg.adam;
  const Rng root(cfg.seed);
  const nn::ModelParams retrained = train_classifier(
      specs.adversary, train_priv, train.label(private_label), opt,
      cfg.eval_train_epochs, cfg.batch_size, root.substream("retrain-adv"));
  add_row("retrained_adversary", specs.adversary, retrained, private_label,
          LabelRole::kPrivate);

  // public / protected models are trained on clean data only
  const nn::ModelParams public_model = train_classifier(
      specs.adversary, train.images, train.label(public_label), opt,
      cfg.eval_train_epochs, cfg.batch_size, root.substream("public-train"));
  add_row("public_model", specs.adversary, public_model, public_label,
          LabelRole::kPublic);

  add_row("protected_model", specs.protected_net, result.protected_params,
          protected_label, LabelRole::kProtected);
  return report;
}

void write_csv(const TrainHistory& history, std::ostream& out) {
  csv::Writer w(out);
  w.row({"iter", "adv_loss", "priv_adv_loss", "protected_loss", "dtheta_adv",
         "dtheta_priv", "noise_mean_sq", "noise_max_sq", "converged"});
  for (const auto& r : history.iterations) {
    w.row({std::to_string(r.iter), csv::format_double(r.adv_loss),
           csv::format_double(r.priv_adv_loss),
           csv::format_double(r.protected_loss),
           csv::format_double(r.dtheta_adv), csv::format_double(r.dtheta_priv),
           csv::format_double(r.noise_mean_sq),
           csv::format_double(r.noise_max_sq),
           history.converged ? "1" : "0"});
  }
}

nn::GradCheckResult privatizer_grad_check(std::uint64_t seed,
                                          double per_image_budget, double eps,
                                          int samples_per_tensor) {
  const int size = 8;
  MaximinSpecs specs;
  specs.adversary = nn::NetworkSpec::make(
      {size, size, 1},
      {nn::LayerSpec::conv2d(2, 3), nn::LayerSpec::relu(),
       nn::LayerSpec::maxpool(2), nn::LayerSpec::flatten(),
       nn::LayerSpec::dense(2)});
  specs.encoder = nn::NetworkSpec::make(
      {size, size, 1},
      {nn::LayerSpec::conv2d(2, 3), nn::LayerSpec::relu(),
       nn::LayerSpec::maxpool(2), nn::LayerSpec::flatten(),
       nn::LayerSpec::dense(8), nn::LayerSpec::relu()});
  specs.decoder = nn::decoder_preset(8, size, 1);

  const Rng root(seed);
  PrivatizerModel priv;
  priv.encoder_spec = specs.encoder;
  priv.decoder_spec = specs.decoder;
  priv.encoder = nn::xavier_init(specs.encoder, root.substream("enc").seed());
  priv.decoder = nn::xavier_init(specs.decoder, root.substream("dec").seed());
  const nn::ModelParams adversary =
      nn::xavier_init(specs.adversary, root.substream("adv").seed());

  const ImageDataset ds = gen_images(4, size, root.substream("data").seed());
  const NoiseBudget budget = NoiseBudget::from_per_image(per_image_budget, 4);
  const std::vector<int>& labels = ds.label("stripe");

  auto loss_and_sig = [&](std::uint64_t* sig) {
    PrivatizeCache pc;
    const nn::Tensor xp = privatize(ds.images, priv, budget, &pc);
    nn::Cache ac;
    const nn::Tensor logits = nn::forward(specs.adversary, adversary, xp, &ac);
    if (sig) *sig = pc.signature ^ ac.signature;
    return nn::loss_ce(logits, labels).loss;
  };

  PrivatizeCache pc;
  const nn::Tensor xp = privatize(ds.images, priv, budget, &pc);
  nn::Cache ac;
  const nn::Tensor logits = nn::forward(specs.adversary, adversary, xp, &ac);
  const nn::CeLoss ce = nn::loss_ce(logits, labels);
  const nn::BackwardResult adv_back =
      nn::backward(specs.adversary, adversary, ac, ce.dlogits);
  const PrivatizerGrads grads =
      privatize_backward(priv, pc, adv_back.input_grad, budget);

  nn::GradCheckResult result;
  Rng rng = root.substream("sample");
  auto check_tensor = [&](nn::Tensor& values, const nn::Tensor& analytic) {
    for (int s = 0; s < samples_per_tensor; ++s) {
      const index j = static_cast<index>(
          rng.below(static_cast<std::size_t>(values.size())));
      const double saved = values[static_cast<nn::index>(j)];
      std::uint64_t sig_p = 0, sig_m = 0;
      values[static_cast<nn::index>(j)] = saved + eps;
      const double lp = loss_and_sig(&sig_p);
      values[static_cast<nn::index>(j)] = saved - eps;
      const double lm = loss_and_sig(&sig_m);
      values[static_cast<nn::index>(j)] = saved;
      if (sig_p != sig_m) {
        ++result.skipped;
        continue;
      }
      const double numeric = (lp - lm) / (2 * eps);
      const double a = analytic[static_cast<nn::index>(j)];
      result.max_rel_error =
          std::max(result.max_rel_error,
                   std::abs(a - numeric) /
                       std::max({std::abs(a), std::abs(numeric), 1e-3}));
      ++result.checked;
    }
  };
  for (std::size_t li = 0; li < priv.encoder.layers.size(); ++li) {
    if (priv.encoder.layers[li].W.size()) {
      check_tensor(priv.encoder.layers[li].W, grads.encoder.layers[li].W);
      check_tensor(priv.encoder.layers[li].b, grads.encoder.layers[li].b);
    }
  }
  for (std::size_t li = 0; li < priv.decoder.layers.size(); ++li) {
    if (priv.decoder.layers[li].W.size()) {
      check_tensor(priv.decoder.layers[li].W, grads.decoder.layers[li].W);
      check_tensor(priv.decoder.layers[li].b, grads.decoder.layers[li].b);
    }
  }
  return result;
}

void write_csv(const EvalReport& report, std::ostream& out) {
  csv::Writer w(out);
  w.row({"model", "label", "role", "clean_accuracy", "privatized_accuracy"});
  for (const auto& r : report.rows) {
    w.row({r.model, r.label, to_string(r.role), csv::format_double(r.clean_acc),
           csv::format_double(r.priv_acc)});
  }
  w.row({"noise_mean_sq", csv::format_double(report.noise_mean_sq)});
  w.row({"noise_max_sq", csv::format_double(report.noise_max_sq)});
}

}  // namespace privkit
