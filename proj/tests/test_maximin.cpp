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

#include <doctest.h>

#include <cmath>

#include "privkit/maximin.hpp"

using namespace privkit;
using Index = privkit::index;

namespace {

MaximinSpecs tiny_specs(int size = 8) {
  MaximinSpecs s;
  s.adversary = nn::NetworkSpec::make(
      {size, size, 1},
      {nn::LayerSpec::conv2d(2, 3), nn::LayerSpec::relu(),
       nn::LayerSpec::maxpool(2), nn::LayerSpec::flatten(),
       nn::LayerSpec::dense(2)});
  s.protected_net = s.adversary;
  s.encoder = nn::NetworkSpec::make(
      {size, size, 1},
      {nn::LayerSpec::conv2d(2, 3), nn::LayerSpec::relu(),
       nn::LayerSpec::maxpool(2), nn::LayerSpec::flatten(),
       nn::LayerSpec::dense(8), nn::LayerSpec::relu()});
  s.decoder = nn::decoder_preset(8, size, 1);
  return s;
}

PrivatizerModel make_privatizer(const MaximinSpecs& specs, std::uint64_t seed) {
  PrivatizerModel p;
  p.encoder_spec = specs.encoder;
  p.decoder_spec = specs.decoder;
  p.encoder = nn::xavier_init(specs.encoder, seed);
  p.decoder = nn::xavier_init(specs.decoder, seed + 1);
  return p;
}

}  // namespace

TEST_CASE("privatize with a zero decoder returns the input unchanged") {
  const MaximinSpecs specs = tiny_specs();
  PrivatizerModel priv = make_privatizer(specs, 5);
  priv.decoder = nn::zero_params(specs.decoder);
  const ImageDataset ds = gen_images(6, 8, 1);
  const NoiseBudget budget = NoiseBudget::from_per_image(1.0, ds.count());
  const nn::Tensor out = privatize(ds.images, priv, budget);
  CHECK(std::equal(out.values().begin(), out.values().end(),
                   ds.images.values().begin()));
}

TEST_CASE("a zero per-image budget forces X_priv = X") {
  const MaximinSpecs specs = tiny_specs();
  const PrivatizerModel priv = make_privatizer(specs, 6);
  const ImageDataset ds = gen_images(5, 8, 2);
  const NoiseBudget budget = NoiseBudget::from_per_image(0.0, ds.count());
  const nn::Tensor out = privatize(ds.images, priv, budget);
  CHECK(std::equal(out.values().begin(), out.values().end(),
                   ds.images.values().begin()));
}

TEST_CASE("noise projection enforces the per-image budget") {
  const MaximinSpecs specs = tiny_specs();
  const PrivatizerModel priv = make_privatizer(specs, 7);
  const ImageDataset ds = gen_images(12, 8, 3);
  const double d = 0.01;  // tiny budget so projection is active
  const NoiseBudget budget = NoiseBudget::from_per_image(d, ds.count());
  PrivatizeCache cache;
  const nn::Tensor out = privatize(ds.images, priv, budget, &cache);
  const Index pix = 8 * 8;
  bool any_projected = false;
  for (Index i = 0; i < ds.count(); ++i) {
    double sq = 0.0;
    for (Index j = 0; j < pix; ++j) {
      const double dx = out[i * pix + j] - ds.images[i * pix + j];
      sq += dx * dx;
    }
    CHECK(sq <= d + 1e-9);
    if (cache.scale[static_cast<std::size_t>(i)] < 1.0) any_projected = true;
  }
  CHECK(any_projected);
  for (const double v : out.values()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("budgets convert between total and per-image") {
  const NoiseBudget a = NoiseBudget::from_per_image(2.0, 50);
  CHECK(a.total == 100.0);
  const NoiseBudget b = NoiseBudget::from_total(100.0, 50);
  CHECK(b.per_image == 2.0);
  CHECK_THROWS_AS(NoiseBudget::from_per_image(-1.0, 5), ConfigError);
}

TEST_CASE("privatizer composite gradient matches finite differences") {
  // the full max-phase path: CE(adversary(privatize(X))) w.r.t. privatizer
  const MaximinSpecs specs = tiny_specs();
  PrivatizerModel priv = make_privatizer(specs, 11);
  const nn::ModelParams adversary = nn::xavier_init(specs.adversary, 12);
  const ImageDataset ds = gen_images(4, 8, 13);
  // budget chosen so some images project and some do not
  const NoiseBudget budget = NoiseBudget::from_per_image(0.5, ds.count());
  const std::vector<int>& labels = ds.label("stripe");

  auto loss_and_sig = [&](std::uint64_t* sig) {
    PrivatizeCache pc;
    const nn::Tensor xp = privatize(ds.images, priv, budget, &pc);
    nn::Cache ac;
    const nn::Tensor logits = nn::forward(specs.adversary, adversary, xp, &ac);
    if (sig) *sig = pc.signature ^ ac.signature;
    return nn::loss_ce(logits, labels).loss;
  };

  // analytic gradient
  PrivatizeCache pc;
  const nn::Tensor xp = privatize(ds.images, priv, budget, &pc);
  nn::Cache ac;
  const nn::Tensor logits = nn::forward(specs.adversary, adversary, xp, &ac);
  const nn::CeLoss ce = nn::loss_ce(logits, labels);
  const nn::BackwardResult adv_back =
      nn::backward(specs.adversary, adversary, ac, ce.dlogits);
  const PrivatizerGrads grads =
      privatize_backward(priv, pc, adv_back.input_grad, budget);

  const double eps = 1e-5;
  int checked = 0, skipped = 0;
  double max_rel = 0.0;
  Rng rng(17);
  auto check_tensor = [&](nn::Tensor& values, const nn::Tensor& analytic) {
    for (int s = 0; s < 60; ++s) {
      const Index j = static_cast<Index>(
          rng.below(static_cast<std::size_t>(values.size())));
      const double saved = values[j];
      std::uint64_t sig_p = 0, sig_m = 0;
      values[j] = saved + eps;
      const double lp = loss_and_sig(&sig_p);
      values[j] = saved - eps;
      const double lm = loss_and_sig(&sig_m);
      values[j] = saved;
      if (sig_p != sig_m) {
        ++skipped;
        continue;
      }
      const double numeric = (lp - lm) / (2 * eps);
      const double a = analytic[j];
      max_rel = std::max(max_rel, std::abs(a - numeric) /
                                      std::max({std::abs(a), std::abs(numeric),
                                                1e-3}));
      ++checked;
    }
  };
  for (std::size_t li = 0; li < priv.encoder.layers.size(); ++li) {
    if (priv.encoder.layers[li].W.size()) {
      check_tensor(priv.encoder.layers[li].W, grads.encoder.layers[li].W);
    }
  }
  for (std::size_t li = 0; li < priv.decoder.layers.size(); ++li) {
    if (priv.decoder.layers[li].W.size()) {
      check_tensor(priv.decoder.layers[li].W, grads.decoder.layers[li].W);
    }
  }
  CHECK(checked > 100);
  CHECK(max_rel < 1e-4);
}

TEST_CASE("phases with zero learning rate change nothing") {
  const MaximinSpecs specs = tiny_specs();
  const ImageDataset ds = gen_images(32, 8, 19);
  const NoiseBudget budget = NoiseBudget::from_per_image(0.5, ds.count());
  PrivatizerModel priv = make_privatizer(specs, 20);
  nn::ModelParams adv = nn::xavier_init(specs.adversary, 21);

  nn::OptimConfig zero_lr;
  zero_lr.lr = 0.0;
  nn::OptimState opt_adv = nn::OptimState::make(specs.adversary, zero_lr);
  nn::OptimState opt_enc = nn::OptimState::make(specs.encoder, zero_lr);
  nn::OptimState opt_dec = nn::OptimState::make(specs.decoder, zero_lr);

  const nn::ModelParams adv_before = adv;
  const nn::ModelParams enc_before = priv.encoder;

  BatchCursor cursor(ds.count(), 8, Rng(1));
  adversary_phase(adv, specs.adversary, opt_adv, priv, budget, ds, "stripe", 3,
                  cursor);
  CHECK(nn::ModelParams::delta_norm(adv, adv_before) == 0.0);

  BatchCursor cursor2(ds.count(), 8, Rng(2));
  privatizer_max_phase(priv, opt_enc, opt_dec, adv, specs.adversary, budget,
                       ds, "stripe", 3, cursor2);
  CHECK(nn::ModelParams::delta_norm(priv.encoder, enc_before) == 0.0);

  BatchCursor cursor3(ds.count(), 8, Rng(3));
  privatizer_protect_phase(priv, opt_enc, opt_dec, adv, specs.adversary,
                           budget, ds, "border", 3, cursor3);
  CHECK(nn::ModelParams::delta_norm(priv.encoder, enc_before) == 0.0);
}

TEST_CASE("one ascent step raises the frozen adversary's loss on a batch") {
  const MaximinSpecs specs = tiny_specs();
  const ImageDataset ds = gen_images(16, 8, 23);
  const NoiseBudget budget = NoiseBudget::from_per_image(2.0, ds.count());
  const nn::ModelParams adv = nn::xavier_init(specs.adversary, 24);

  auto batch_loss = [&](const PrivatizerModel& p) {
    const nn::Tensor xp = privatize(ds.images, p, budget);
    const nn::Tensor logits = nn::forward(specs.adversary, adv, xp);
    return nn::loss_ce(logits, ds.label("stripe")).loss;
  };

  double lr = 0.01;
  bool increased = false;
  for (int attempt = 0; attempt < 3 && !increased; ++attempt, lr /= 10) {
    PrivatizerModel priv = make_privatizer(specs, 25);
    const double before = batch_loss(priv);
    nn::OptimConfig cfg;
    cfg.lr = lr;
    cfg.momentum = 0.0;
    nn::OptimState opt_enc = nn::OptimState::make(specs.encoder, cfg);
    nn::OptimState opt_dec = nn::OptimState::make(specs.decoder, cfg);
    BatchCursor cursor(ds.count(), static_cast<int>(ds.count()), Rng(4));
    privatizer_max_phase(priv, opt_enc, opt_dec, adv, specs.adversary, budget,
                         ds, "stripe", 1, cursor);
    increased = batch_loss(priv) > before;
  }
  CHECK(increased);
}

TEST_CASE("one protect step lowers the protected loss on a batch") {
  const MaximinSpecs specs = tiny_specs();
  const ImageDataset ds = gen_images(16, 8, 29);
  const NoiseBudget budget = NoiseBudget::from_per_image(2.0, ds.count());
  const nn::ModelParams pro = nn::xavier_init(specs.protected_net, 30);

  auto batch_loss = [&](const PrivatizerModel& p) {
    const nn::Tensor xp = privatize(ds.images, p, budget);
    const nn::Tensor logits = nn::forward(specs.protected_net, pro, xp);
    return nn::loss_ce(logits, ds.label("border")).loss;
  };

  double lr = 0.01;
  bool decreased = false;
  for (int attempt = 0; attempt < 3 && !decreased; ++attempt, lr /= 10) {
    PrivatizerModel priv = make_privatizer(specs, 31);
    const double before = batch_loss(priv);
    nn::OptimConfig cfg;
    cfg.lr = lr;
    cfg.momentum = 0.0;
    nn::OptimState opt_enc = nn::OptimState::make(specs.encoder, cfg);
    nn::OptimState opt_dec = nn::OptimState::make(specs.decoder, cfg);
    BatchCursor cursor(ds.count(), static_cast<int>(ds.count()), Rng(5));
    privatizer_protect_phase(priv, opt_enc, opt_dec, pro, specs.protected_net,
                             budget, ds, "border", 1, cursor);
    decreased = batch_loss(priv) < before;
  }
  CHECK(decreased);
}

TEST_CASE("pretrain_protected learns the border factor") {
  const ImageDataset ds = gen_images(400, 8, 37);
  const MaximinSpecs specs = tiny_specs();
  AlternationConfig cfg;
  cfg.seed = 37;
  cfg.pretrain_epochs = 15;
  cfg.lr_pro = 0.05;
  const nn::ModelParams pro = pretrain_protected(ds, specs.protected_net, cfg);
  const nn::Tensor logits = nn::forward(specs.protected_net, pro, ds.images);
  CHECK(nn::accuracy(logits, ds.label("border")) >= 0.95);
}

TEST_CASE("pretrain with zero epochs returns the initialization") {
  const ImageDataset ds = gen_images(32, 8, 38);
  const MaximinSpecs specs = tiny_specs();
  AlternationConfig cfg;
  cfg.seed = 41;
  cfg.pretrain_epochs = 0;
  const nn::ModelParams a = pretrain_protected(ds, specs.protected_net, cfg);
  const nn::ModelParams b = pretrain_protected(ds, specs.protected_net, cfg);
  CHECK(nn::ModelParams::delta_norm(a, b) == 0.0);
  // untouched by training: biases still exactly zero
  for (const auto& l : a.layers) CHECK(l.b.squared_norm() == 0.0);
}

TEST_CASE("adversary learns stripes through an inactive privatizer") {
  const MaximinSpecs specs = tiny_specs();
  const ImageDataset ds = gen_images(400, 8, 43);
  PrivatizerModel priv = make_privatizer(specs, 44);
  priv.decoder = nn::zero_params(specs.decoder);  // identity privatizer
  const NoiseBudget budget = NoiseBudget::from_per_image(1.0, ds.count());

  nn::ModelParams adv = nn::xavier_init(specs.adversary, 45);
  nn::OptimConfig cfg;
  cfg.lr = 0.05;
  nn::OptimState opt = nn::OptimState::make(specs.adversary, cfg);
  BatchCursor cursor(ds.count(), 32, Rng(46));
  adversary_phase(adv, specs.adversary, opt, priv, budget, ds, "stripe", 200,
                  cursor);
  const nn::Tensor logits = nn::forward(specs.adversary, adv, ds.images);
  CHECK(nn::accuracy(logits, ds.label("stripe")) >= 0.9);
}

TEST_CASE("solve_maximin with a zero outer cap returns the initialization") {
  const ImageDataset ds = gen_images(64, 8, 47);
  const MaximinSpecs specs = tiny_specs();
  AlternationConfig cfg;
  cfg.seed = 48;
  cfg.outer_iters = 0;
  cfg.batch_size = 16;
  cfg.lr_pro = 0.05;
  cfg.pretrain_epochs = 10;
  const MaximinResult r = solve_maximin(ds, specs, cfg);
  CHECK(r.history.iterations.empty());
  CHECK(!r.history.converged);
  const nn::ModelParams enc_init =
      nn::xavier_init(specs.encoder, Rng(cfg.seed).substream("enc-init").seed());
  CHECK(nn::ModelParams::delta_norm(r.privatizer.encoder, enc_init) == 0.0);
}

TEST_CASE("solve_maximin is deterministic and phase-isolated") {
  const ImageDataset ds = gen_images(64, 8, 49);
  const MaximinSpecs specs = tiny_specs();
  AlternationConfig cfg;
  cfg.seed = 50;
  cfg.outer_iters = 2;
  cfg.k_adv = 4;
  cfg.k_priv = 3;
  cfg.k_pro = 2;
  cfg.batch_size = 16;
  cfg.lr_pro = 0.05;
  cfg.pretrain_epochs = 10;

  const MaximinResult a = solve_maximin(ds, specs, cfg);
  const MaximinResult b = solve_maximin(ds, specs, cfg);
  REQUIRE(a.history.iterations.size() == b.history.iterations.size());
  for (std::size_t i = 0; i < a.history.iterations.size(); ++i) {
    CHECK(a.history.iterations[i].adv_loss == b.history.iterations[i].adv_loss);
    CHECK(a.history.iterations[i].dtheta_priv ==
          b.history.iterations[i].dtheta_priv);
  }
  CHECK(nn::ModelParams::delta_norm(a.adversary, b.adversary) == 0.0);
  CHECK(nn::ModelParams::delta_norm(a.privatizer.decoder,
                                    b.privatizer.decoder) == 0.0);
  // every record is finite and complete
  for (const auto& rec : a.history.iterations) {
    CHECK(std::isfinite(rec.adv_loss));
    CHECK(std::isfinite(rec.dtheta_adv));
    CHECK(std::isfinite(rec.dtheta_priv));
    CHECK(rec.noise_max_sq <= cfg.per_image_budget + 1e-9);
  }
}

TEST_CASE("phase isolation: each phase only touches its own parameters") {
  const MaximinSpecs specs = tiny_specs();
  const ImageDataset ds = gen_images(32, 8, 51);
  const NoiseBudget budget = NoiseBudget::from_per_image(1.0, ds.count());
  PrivatizerModel priv = make_privatizer(specs, 52);
  nn::ModelParams adv = nn::xavier_init(specs.adversary, 53);
  nn::ModelParams pro = nn::xavier_init(specs.protected_net, 54);

  nn::OptimConfig cfg;
  cfg.lr = 0.05;
  nn::OptimState opt_adv = nn::OptimState::make(specs.adversary, cfg);
  nn::OptimState opt_enc = nn::OptimState::make(specs.encoder, cfg);
  nn::OptimState opt_dec = nn::OptimState::make(specs.decoder, cfg);

  const nn::ModelParams enc0 = priv.encoder;
  const nn::ModelParams dec0 = priv.decoder;
  BatchCursor c1(ds.count(), 8, Rng(55));
  adversary_phase(adv, specs.adversary, opt_adv, priv, budget, ds, "stripe", 2,
                  c1);
  CHECK(nn::ModelParams::delta_norm(priv.encoder, enc0) == 0.0);
  CHECK(nn::ModelParams::delta_norm(priv.decoder, dec0) == 0.0);

  const nn::ModelParams adv0 = adv;
  BatchCursor c2(ds.count(), 8, Rng(56));
  privatizer_max_phase(priv, opt_enc, opt_dec, adv, specs.adversary, budget,
                       ds, "stripe", 2, c2);
  CHECK(nn::ModelParams::delta_norm(adv, adv0) == 0.0);

  const nn::ModelParams pro0 = pro;
  BatchCursor c3(ds.count(), 8, Rng(57));
  privatizer_protect_phase(priv, opt_enc, opt_dec, pro, specs.protected_net,
                           budget, ds, "border", 2, c3);
  CHECK(nn::ModelParams::delta_norm(pro, pro0) == 0.0);
}

TEST_CASE("evaluate_privatization with a zero-noise privatizer is a no-op") {
  const ImageDataset full = gen_images(120, 8, 58);
  const auto [train, test] = split(full, 0.25, 59);
  const MaximinSpecs specs = tiny_specs();
  AlternationConfig cfg;
  cfg.seed = 60;
  cfg.outer_iters = 0;
  cfg.pretrain_epochs = 6;
  cfg.eval_train_epochs = 4;
  MaximinResult r = solve_maximin(train, specs, cfg);
  r.privatizer.decoder = nn::zero_params(specs.decoder);  // zero noise
  const EvalReport rep = evaluate_privatization(r, train, test, specs, cfg);
  REQUIRE(rep.rows.size() == 4);
  for (const auto& row : rep.rows) {
    CHECK(row.clean_acc == row.priv_acc);
  }
  CHECK(rep.noise_max_sq == 0.0);
}

TEST_CASE("an untrained model scores near chance on balanced labels") {
  const ImageDataset ds = gen_images(500, 8, 61);
  const MaximinSpecs specs = tiny_specs();
  const nn::ModelParams p = nn::xavier_init(specs.adversary, 62);
  const nn::Tensor logits = nn::forward(specs.adversary, p, ds.images);
  const double acc = nn::accuracy(logits, ds.label("stripe"));
  CHECK(acc > 0.35);
  CHECK(acc < 0.65);
}
