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
#include <iosfwd>
#include <string>
#include <vector>

#include "privkit/dataset.hpp"
#include "privkit/nn/grad_check.hpp"
#include "privkit/nn/network.hpp"
#include "privkit/nn/optimizer.hpp"
#include "privkit/rng.hpp"

namespace privkit {

/// Encoder captures the features a CNN adversary would; decoder maps them
/// back to a pixel-shaped additive noise field.
struct PrivatizerModel {
  nn::NetworkSpec encoder_spec;
  nn::NetworkSpec decoder_spec;
  nn::ModelParams encoder;
  nn::ModelParams decoder;
};

/// Aggregate squared-norm noise allowance, enforced per image as total/count
/// (strictly stronger than the dataset-global coupling).
struct NoiseBudget {
  double total = 0.0;
  double per_image = 0.0;

  static NoiseBudget from_per_image(double d, index count);
  static NoiseBudget from_total(double total, index count);
};

struct AlternationConfig {
  int k_adv = 62;   // adversary descent steps per outer iteration
  int k_priv = 31;  // privatizer ascent steps
  int k_pro = 16;   // privatizer protected-descent steps
  int outer_iters = 30;
  double epsilon = 1e-3;  // parameter-change convergence threshold
  double lr_adv = 0.05;
  double lr_priv = 0.05;
  double lr_pro = 0.02;
  int batch_size = 64;
  double clip_norm = 5.0;
  bool adam = false;
  double per_image_budget = 1.0;
  std::uint64_t seed = 1;
  int pretrain_epochs = 20;
  double pretrain_target_acc = 0.95;
  int eval_train_epochs = 10;  // for public / retrained-adversary models
};

struct MaximinSpecs {
  nn::NetworkSpec adversary;
  nn::NetworkSpec protected_net;
  nn::NetworkSpec encoder;
  nn::NetworkSpec decoder;

  static MaximinSpecs desk_default(int size, int channels, int classes = 2);
};

struct IterationRecord {
  int iter = 0;
  double adv_loss = 0.0;       // after the adversary phase, full train set
  double priv_adv_loss = 0.0;  // after the privatizer phases
  double protected_loss = 0.0;
  double dtheta_adv = 0.0;
  double dtheta_priv = 0.0;
  double noise_mean_sq = 0.0;  // per-image ||dX||^2 statistics
  double noise_max_sq = 0.0;
};

struct TrainHistory {
  std::vector<IterationRecord> iterations;
  bool converged = false;
};

/// Forward intermediates of privatize, kept for the params gradient.
struct PrivatizeCache {
  nn::Cache encoder_cache;
  nn::Cache decoder_cache;
  nn::Tensor raw_noise;        // decoder output, image-shaped
  nn::Tensor noisy;            // X + projected noise, before clamping
  std::vector<double> raw_sq;  // per-image squared norm of raw noise
  std::vector<double> scale;   // projection factor per image (1 = inactive)
  std::uint64_t signature = 0; // discrete state incl. clamp/projection masks
};

/// X + dX with dX = decoder(encoder(X)), per-image norm projection onto the
/// budget, and a final [0,1] pixel clamp.
nn::Tensor privatize(const nn::Tensor& X, const PrivatizerModel& privatizer,
                     const NoiseBudget& budget,
                     PrivatizeCache* cache = nullptr);

struct PrivatizerGrads {
  nn::ModelParams encoder;
  nn::ModelParams decoder;
};

/// Pulls dL/dX_priv back through clamp, projection, decoder and encoder.
PrivatizerGrads privatize_backward(const PrivatizerModel& privatizer,
                                   const PrivatizeCache& cache,
                                   const nn::Tensor& dXpriv,
                                   const NoiseBudget& budget);

/// Deterministic minibatch index stream: seeded shuffle, reshuffled each
/// epoch, persisted across phases of the outer loop.
class BatchCursor {
 public:
  BatchCursor(index count, int batch_size, Rng rng);
  const std::vector<index>& next();

 private:
  std::vector<index> order_;
  std::vector<index> batch_;
  std::size_t pos_ = 0;
  int batch_size_;
  Rng rng_;
};

nn::Tensor gather_images(const nn::Tensor& images,
                         const std::vector<index>& rows);
std::vector<int> gather_labels(const std::vector<int>& labels,
                               const std::vector<index>& rows);

/// Plain classifier training used for the protected model, the public-label
/// models and the retrained adversary.
nn::ModelParams train_classifier(const nn::NetworkSpec& spec,
                                 const nn::Tensor& images,
                                 const std::vector<int>& labels,
                                 const nn::OptimConfig& opt, int epochs,
                                 int batch_size, Rng rng,
                                 double stop_at_accuracy = 1.1);

/// Trains the protected model on clean images until the target accuracy or
/// the epoch cap; throws NumericError below 60% (broken data signal).
nn::ModelParams pretrain_protected(const ImageDataset& train,
                                   const nn::NetworkSpec& spec,
                                   const AlternationConfig& cfg);

/// k descent steps on the adversary's private-label cross-entropy over
/// privatized batches; the privatizer is read-only here.
double adversary_phase(nn::ModelParams& adversary,
                       const nn::NetworkSpec& adversary_spec,
                       nn::OptimState& opt, const PrivatizerModel& privatizer,
                       const NoiseBudget& budget, const ImageDataset& data,
                       const std::string& label, int steps,
                       BatchCursor& cursor);

/// k ascent steps on the frozen adversary's loss, gradients flowing through
/// the noise projection into both privatizer nets.
double privatizer_max_phase(PrivatizerModel& privatizer,
                            nn::OptimState& opt_enc, nn::OptimState& opt_dec,
                            const nn::ModelParams& adversary,
                            const nn::NetworkSpec& adversary_spec,
                            const NoiseBudget& budget, const ImageDataset& data,
                            const std::string& label, int steps,
                            BatchCursor& cursor);

/// k descent steps on the frozen protected model's loss.
double privatizer_protect_phase(PrivatizerModel& privatizer,
                                nn::OptimState& opt_enc,
                                nn::OptimState& opt_dec,
                                const nn::ModelParams& protected_params,
                                const nn::NetworkSpec& protected_spec,
                                const NoiseBudget& budget,
                                const ImageDataset& data,
                                const std::string& label, int steps,
                                BatchCursor& cursor);

struct MaximinResult {
  PrivatizerModel privatizer;
  nn::ModelParams adversary;
  nn::ModelParams protected_params;
  NoiseBudget budget;
  TrainHistory history;
};

/// Algorithm: pretrain the protected model, Xavier-seed adversary and
/// privatizer, then alternate the three phases until both parameter-change
/// norms fall below epsilon or the outer cap is reached (non-convergence at
/// the cap is a normal outcome, flagged in the history).
MaximinResult solve_maximin(const ImageDataset& train, const MaximinSpecs& specs,
                            const AlternationConfig& cfg);

struct AccuracyRow {
  std::string model;
  std::string label;
  LabelRole role = LabelRole::kPublic;
  double clean_acc = 0.0;
  double priv_acc = 0.0;
};

struct EvalReport {
  std::vector<AccuracyRow> rows;
  double noise_max_sq = 0.0;   // over the privatized test set
  double noise_mean_sq = 0.0;

  const AccuracyRow& row(const std::string& model) const;
};

/// Fixed-adversary and retrained-adversary evaluations plus clean-trained
/// public/protected models, all scored on clean vs privatized test images.
EvalReport evaluate_privatization(const MaximinResult& result,
                                  const ImageDataset& train,
                                  const ImageDataset& test,
                                  const MaximinSpecs& specs,
                                  const AlternationConfig& cfg);

void write_csv(const TrainHistory& history, std::ostream& out);
void write_csv(const EvalReport& report, std::ostream& out);

/// Finite-difference check of the privatizer-through-frozen-adversary
/// composite path (cross-entropy of the adversary on privatized images,
/// differentiated w.r.t. encoder and decoder parameters). Runs on a small
/// built-in configuration; kink-straddling coordinates are skipped.
nn::GradCheckResult privatizer_grad_check(std::uint64_t seed,
                                          double per_image_budget = 0.5,
                                          double eps = 1e-5,
                                          int samples_per_tensor = 60);

}  // namespace privkit
