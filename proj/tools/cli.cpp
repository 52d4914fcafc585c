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

#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "privkit/csv.hpp"
#include "privkit/dataset.hpp"
#include "privkit/linear_eval.hpp"
#include "privkit/linear_privatizer.hpp"
#include "privkit/maximin.hpp"
#include "privkit/nn/grad_check.hpp"
#include "privkit/nn/serialize.hpp"
#include "privkit/rng.hpp"

namespace privkit::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

fs::path default_out_root() {
  if (const char* env = std::getenv("PRIVKIT_OUT_ROOT")) return env;
  return "runs";
}

/// Collects resolved options and writes results.json + manifest.json.
class RunContext {
 public:
  RunContext(std::string subcommand, std::string out_flag)
      : subcommand_(std::move(subcommand)),
        start_(std::chrono::steady_clock::now()) {
    out_ = out_flag.empty() ? default_out_root() / subcommand_
                            : fs::path(out_flag);
    fs::create_directories(out_);
  }

  const fs::path& dir() const { return out_; }
  json& config() { return config_; }

  std::ofstream open(const std::string& name) const {
    std::ofstream out(out_ / name, std::ios::binary);
    if (!out) throw IoError("cannot open output file " + (out_ / name).string());
    return out;
  }

  void finish(json results) const {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    json doc;
    doc["config"] = config_;
    doc["results"] = std::move(results);
    doc["timing"] = {{"wall_time_sec", secs}};
    {
      std::ofstream out(out_ / "results.json");
      out << doc.dump(2) << "\n";
    }
    json manifest;
    manifest["subcommand"] = subcommand_;
    manifest["config"] = config_;
    manifest["versions"] = {{"privkit", kVersion}, {"format", 1}};
    manifest["wall_time_sec"] = secs;
    {
      std::ofstream out(out_ / "manifest.json");
      out << manifest.dump(2) << "\n";
    }
  }

 private:
  std::string subcommand_;
  fs::path out_;
  json config_;
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// dataset sources shared by the linear subcommands

struct SourceOpts {
  std::string csv_path;
  std::string schema_file;
  std::string schema_preset;
  std::string toy;  // "m=100,n=5"
  double toy_noise = 0.05;
  std::string private_label;
  bool no_normalize = false;
};

void add_source_flags(CLI::App* cmd, SourceOpts* src) {
  cmd->add_option("--csv", src->csv_path, "CSV dataset path");
  cmd->add_option("--schema", src->schema_file, "dataset schema JSON file");
  cmd->add_option("--schema-preset", src->schema_preset,
                  "built-in schema: beijing-pm25 | wine-quality");
  cmd->add_option("--toy", src->toy, "toy data spec, e.g. m=100,n=5");
  cmd->add_option("--toy-noise", src->toy_noise,
                  "toy label noise sigma (default 0.05)");
  cmd->add_option("--private", src->private_label,
                  "label to treat as private (overrides schema role)");
  cmd->add_flag("--no-normalize", src->no_normalize,
                "skip min-max normalization of CSV data");
}

std::pair<index, index> parse_toy(const std::string& s) {
  index m = 0, n = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    const std::string item = s.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("bad --toy item: " + item);
    const std::string key = item.substr(0, eq);
    const long value = std::stol(item.substr(eq + 1));
    if (key == "m") {
      m = value;
    } else if (key == "n") {
      n = value;
    } else {
      throw ConfigError("bad --toy key: " + key);
    }
    pos = comma + 1;
  }
  if (m < 1 || n < 1) throw ConfigError("--toy needs m>=1 and n>=1");
  return {m, n};
}

LabeledDataset resolve_source(const SourceOpts& src, std::uint64_t seed,
                              json* cfg) {
  LabeledDataset ds;
  if (!src.toy.empty()) {
    const auto [m, n] = parse_toy(src.toy);
    const std::uint64_t sub = Rng(seed).substream("dataset").seed();
    ds = gen_toy(m, n, sub, src.toy_noise);
    (*cfg)["source"] = {{"kind", "toy"},
                        {"m", m},
                        {"n", n},
                        {"noise_sigma", src.toy_noise},
                        {"dataset_seed", sub}};
  } else if (!src.csv_path.empty()) {
    CsvSchema schema;
    if (!src.schema_file.empty()) {
      schema = CsvSchema::from_json_file(src.schema_file);
    } else if (!src.schema_preset.empty()) {
      schema = CsvSchema::preset(src.schema_preset);
    } else {
      throw ConfigError("--csv needs --schema or --schema-preset");
    }
    LoadResult loaded = load_csv(src.csv_path, schema);
    (*cfg)["source"] = {{"kind", "csv"},
                        {"path", src.csv_path},
                        {"schema_preset", src.schema_preset},
                        {"schema_file", src.schema_file},
                        {"rows", loaded.dataset.m()},
                        {"rows_dropped", loaded.rows_dropped},
                        {"normalized", !src.no_normalize}};
    ds = std::move(loaded.dataset);
    if (!src.no_normalize) ds = normalize(ds).first;
  } else {
    throw ConfigError("need a dataset: --toy or --csv");
  }
  if (!src.private_label.empty()) {
    if (!ds.labels.count(src.private_label)) {
      throw ConfigError("--private: no such label " + src.private_label);
    }
    for (auto& [name, role] : ds.label_roles) {
      if (role == LabelRole::kPrivate) role = LabelRole::kPublic;
    }
    ds.label_roles[src.private_label] = LabelRole::kPrivate;
    (*cfg)["private_label"] = src.private_label;
  }
  return ds;
}

struct BudgetOpts {
  double alpha = 0.3;
  double absolute = -1.0;  // wins when >= 0
};

void add_budget_flags(CLI::App* cmd, BudgetOpts* b) {
  cmd->add_option("--alpha", b->alpha,
                  "budget as a fraction of frob_sq(X) (default 0.3)");
  cmd->add_option("--budget", b->absolute,
                  "absolute squared-Frobenius budget (overrides --alpha)");
}

Budget resolve_budget(const BudgetOpts& b, const Matrix& X, json* cfg) {
  const double D = b.absolute >= 0 ? b.absolute : b.alpha * frob_sq(X);
  (*cfg)["budget"] = {{"alpha", b.absolute >= 0 ? 0.0 : b.alpha},
                      {"D", D},
                      {"absolute", b.absolute >= 0}};
  return Budget{D};
}

json removal_to_json(const RemovalSet& r,
                     const std::vector<std::string>& names) {
  json out;
  out["removed"] = r.removed;
  json removed_names = json::array();
  for (const index j : r.removed) {
    removed_names.push_back(names.at(static_cast<std::size_t>(j)));
  }
  out["removed_names"] = removed_names;
  return out;
}

void write_trace_csv(const GreedyTrace& trace,
                     const std::vector<std::string>& names, std::ostream& out) {
  csv::Writer w(out);
  w.row({"step", "chosen", "feature", "utility", "cost", "ratio",
         "candidates_considered"});
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    w.row({std::to_string(i + 1), std::to_string(s.chosen),
           names.at(static_cast<std::size_t>(s.chosen)),
           csv::format_double(s.utility), csv::format_double(s.cost),
           csv::format_double(s.ratio),
           std::to_string(s.candidates_considered)});
  }
}

// ---------------------------------------------------------------------------
// image-side option bundles

struct ImageOpts {
  index count = 2500;
  int size = 16;
  double test_fraction = 0.2;
  double noise_sigma = 0.03;
};

void add_image_flags(CLI::App* cmd, ImageOpts* img) {
  cmd->add_option("--count", img->count, "number of images to generate");
  cmd->add_option("--size", img->size, "image side length (>= 8)");
  cmd->add_option("--test-fraction", img->test_fraction,
                  "held-out fraction for evaluation");
  cmd->add_option("--image-noise", img->noise_sigma, "pixel noise sigma");
}

void add_train_flags(CLI::App* cmd, AlternationConfig* t) {
  cmd->add_option("--k-adv", t->k_adv, "adversary steps per outer iteration");
  cmd->add_option("--k-priv", t->k_priv, "privatizer ascent steps");
  cmd->add_option("--k-pro", t->k_pro, "privatizer protected steps");
  cmd->add_option("--outer", t->outer_iters, "outer iteration cap");
  cmd->add_option("--epsilon", t->epsilon, "convergence threshold");
  cmd->add_option("--lr-adv", t->lr_adv, "adversary learning rate");
  cmd->add_option("--lr-priv", t->lr_priv, "privatizer (max phase) rate");
  cmd->add_option("--lr-pro", t->lr_pro, "privatizer (protect phase) rate");
  cmd->add_option("--batch-size", t->batch_size, "minibatch size");
  cmd->add_option("--clip-norm", t->clip_norm, "global gradient clip");
  cmd->add_flag("--adam", t->adam, "use Adam instead of SGD+momentum");
  cmd->add_option("--budget-per-image", t->per_image_budget,
                  "squared-norm noise budget per image");
  cmd->add_option("--pretrain-epochs", t->pretrain_epochs,
                  "protected pretrain epoch cap");
  cmd->add_option("--eval-train-epochs", t->eval_train_epochs,
                  "epochs for evaluation-side models");
}

json train_config_json(const AlternationConfig& t, const ImageOpts& img,
                       const std::string& arch) {
  return json{{"count", img.count},
              {"size", img.size},
              {"test_fraction", img.test_fraction},
              {"image_noise", img.noise_sigma},
              {"arch", arch},
              {"k_adv", t.k_adv},
              {"k_priv", t.k_priv},
              {"k_pro", t.k_pro},
              {"outer", t.outer_iters},
              {"epsilon", t.epsilon},
              {"lr_adv", t.lr_adv},
              {"lr_priv", t.lr_priv},
              {"lr_pro", t.lr_pro},
              {"batch_size", t.batch_size},
              {"clip_norm", t.clip_norm},
              {"adam", t.adam},
              {"budget_per_image", t.per_image_budget},
              {"pretrain_epochs", t.pretrain_epochs},
              {"eval_train_epochs", t.eval_train_epochs}};
}

AlternationConfig train_config_from_json(const json& j) {
  AlternationConfig t;
  t.k_adv = j.at("k_adv");
  t.k_priv = j.at("k_priv");
  t.k_pro = j.at("k_pro");
  t.outer_iters = j.at("outer");
  t.epsilon = j.at("epsilon");
  t.lr_adv = j.at("lr_adv");
  t.lr_priv = j.at("lr_priv");
  t.lr_pro = j.at("lr_pro");
  t.batch_size = j.at("batch_size");
  t.clip_norm = j.at("clip_norm");
  t.adam = j.at("adam");
  t.per_image_budget = j.at("budget_per_image");
  t.pretrain_epochs = j.at("pretrain_epochs");
  t.eval_train_epochs = j.at("eval_train_epochs");
  return t;
}

MaximinSpecs specs_for(const std::string& arch, int size, int channels) {
  if (arch == "default") return MaximinSpecs::desk_default(size, channels);
  if (arch == "hands") {
    MaximinSpecs s;
    s.adversary = nn::hands_adversary_preset(size, channels, 2);
    s.protected_net = nn::hands_protected_preset(size, channels, 2);
    s.encoder = nn::encoder_preset(size, channels, 32);
    s.decoder = nn::decoder_preset(32, size, channels);
    return s;
  }
  throw ConfigError("unknown --arch: " + arch);
}

struct GeneratedData {
  ImageDataset train;
  ImageDataset test;
};

GeneratedData make_image_data(const ImageOpts& img, std::uint64_t seed,
                              json* cfg) {
  ImageGenConfig gen;
  gen.noise_sigma = img.noise_sigma;
  const std::uint64_t data_seed = Rng(seed).substream("dataset").seed();
  const std::uint64_t split_seed = Rng(seed).substream("split").seed();
  const ImageDataset all = gen_images(img.count, img.size, data_seed, gen);
  auto [train, test] = split(all, img.test_fraction, split_seed);
  if (cfg) {
    (*cfg)["dataset_seed"] = data_seed;
    (*cfg)["split_seed"] = split_seed;
  }
  return GeneratedData{std::move(train), std::move(test)};
}

void write_labels_csv(const ImageDataset& ds, std::ostream& out) {
  csv::Writer w(out);
  std::vector<std::string> header{"image"};
  header.insert(header.end(), ds.label_names.begin(), ds.label_names.end());
  w.row(header);
  for (index i = 0; i < ds.count(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (const auto& name : ds.label_names) {
      row.push_back(std::to_string(ds.label(name)[static_cast<std::size_t>(i)]));
    }
    w.row(row);
  }
}

json eval_to_json(const EvalReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"model", r.model},
                    {"label", r.label},
                    {"role", to_string(r.role)},
                    {"clean_accuracy", r.clean_acc},
                    {"privatized_accuracy", r.priv_acc}});
  }
  return json{{"rows", rows},
              {"noise_mean_sq", rep.noise_mean_sq},
              {"noise_max_sq", rep.noise_max_sq}};
}

// ---------------------------------------------------------------------------

int dispatch(CLI::App& app, const std::string& out_flag, std::uint64_t seed,
             // linear side
             CLI::App* gen_toy_cmd, index* toy_m, index* toy_n,
             double* toy_sigma, CLI::App* greedy_cmd, SourceOpts* greedy_src,
             BudgetOpts* greedy_budget, CLI::App* brute_cmd,
             SourceOpts* brute_src, BudgetOpts* brute_budget,
             CLI::App* compare_cmd, SourceOpts* compare_src,
             BudgetOpts* compare_budget, CLI::App* ratio_cmd,
             std::vector<index>* ratio_n, std::vector<index>* ratio_m,
             int* ratio_trials, double* ratio_alpha, CLI::App* privatize_cmd,
             SourceOpts* privatize_src, BudgetOpts* privatize_budget,
             CLI::App* report_cmd, SourceOpts* report_src,
             BudgetOpts* report_budget, std::vector<index>* report_removed,
             // image side
             CLI::App* gen_images_cmd, ImageOpts* gen_img,
             CLI::App* pretrain_cmd, ImageOpts* pre_img,
             AlternationConfig* pre_cfg, CLI::App* maximin_cmd,
             ImageOpts* max_img, AlternationConfig* max_cfg,
             std::string* max_arch, CLI::App* evaluate_cmd,
             std::string* eval_run_dir, CLI::App* gradcheck_cmd,
             std::string* gc_preset, double* gc_tol) {
  // ---- gen-toy
  if (gen_toy_cmd->parsed()) {
    RunContext ctx("gen-toy", out_flag);
    ctx.config() = {{"m", *toy_m}, {"n", *toy_n}, {"seed", seed},
                    {"noise_sigma", *toy_sigma}};
    const std::uint64_t sub = Rng(seed).substream("dataset").seed();
    const LabeledDataset ds = gen_toy(*toy_m, *toy_n, sub, *toy_sigma);
    auto out = ctx.open("dataset.csv");
    csv::Writer w(out);
    std::vector<std::string> header = ds.feature_names;
    header.push_back("target");
    w.row(header);
    const Vector& y = ds.label("target");
    for (index i = 0; i < ds.m(); ++i) {
      std::vector<std::string> row;
      for (index j = 0; j < ds.n(); ++j) {
        row.push_back(csv::format_double(ds.X(i, j)));
      }
      row.push_back(csv::format_double(y(i)));
      w.row(row);
    }
    ctx.finish({{"m", ds.m()}, {"n", ds.n()}, {"dataset_seed", sub}});
    return 0;
  }

  // ---- greedy
  if (greedy_cmd->parsed()) {
    RunContext ctx("greedy", out_flag);
    ctx.config()["seed"] = seed;
    const LabeledDataset ds = resolve_source(*greedy_src, seed, &ctx.config());
    const Budget D = resolve_budget(*greedy_budget, ds.X, &ctx.config());
    const Vector& y = ds.label(ds.private_label());
    const auto [removal, trace] = greedy_approx(ds.X, y, D);
    {
      auto out = ctx.open("trace.csv");
      write_trace_csv(trace, ds.feature_names, out);
    }
    {
      auto out = ctx.open("loss_report.csv");
      write_csv(loss_report(ds, removal, D.D), ds.feature_names, out);
    }
    json res = removal_to_json(removal, ds.feature_names);
    res["utility"] = adversary_loss(ds.X, y, removal);
    res["cost"] = removal_cost(ds.X, removal);
    res["budget"] = D.D;
    ctx.finish(res);
    return 0;
  }

  // ---- brute
  if (brute_cmd->parsed()) {
    RunContext ctx("brute", out_flag);
    ctx.config()["seed"] = seed;
    const LabeledDataset ds = resolve_source(*brute_src, seed, &ctx.config());
    const Budget D = resolve_budget(*brute_budget, ds.X, &ctx.config());
    const Vector& y = ds.label(ds.private_label());
    const BruteResult r = brute_force(ds.X, y, D);
    json res = removal_to_json(r.removal, ds.feature_names);
    res["utility"] = r.utility;
    res["cost"] = removal_cost(ds.X, r.removal);
    res["budget"] = D.D;
    ctx.finish(res);
    return 0;
  }

  // ---- compare
  if (compare_cmd->parsed()) {
    RunContext ctx("compare", out_flag);
    ctx.config()["seed"] = seed;
    const LabeledDataset ds = resolve_source(*compare_src, seed, &ctx.config());
    const Budget D = resolve_budget(*compare_budget, ds.X, &ctx.config());
    const Vector& y = ds.label(ds.private_label());
    const auto [greedy_set, trace] = greedy_approx(ds.X, y, D);
    const double greedy_u = adversary_loss(ds.X, y, greedy_set);
    const BruteResult brute = brute_force(ds.X, y, D);
    json res;
    res["greedy"] = removal_to_json(greedy_set, ds.feature_names);
    res["greedy"]["utility"] = greedy_u;
    res["brute"] = removal_to_json(brute.removal, ds.feature_names);
    res["brute"]["utility"] = brute.utility;
    res["utility_match"] = utilities_match(brute.utility, greedy_u);
    res["set_match"] =
        brute.removal.sorted_removed() == greedy_set.sorted_removed();
    res["dominance_ok"] = brute.utility >= greedy_u - 1e-9;
    {
      auto out = ctx.open("compare.csv");
      csv::Writer w(out);
      w.row({"greedy_utility", "brute_utility", "utility_match", "set_match"});
      w.row({csv::format_double(greedy_u), csv::format_double(brute.utility),
             res["utility_match"].get<bool>() ? "1" : "0",
             res["set_match"].get<bool>() ? "1" : "0"});
    }
    ctx.finish(res);
    return 0;
  }

  // ---- ratio-experiment
  if (ratio_cmd->parsed()) {
    RunContext ctx("ratio-experiment", out_flag);
    ctx.config() = {{"n", *ratio_n},
                    {"m", *ratio_m},
                    {"trials", *ratio_trials},
                    {"alpha", *ratio_alpha},
                    {"seed", seed}};
    const RatioCurve curve =
        ratio_experiment(*ratio_n, *ratio_m, *ratio_trials, *ratio_alpha, seed);
    {
      auto out = ctx.open("ratio.csv");
      write_csv(curve, out);
    }
    json cells = json::array();
    for (const auto& c : curve.cells) {
      cells.push_back({{"n", c.n},
                       {"m", c.m},
                       {"match_fraction", c.match_fraction},
                       {"set_match_fraction", c.set_match_fraction}});
    }
    ctx.finish({{"cells", cells}});
    return 0;
  }

  // ---- privatize-linear
  if (privatize_cmd->parsed()) {
    RunContext ctx("privatize-linear", out_flag);
    ctx.config()["seed"] = seed;
    const LabeledDataset ds =
        resolve_source(*privatize_src, seed, &ctx.config());
    const Budget D = resolve_budget(*privatize_budget, ds.X, &ctx.config());
    const Vector& y = ds.label(ds.private_label());
    const auto [removal, trace] = greedy_approx(ds.X, y, D);
    const Matrix priv = apply_removal(ds.X, removal);
    {
      auto out = ctx.open("privatized.csv");
      csv::Writer w(out);
      std::vector<std::string> header = ds.feature_names;
      for (const auto& name : ds.label_names) header.push_back(name);
      w.row(header);
      for (index i = 0; i < priv.rows(); ++i) {
        std::vector<std::string> row;
        for (index j = 0; j < priv.cols(); ++j) {
          row.push_back(csv::format_double(priv(i, j)));
        }
        for (const auto& name : ds.label_names) {
          row.push_back(csv::format_double(ds.label(name)(i)));
        }
        w.row(row);
      }
    }
    json res = removal_to_json(removal, ds.feature_names);
    res["distortion"] = frob_sq(ds.X - priv);
    res["budget"] = D.D;
    ctx.finish(res);
    return 0;
  }

  // ---- report
  if (report_cmd->parsed()) {
    RunContext ctx("report", out_flag);
    ctx.config()["seed"] = seed;
    const LabeledDataset ds = resolve_source(*report_src, seed, &ctx.config());
    RemovalSet removal = RemovalSet::empty(ds.n());
    double budget_used_for = 0.0;
    if (!report_removed->empty()) {
      removal = RemovalSet::of(*report_removed, ds.n());
      ctx.config()["removed"] = *report_removed;
    } else {
      const Budget D = resolve_budget(*report_budget, ds.X, &ctx.config());
      budget_used_for = D.D;
      removal = greedy_approx(ds.X, ds.label(ds.private_label()), D).first;
    }
    const LossReport rep = loss_report(ds, removal, budget_used_for);
    {
      auto out = ctx.open("loss_report.csv");
      write_csv(rep, ds.feature_names, out);
    }
    json labels = json::array();
    for (const auto& l : rep.labels) {
      labels.push_back({{"label", l.name},
                        {"role", to_string(l.role)},
                        {"loss_before", l.loss_before},
                        {"loss_after", l.loss_after}});
    }
    json res = removal_to_json(removal, ds.feature_names);
    res["labels"] = labels;
    ctx.finish(res);
    return 0;
  }

  // ---- gen-images
  if (gen_images_cmd->parsed()) {
    RunContext ctx("gen-images", out_flag);
    ctx.config() = {{"count", gen_img->count},
                    {"size", gen_img->size},
                    {"image_noise", gen_img->noise_sigma},
                    {"seed", seed}};
    ImageGenConfig gen;
    gen.noise_sigma = gen_img->noise_sigma;
    const std::uint64_t sub = Rng(seed).substream("dataset").seed();
    const ImageDataset ds = gen_images(gen_img->count, gen_img->size, sub, gen);
    nn::save_tensor(ctx.dir() / "images.bin", ds.images);
    {
      auto out = ctx.open("labels.csv");
      write_labels_csv(ds, out);
    }
    json balance;
    for (const auto& name : ds.label_names) {
      const auto& v = ds.label(name);
      balance[name] =
          static_cast<double>(std::count(v.begin(), v.end(), 1)) / v.size();
    }
    ctx.finish({{"count", ds.count()}, {"balance", balance},
                {"dataset_seed", sub}});
    return 0;
  }

  // ---- pretrain
  if (pretrain_cmd->parsed()) {
    RunContext ctx("pretrain", out_flag);
    ctx.config() = train_config_json(*pre_cfg, *pre_img, "default");
    ctx.config()["seed"] = seed;
    AlternationConfig cfg = *pre_cfg;
    cfg.seed = Rng(seed).substream("train").seed();
    ctx.config()["train_seed"] = cfg.seed;
    const GeneratedData data = make_image_data(*pre_img, seed, &ctx.config());
    const MaximinSpecs specs = specs_for("default", pre_img->size, 1);
    const nn::ModelParams pro =
        pretrain_protected(data.train, specs.protected_net, cfg);
    nn::save_params(ctx.dir() / "protected.ckpt", specs.protected_net, pro);
    const std::string label = data.train.label_with_role(LabelRole::kProtected);
    const double train_acc =
        nn::accuracy(nn::forward(specs.protected_net, pro, data.train.images),
                     data.train.label(label));
    const double test_acc =
        nn::accuracy(nn::forward(specs.protected_net, pro, data.test.images),
                     data.test.label(label));
    ctx.finish({{"train_accuracy", train_acc}, {"test_accuracy", test_acc}});
    return 0;
  }

  // ---- maximin
  if (maximin_cmd->parsed()) {
    RunContext ctx("maximin", out_flag);
    ctx.config() = train_config_json(*max_cfg, *max_img, *max_arch);
    ctx.config()["seed"] = seed;
    AlternationConfig cfg = *max_cfg;
    cfg.seed = Rng(seed).substream("train").seed();
    ctx.config()["train_seed"] = cfg.seed;
    const GeneratedData data = make_image_data(*max_img, seed, &ctx.config());
    const MaximinSpecs specs = specs_for(*max_arch, max_img->size, 1);
    const MaximinResult result = solve_maximin(data.train, specs, cfg);
    {
      auto out = ctx.open("history.csv");
      write_csv(result.history, out);
    }
    nn::save_params(ctx.dir() / "adversary.ckpt", specs.adversary,
                    result.adversary);
    nn::save_params(ctx.dir() / "protected.ckpt", specs.protected_net,
                    result.protected_params);
    nn::save_params(ctx.dir() / "encoder.ckpt", specs.encoder,
                    result.privatizer.encoder);
    nn::save_params(ctx.dir() / "decoder.ckpt", specs.decoder,
                    result.privatizer.decoder);
    json res;
    res["converged"] = result.history.converged;
    res["iterations"] = result.history.iterations.size();
    if (!result.history.iterations.empty()) {
      const auto& last = result.history.iterations.back();
      res["final"] = {{"adv_loss", last.adv_loss},
                      {"priv_adv_loss", last.priv_adv_loss},
                      {"protected_loss", last.protected_loss},
                      {"noise_max_sq", last.noise_max_sq}};
    }
    ctx.finish(res);
    return 0;
  }

  // ---- evaluate
  if (evaluate_cmd->parsed()) {
    RunContext ctx("evaluate", out_flag);
    const fs::path run_dir(*eval_run_dir);
    std::ifstream mf(run_dir / "manifest.json");
    if (!mf) throw IoError("evaluate: no manifest.json in " + run_dir.string());
    json manifest;
    mf >> manifest;
    if (manifest.at("subcommand") != "maximin") {
      throw ConfigError("evaluate: --run-dir must point at a maximin run");
    }
    const json& prior = manifest.at("config");
    ctx.config() = prior;
    ctx.config()["run_dir"] = run_dir.string();

    ImageOpts img;
    img.count = prior.at("count");
    img.size = prior.at("size");
    img.test_fraction = prior.at("test_fraction");
    img.noise_sigma = prior.at("image_noise");
    AlternationConfig cfg = train_config_from_json(prior);
    cfg.seed = prior.at("train_seed");
    const std::uint64_t seed_prior = prior.at("seed");
    const GeneratedData data = make_image_data(img, seed_prior, nullptr);
    const MaximinSpecs specs =
        specs_for(prior.at("arch").get<std::string>(), img.size, 1);

    MaximinResult result;
    result.adversary = nn::load_params(run_dir / "adversary.ckpt",
                                       specs.adversary);
    result.protected_params =
        nn::load_params(run_dir / "protected.ckpt", specs.protected_net);
    result.privatizer.encoder_spec = specs.encoder;
    result.privatizer.decoder_spec = specs.decoder;
    result.privatizer.encoder =
        nn::load_params(run_dir / "encoder.ckpt", specs.encoder);
    result.privatizer.decoder =
        nn::load_params(run_dir / "decoder.ckpt", specs.decoder);
    result.budget =
        NoiseBudget::from_per_image(cfg.per_image_budget, data.train.count());

    const EvalReport rep =
        evaluate_privatization(result, data.train, data.test, specs, cfg);
    {
      auto out = ctx.open("evaluation.csv");
      write_csv(rep, out);
    }
    ctx.finish(eval_to_json(rep));
    return 0;
  }

  // ---- grad-check
  if (gradcheck_cmd->parsed()) {
    RunContext ctx("grad-check", out_flag);
    ctx.config() = {{"preset", *gc_preset}, {"seed", seed}, {"tol", *gc_tol}};
    nn::GradCheckResult r;
    if (*gc_preset == "linear") {
      r = nn::grad_check(nn::NetworkSpec::make({5}, {nn::LayerSpec::dense(4)}),
                         seed);
    } else if (*gc_preset == "dense-small") {
      r = nn::grad_check(
          nn::NetworkSpec::make({6}, {nn::LayerSpec::dense(8),
                                      nn::LayerSpec::relu(),
                                      nn::LayerSpec::dense(3)}),
          seed);
    } else if (*gc_preset == "conv-small") {
      r = nn::grad_check(
          nn::NetworkSpec::make(
              {8, 8, 1},
              {nn::LayerSpec::conv2d(3, 3), nn::LayerSpec::relu(),
               nn::LayerSpec::maxpool(2), nn::LayerSpec::flatten(),
               nn::LayerSpec::dense(4)}),
          seed);
    } else if (*gc_preset == "composite") {
      r = privatizer_grad_check(seed);
    } else {
      throw ConfigError("unknown --preset: " + *gc_preset);
    }
    std::cout << "max_rel_error=" << r.max_rel_error
              << " checked=" << r.checked << " skipped=" << r.skipped << "\n";
    ctx.finish({{"max_rel_error", r.max_rel_error},
                {"checked", r.checked},
                {"skipped", r.skipped},
                {"pass", r.max_rel_error < *gc_tol}});
    if (r.max_rel_error >= *gc_tol) {
      throw NumericError("grad-check failed: max_rel_error above tolerance");
    }
    return 0;
  }

  std::cerr << app.help() << "\n";
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"privatizer construction and evaluation toolkit"};
  app.require_subcommand(0, 1);
  app.set_config("--config", "", "key=value config file; flags take precedence");

  std::string out_flag;
  std::uint64_t seed = 1;
  app.add_option("--out", out_flag, "output directory")->configurable(true);
  app.add_option("--seed", seed, "root seed for all randomness")
      ->configurable(true);

  // gen-toy
  index toy_m = 100, toy_n = 5;
  double toy_sigma = 0.05;
  CLI::App* gen_toy_cmd =
      app.add_subcommand("gen-toy", "generate uniform toy data with a linear "
                                    "private label");
  gen_toy_cmd->add_option("--m", toy_m, "instances");
  gen_toy_cmd->add_option("--n", toy_n, "features");
  gen_toy_cmd->add_option("--noise-sigma", toy_sigma, "label noise");

  // greedy / brute / compare
  SourceOpts greedy_src, brute_src, compare_src, privatize_src, report_src;
  BudgetOpts greedy_budget, brute_budget, compare_budget, privatize_budget,
      report_budget;
  CLI::App* greedy_cmd =
      app.add_subcommand("greedy", "greedy feature-removal privatizer");
  add_source_flags(greedy_cmd, &greedy_src);
  add_budget_flags(greedy_cmd, &greedy_budget);
  CLI::App* brute_cmd =
      app.add_subcommand("brute", "exhaustive optimal feature removal");
  add_source_flags(brute_cmd, &brute_src);
  add_budget_flags(brute_cmd, &brute_budget);
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "greedy vs brute on one instance");
  add_source_flags(compare_cmd, &compare_src);
  add_budget_flags(compare_cmd, &compare_budget);

  // ratio-experiment
  std::vector<index> ratio_n{4}, ratio_m{10, 100, 1000};
  int ratio_trials = 100;
  double ratio_alpha = 0.3;
  CLI::App* ratio_cmd = app.add_subcommand(
      "ratio-experiment", "fraction of trials where greedy hits the optimum");
  ratio_cmd->add_option("--n", ratio_n, "feature counts")->delimiter(',');
  ratio_cmd->add_option("--m", ratio_m, "instance counts")->delimiter(',');
  ratio_cmd->add_option("--trials", ratio_trials, "trials per cell");
  ratio_cmd->add_option("--alpha", ratio_alpha, "budget fraction");

  // privatize-linear
  CLI::App* privatize_cmd = app.add_subcommand(
      "privatize-linear", "apply the greedy removal and emit privatized data");
  add_source_flags(privatize_cmd, &privatize_src);
  add_budget_flags(privatize_cmd, &privatize_budget);

  // report
  std::vector<index> report_removed;
  CLI::App* report_cmd = app.add_subcommand(
      "report", "before/after loss report for every label");
  add_source_flags(report_cmd, &report_src);
  add_budget_flags(report_cmd, &report_budget);
  report_cmd->add_option("--removed", report_removed,
                         "explicit removal set (indices)")
      ->delimiter(',');

  // gen-images
  ImageOpts gen_img;
  CLI::App* gen_images_cmd = app.add_subcommand(
      "gen-images", "generate the synthetic three-factor image set");
  add_image_flags(gen_images_cmd, &gen_img);

  // pretrain
  ImageOpts pre_img;
  AlternationConfig pre_cfg;
  CLI::App* pretrain_cmd = app.add_subcommand(
      "pretrain", "train the protected model on clean images");
  add_image_flags(pretrain_cmd, &pre_img);
  add_train_flags(pretrain_cmd, &pre_cfg);

  // maximin
  ImageOpts max_img;
  AlternationConfig max_cfg;
  std::string max_arch = "default";
  CLI::App* maximin_cmd = app.add_subcommand(
      "maximin", "alternating maximin training of the privatizer");
  add_image_flags(maximin_cmd, &max_img);
  add_train_flags(maximin_cmd, &max_cfg);
  maximin_cmd->add_option("--arch", max_arch, "preset family: default | hands");

  // evaluate
  std::string eval_run_dir;
  CLI::App* evaluate_cmd = app.add_subcommand(
      "evaluate", "fixed/retrained adversary accuracy tables for a maximin run");
  evaluate_cmd->add_option("--run-dir", eval_run_dir, "maximin output directory")
      ->required();

  // grad-check
  std::string gc_preset = "conv-small";
  double gc_tol = 1e-4;
  CLI::App* gradcheck_cmd = app.add_subcommand(
      "grad-check", "finite-difference gradient verification");
  gradcheck_cmd->add_option("--preset", gc_preset,
                            "linear | dense-small | conv-small | composite");
  gradcheck_cmd->add_option("--tol", gc_tol, "pass threshold");

  // parent-level --seed/--out/--config may appear after the subcommand name
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> argv;
  argv.push_back("privkit");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    return dispatch(app, out_flag, seed, gen_toy_cmd, &toy_m, &toy_n,
                    &toy_sigma, greedy_cmd, &greedy_src, &greedy_budget,
                    brute_cmd, &brute_src, &brute_budget, compare_cmd,
                    &compare_src, &compare_budget, ratio_cmd, &ratio_n,
                    &ratio_m, &ratio_trials, &ratio_alpha, privatize_cmd,
                    &privatize_src, &privatize_budget, report_cmd, &report_src,
                    &report_budget, &report_removed, gen_images_cmd, &gen_img,
                    pretrain_cmd, &pre_img, &pre_cfg, maximin_cmd, &max_img,
                    &max_cfg, &max_arch, evaluate_cmd, &eval_run_dir,
                    gradcheck_cmd, &gc_preset, &gc_tol);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace privkit::cli
