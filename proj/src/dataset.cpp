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

#include "privkit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "privkit/csv.hpp"
#include "privkit/rng.hpp"

namespace privkit {

std::string to_string(LabelRole role) {
  switch (role) {
    case LabelRole::kPrivate:
      return "private";
    case LabelRole::kPublic:
      return "public";
    case LabelRole::kProtected:
      return "protected";
  }
  return "?";
}

LabelRole role_from_string(const std::string& s) {
  if (s == "private") return LabelRole::kPrivate;
  if (s == "public") return LabelRole::kPublic;
  if (s == "protected") return LabelRole::kProtected;
  throw ConfigError("unknown label role: " + s);
}

const Vector& LabeledDataset::label(const std::string& name) const {
  const auto it = labels.find(name);
  if (it == labels.end()) throw ConfigError("no such label: " + name);
  return it->second;
}

LabelRole LabeledDataset::role(const std::string& name) const {
  const auto it = label_roles.find(name);
  if (it == label_roles.end()) throw ConfigError("no such label: " + name);
  return it->second;
}

std::string LabeledDataset::private_label() const {
  std::string found;
  for (const auto& [name, role] : label_roles) {
    if (role == LabelRole::kPrivate) {
      if (!found.empty()) throw ConfigError("multiple private labels");
      found = name;
    }
  }
  if (found.empty()) throw ConfigError("no private label");
  return found;
}

void LabeledDataset::validate() const {
  if (static_cast<index>(feature_names.size()) != n()) {
    throw DimensionError("dataset: feature_names size != n");
  }
  for (const auto& name : label_names) {
    if (label(name).size() != m()) {
      throw DimensionError("dataset: label length != m for " + name);
    }
    role(name);
  }
}

CsvSchema CsvSchema::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("schema: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("schema: bad JSON in " + path.string() + ": " + e.what());
  }
  CsvSchema schema;
  if (!j.contains("features") || !j.contains("labels")) {
    throw ConfigError("schema: needs \"features\" and \"labels\"");
  }
  for (const auto& f : j.at("features")) {
    schema.features.push_back(f.get<std::string>());
  }
  for (const auto& [name, role] : j.at("labels").items()) {
    schema.labels.emplace_back(name, role_from_string(role.get<std::string>()));
  }
  if (j.contains("separator")) {
    const auto s = j.at("separator").get<std::string>();
    if (s.size() != 1) throw ConfigError("schema: separator must be one char");
    schema.separator = s[0];
  }
  return schema;
}

CsvSchema CsvSchema::preset(const std::string& name) {
  CsvSchema s;
  if (name == "beijing-pm25") {
    s.features = {"year", "month", "day", "hour", "TEMP", "PRES", "Iws"};
    s.labels = {{"DEWP", LabelRole::kPrivate}, {"pm2.5", LabelRole::kPublic}};
    return s;
  }
  if (name == "wine-quality") {
    s.features = {"fixed acidity",  "volatile acidity",
                  "citric acid",    "residual sugar",
                  "chlorides",      "free sulfur dioxide",
                  "total sulfur dioxide"};
    s.labels = {{"alcohol", LabelRole::kPrivate},
                {"density", LabelRole::kPublic},
                {"pH", LabelRole::kPublic},
                {"sulphates", LabelRole::kPublic},
                {"quality", LabelRole::kPublic}};
    s.separator = ';';
    return s;
  }
  throw ConfigError("unknown schema preset: " + name);
}

LoadResult load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  const csv::Table table = csv::read_file(path, schema.separator);

  std::vector<int> feature_cols;
  for (const auto& f : schema.features) {
    const int c = table.column(f);
    if (c < 0) throw ConfigError("load_csv: feature column absent: " + f);
    feature_cols.push_back(c);
  }
  std::vector<int> label_cols;
  for (const auto& [name, role] : schema.labels) {
    const int c = table.column(name);
    if (c < 0) throw ConfigError("load_csv: label column absent: " + name);
    label_cols.push_back(c);
  }

  const std::size_t n = schema.features.size();
  const std::size_t k = schema.labels.size();
  std::vector<double> xdata;
  std::vector<std::vector<double>> ydata(k);
  std::size_t dropped = 0;

  std::vector<double> row_buf(n + k);
  for (const auto& row : table.rows) {
    bool ok = true;
    for (std::size_t j = 0; j < n + k; ++j) {
      const int c = j < n ? feature_cols[j] : label_cols[j - n];
      if (static_cast<std::size_t>(c) >= row.size() ||
          csv::is_missing(row[static_cast<std::size_t>(c)])) {
        ok = false;
        break;
      }
      const auto v = csv::parse_double(row[static_cast<std::size_t>(c)]);
      if (!v || !std::isfinite(*v)) {
        ok = false;
        break;
      }
      row_buf[j] = *v;
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    xdata.insert(xdata.end(), row_buf.begin(), row_buf.begin() + n);
    for (std::size_t j = 0; j < k; ++j) ydata[j].push_back(row_buf[n + j]);
  }

  const index m = static_cast<index>(ydata.empty() ? xdata.size() / std::max<std::size_t>(n, 1)
                                                   : ydata[0].size());
  if (m == 0) throw IoError("load_csv: no rows survive missing-value removal");

  LoadResult result;
  result.rows_dropped = dropped;
  result.dataset.X = make_matrix(m, static_cast<index>(n), xdata);
  result.dataset.feature_names = schema.features;
  for (std::size_t j = 0; j < k; ++j) {
    const auto& [name, role] = schema.labels[j];
    result.dataset.label_names.push_back(name);
    result.dataset.labels[name] = make_vector(ydata[j]);
    result.dataset.label_roles[name] = role;
  }
  result.dataset.validate();
  return result;
}

namespace {

void minmax_scale(Eigen::Ref<Vector> col, const std::string& name,
                  NormalizationSpec& spec) {
  const double lo = col.minCoeff();
  const double hi = col.maxCoeff();
  spec.columns[name] = NormalizationSpec::Range{lo, hi};
  if (hi > lo) {
    col = (col.array() - lo) / (hi - lo);
  } else {
    col.setZero();  // constant column convention
  }
}

}  // namespace

std::pair<LabeledDataset, NormalizationSpec> normalize(const LabeledDataset& ds) {
  if (ds.m() < 2) throw ConfigError("normalize: need at least 2 rows");
  LabeledDataset out = ds;
  NormalizationSpec spec;
  for (index j = 0; j < out.n(); ++j) {
    minmax_scale(out.X.col(j), out.feature_names[static_cast<std::size_t>(j)],
                 spec);
  }
  for (const auto& name : out.label_names) {
    minmax_scale(out.labels.at(name), name, spec);
  }
  return {std::move(out), spec};
}

LabeledDataset gen_toy(index m, index n, std::uint64_t seed,
                       double noise_sigma) {
  if (m < 1 || n < 1) throw ConfigError("gen_toy: m and n must be >= 1");
  Rng root(seed);
  Rng rx = root.substream("toy-X");
  Rng rtheta = root.substream("toy-theta");
  Rng rnoise = root.substream("toy-noise");

  LabeledDataset ds;
  ds.X = Matrix(m, n);
  for (index i = 0; i < m; ++i) {
    for (index j = 0; j < n; ++j) ds.X(i, j) = rx.uniform();
  }
  Vector theta(n);
  for (index j = 0; j < n; ++j) theta(j) = rtheta.uniform();
  Vector y = ds.X * theta;
  if (noise_sigma != 0.0) {
    for (index i = 0; i < m; ++i) y(i) += noise_sigma * rnoise.normal();
  }
  for (index j = 0; j < n; ++j) {
    ds.feature_names.push_back("f" + std::to_string(j));
  }
  ds.label_names.push_back("target");
  ds.labels["target"] = std::move(y);
  ds.label_roles["target"] = LabelRole::kPrivate;
  return ds;
}

namespace {

std::vector<std::size_t> split_test_indices(std::size_t m, double fraction,
                                            std::uint64_t seed,
                                            std::vector<std::size_t>* train_out) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("split: test_fraction must be in (0, 1)");
  }
  if (m < 2) throw ConfigError("split: need at least 2 rows");
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  Rng(seed).substream("split").shuffle(idx);
  std::size_t test_count = static_cast<std::size_t>(
      std::lround(static_cast<double>(m) * fraction));
  test_count = std::clamp<std::size_t>(test_count, 1, m - 1);
  std::vector<std::size_t> test(idx.begin(), idx.begin() + test_count);
  train_out->assign(idx.begin() + test_count, idx.end());
  return test;
}

LabeledDataset take_rows(const LabeledDataset& ds,
                         const std::vector<std::size_t>& rows) {
  LabeledDataset out;
  out.feature_names = ds.feature_names;
  out.label_names = ds.label_names;
  out.label_roles = ds.label_roles;
  out.X = Matrix(static_cast<index>(rows.size()), ds.n());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<index>(i)) = ds.X.row(static_cast<index>(rows[i]));
  }
  for (const auto& name : ds.label_names) {
    const Vector& src = ds.labels.at(name);
    Vector v(static_cast<index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      v(static_cast<index>(i)) = src(static_cast<index>(rows[i]));
    }
    out.labels[name] = std::move(v);
  }
  return out;
}

}  // namespace

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds,
                                                double test_fraction,
                                                std::uint64_t seed) {
  std::vector<std::size_t> train_idx;
  const auto test_idx = split_test_indices(static_cast<std::size_t>(ds.m()),
                                           test_fraction, seed, &train_idx);
  return {take_rows(ds, train_idx), take_rows(ds, test_idx)};
}

const std::vector<int>& ImageDataset::label(const std::string& name) const {
  const auto it = labels.find(name);
  if (it == labels.end()) throw ConfigError("no such label: " + name);
  return it->second;
}

std::string ImageDataset::label_with_role(LabelRole role) const {
  for (const auto& name : label_names) {
    if (label_roles.at(name) == role) return name;
  }
  throw ConfigError("no label with role " + to_string(role));
}

void ImageDataset::validate() const {
  if (images.rank() != 4) throw DimensionError("images must be NHWC");
  for (const auto& name : label_names) {
    const auto& v = label(name);
    if (static_cast<index>(v.size()) != count()) {
      throw DimensionError("image label length != count for " + name);
    }
    for (const int c : v) {
      if (c < 0 || c >= num_classes) {
        throw DimensionError("class index out of range for " + name);
      }
    }
  }
}

ImageDataset gen_images(index count, int size, std::uint64_t seed,
                        const ImageGenConfig& cfg) {
  if (size < 8) throw ConfigError("gen_images: size must be >= 8");
  if (count < 1) throw ConfigError("gen_images: count must be >= 1");
  Rng root(seed);
  Rng rfactors = root.substream("image-factors");
  Rng rnoise = root.substream("image-noise");

  ImageDataset ds;
  ds.label_names = {"stripe", "blob", "border"};
  ds.label_roles = {{"stripe", LabelRole::kPrivate},
                    {"blob", LabelRole::kPublic},
                    {"border", LabelRole::kProtected}};
  ds.num_classes = 2;

  std::vector<int>& stripe = ds.labels["stripe"];
  std::vector<int>& blob = ds.labels["blob"];
  std::vector<int>& border = ds.labels["border"];
  for (index i = 0; i < count; ++i) {
    stripe.push_back(static_cast<int>(rfactors.next_u64() & 1));
    blob.push_back(static_cast<int>(rfactors.next_u64() & 1));
    border.push_back(static_cast<int>(rfactors.next_u64() & 1));
  }

  const int blob_side = std::max(3, size / 4);
  const int blob_row0 = (size - blob_side) / 2;
  const int blob_left0 = 2;
  const int blob_right0 = size - 2 - blob_side;

  ds.images = nn::Tensor({count, size, size, 1});
  double* px = ds.images.data();
  for (index img = 0; img < count; ++img) {
    double* p = px + img * size * size;
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        double v = cfg.background;
        const bool on_border =
            r == 0 || c == 0 || r == size - 1 || c == size - 1;
        if (on_border) {
          v = border[static_cast<std::size_t>(img)] ? cfg.border_high
                                                    : cfg.border_low;
        } else if (r >= 2 && r < size - 2 && c >= 2 && c < size - 2) {
          // Interior stripe field; orientation is the private factor.
          const int parity =
              stripe[static_cast<std::size_t>(img)] ? (c % 2) : (r % 2);
          v += parity ? cfg.stripe_amp : -cfg.stripe_amp;
        }
        if (!on_border && r >= blob_row0 && r < blob_row0 + blob_side) {
          const int c0 = blob[static_cast<std::size_t>(img)] ? blob_right0
                                                             : blob_left0;
          if (c >= c0 && c < c0 + blob_side) v += cfg.blob_amp;
        }
        p[r * size + c] = v;
      }
    }
  }
  if (cfg.noise_sigma != 0.0) {
    for (index i = 0; i < ds.images.size(); ++i) {
      double v = px[i] + cfg.noise_sigma * rnoise.normal();
      px[i] = std::clamp(v, 0.0, 1.0);
    }
  }
  ds.validate();
  return ds;
}

std::pair<ImageDataset, ImageDataset> split(const ImageDataset& ds,
                                            double test_fraction,
                                            std::uint64_t seed) {
  std::vector<std::size_t> train_idx;
  const auto test_idx = split_test_indices(static_cast<std::size_t>(ds.count()),
                                           test_fraction, seed, &train_idx);
  const int h = static_cast<int>(ds.images.dim(1));
  const int w = static_cast<int>(ds.images.dim(2));
  const int ch = static_cast<int>(ds.images.dim(3));
  const index pix = static_cast<index>(h) * w * ch;

  auto take = [&](const std::vector<std::size_t>& rows) {
    ImageDataset out;
    out.label_names = ds.label_names;
    out.label_roles = ds.label_roles;
    out.num_classes = ds.num_classes;
    out.images = nn::Tensor({static_cast<index>(rows.size()), h, w, ch});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::copy_n(ds.images.data() + static_cast<index>(rows[i]) * pix, pix,
                  out.images.data() + static_cast<index>(i) * pix);
    }
    for (const auto& name : ds.label_names) {
      const auto& src = ds.labels.at(name);
      auto& dst = out.labels[name];
      dst.reserve(rows.size());
      for (const std::size_t r : rows) dst.push_back(src[r]);
    }
    return out;
  };
  return {take(train_idx), take(test_idx)};
}

}  // namespace privkit
