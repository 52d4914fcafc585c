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
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "privkit/linalg.hpp"
#include "privkit/nn/tensor.hpp"

namespace privkit {

enum class LabelRole { kPrivate, kPublic, kProtected };

std::string to_string(LabelRole role);
LabelRole role_from_string(const std::string& s);

/// Feature matrix plus named label vectors with privacy roles.
struct LabeledDataset {
  Matrix X;  // m instances x n features
  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;  // declaration order
  std::map<std::string, Vector> labels;
  std::map<std::string, LabelRole> label_roles;

  index m() const { return X.rows(); }
  index n() const { return X.cols(); }
  const Vector& label(const std::string& name) const;
  LabelRole role(const std::string& name) const;
  /// Name of the unique private label; throws ConfigError if not exactly one.
  std::string private_label() const;
  void validate() const;
};

/// Column selection for load_csv. Label roles ride along with the names.
struct CsvSchema {
  std::vector<std::string> features;
  std::vector<std::pair<std::string, LabelRole>> labels;
  char separator = ',';

  static CsvSchema from_json_file(const std::filesystem::path& path);
  /// Built-in schemas: "beijing-pm25" (dew point private) and
  /// "wine-quality" (alcohol private, ';'-separated source file).
  static CsvSchema preset(const std::string& name);
};

struct LoadResult {
  LabeledDataset dataset;
  std::size_t rows_dropped = 0;
};

/// Reads a CSV with header, keeping only schema columns. Rows with a missing
/// or unparseable value in any selected column are dropped.
LoadResult load_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Per-column (min, max) recorded when a normalization was fitted.
struct NormalizationSpec {
  struct Range {
    double min = 0.0;
    double max = 0.0;
  };
  std::map<std::string, Range> columns;
};

/// Min-max scales every feature and label column to [0, 1]. Constant columns
/// map to 0.
std::pair<LabeledDataset, NormalizationSpec> normalize(const LabeledDataset& ds);

/// Toy data: X entries iid unif(0,1); private label y = X theta + sigma~N(0,1)
/// noise with theta_j ~ unif(0,1). sigma defaults to 0.05 so y is nearly but
/// not exactly linear in X.
LabeledDataset gen_toy(index m, index n, std::uint64_t seed,
                       double noise_sigma = 0.05);

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds,
                                                double test_fraction,
                                                std::uint64_t seed);

/// Image batch with class-index labels.
struct ImageDataset {
  nn::Tensor images;  // count x height x width x channels, values in [0,1]
  std::vector<std::string> label_names;
  std::map<std::string, std::vector<int>> labels;
  std::map<std::string, LabelRole> label_roles;
  int num_classes = 2;

  index count() const { return images.rank() ? images.dim(0) : 0; }
  const std::vector<int>& label(const std::string& name) const;
  std::string label_with_role(LabelRole role) const;
  void validate() const;
};

/// Knobs for the synthetic image generator. Amplitudes are chosen so the
/// private factor is the cheapest to disturb: the stripe field is weak while
/// blob and border are strong.
struct ImageGenConfig {
  double background = 0.45;
  double stripe_amp = 0.12;   // private: stripe orientation
  double blob_amp = 0.35;     // public: blob left vs right
  double border_low = 0.10;   // protected: border marker dark vs bright
  double border_high = 0.90;
  double noise_sigma = 0.03;  // pixel noise; 0 leaves exact template values
};

/// Grayscale images built from three independent binary factors:
/// stripe orientation (private), blob position (public), border marker
/// (protected). Each factor is learnable on clean data by the reference
/// adversary architecture.
ImageDataset gen_images(index count, int size, std::uint64_t seed,
                        const ImageGenConfig& cfg = {});

std::pair<ImageDataset, ImageDataset> split(const ImageDataset& ds,
                                            double test_fraction,
                                            std::uint64_t seed);

}  // namespace privkit
