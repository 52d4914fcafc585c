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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace privkit::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column, or -1.
  int column(std::string_view name) const;
};

/// RFC 4180 reader: quoted fields, doubled-quote escapes, CR/LF line ends.
/// First row is the header.
Table read(std::istream& in, char sep = ',');
Table read_file(const std::filesystem::path& path, char sep = ',');

/// A field counts as missing when empty or literal "NA".
bool is_missing(std::string_view field);

/// Strict double parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view field);

/// Quotes a field per RFC 4180 when it contains separator, quote or newline.
std::string escape(std::string_view field, char sep = ',');

/// Row-at-a-time writer with RFC 4180 quoting.
class Writer {
 public:
  explicit Writer(std::ostream& out, char sep = ',') : out_(out), sep_(sep) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
  char sep_;
};

/// Shortest round-trip decimal form; deterministic across runs.
std::string format_double(double v);

}  // namespace privkit::csv
