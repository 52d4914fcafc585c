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

#include "privkit/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "privkit/errors.hpp"

namespace privkit::csv {

int Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

// Splits the full character stream into records, honoring quotes.
std::vector<std::vector<std::string>> parse_records(std::istream& in, char sep) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool record_started = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    record_started = false;
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) {
          in_quotes = true;
          field_started = true;
          record_started = true;
        } else {
          field.push_back(c);
        }
        break;
      case '\r':
        break;  // swallowed; LF terminates the record
      case '\n':
        if (record_started || field_started || !field.empty() ||
            !record.empty()) {
          end_record();
        }
        break;
      default:
        if (c == sep) {
          end_field();
          record_started = true;
        } else {
          field.push_back(c);
          field_started = true;
          record_started = true;
        }
    }
  }
  if (in_quotes) throw IoError("csv: unterminated quoted field");
  if (record_started || field_started || !field.empty() || !record.empty()) {
    end_record();
  }
  return records;
}

}  // namespace

Table read(std::istream& in, char sep) {
  auto records = parse_records(in, sep);
  if (records.empty()) throw IoError("csv: empty input");
  Table t;
  t.header = std::move(records.front());
  t.rows.assign(std::make_move_iterator(records.begin() + 1),
                std::make_move_iterator(records.end()));
  return t;
}

Table read_file(const std::filesystem::path& path, char sep) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("csv: cannot open " + path.string());
  return read(in, sep);
}

bool is_missing(std::string_view field) {
  return field.empty() || field == "NA";
}

std::optional<double> parse_double(std::string_view field) {
  if (field.empty()) return std::nullopt;
  // std::from_chars<double> is incomplete on some libstdc++ versions; strtod
  // with end-pointer check covers the same contract.
  std::string buf(field);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || errno == ERANGE) return std::nullopt;
  return v;
}

std::string escape(std::string_view field, char sep) {
  const bool needs_quote =
      field.find_first_of(std::string{sep, '"', '\n', '\r'}) !=
      std::string_view::npos;
  if (!needs_quote) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void Writer::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << sep_;
    out_ << escape(fields[i], sep_);
  }
  out_ << "\n";
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace privkit::csv
