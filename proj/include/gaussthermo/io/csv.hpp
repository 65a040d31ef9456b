// Copyright 2026 The gaussthermo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Comma-separated output with '#' metadata lines, and a matching reader.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gaussthermo/errors.hpp"

namespace gaussthermo::io {

/// Scientific notation with 17 significant digits; "nan"/"inf"/"-inf" for
/// non-finite values.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

class CsvRow {
 public:
  CsvRow& add(double v) { return push(format_double(v)); }
  CsvRow& add(int v) { return push(std::to_string(v)); }
  CsvRow& add(unsigned long long v) { return push(std::to_string(v)); }
  CsvRow& add(unsigned long v) { return push(std::to_string(v)); }
  CsvRow& add(bool v) { return push(v ? "1" : "0"); }
  CsvRow& add(std::string_view s) { return push(std::string(s)); }
  CsvRow& add(const char* s) { return push(s); }
  CsvRow& empty() { return push(""); }
  template <class T>
  CsvRow& add(const std::optional<T>& v) {
    return v ? add(*v) : empty();
  }

  const std::vector<std::string>& fields() const { return fields_; }

 private:
  CsvRow& push(std::string s) {
    if (s.find_first_of(",\n\"") != std::string::npos) {
      throw StructuralError("csv: field contains a separator: " + s);
    }
    fields_.push_back(std::move(s));
    return *this;
  }
  std::vector<std::string> fields_;
};

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  /// One "# key: value" line per entry; call before header().
  void metadata(std::string_view key, std::string_view value) {
    if (header_written_) throw StructuralError("csv: metadata after header");
    out_ << "# " << key << ": " << value << '\n';
  }

  void header(const std::vector<std::string>& columns) {
    if (header_written_) throw StructuralError("csv: header written twice");
    columns_ = columns.size();
    write_line(columns);
    header_written_ = true;
  }

  void row(const CsvRow& r) {
    if (!header_written_) throw StructuralError("csv: row before header");
    if (r.fields().size() != columns_) {
      throw StructuralError("csv: row has " + std::to_string(r.fields().size()) +
                            " fields, header has " + std::to_string(columns_));
    }
    write_line(r.fields());
  }

  void flush() {
    out_.flush();
    if (!out_) throw IoError("csv: write failed");
  }

 private:
  void write_line(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

  std::ostream& out_;
  std::size_t columns_ = 0;
  bool header_written_ = false;
};

struct CsvTable {
  std::map<std::string, std::string> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw StructuralError("csv: no column named '" + std::string(name) + "'");
  }

  const std::string& cell(std::size_t row, std::string_view name) const {
    return rows.at(row).at(column(name));
  }

  /// Empty cells read as nullopt.
  std::optional<double> number(std::size_t row, std::string_view name) const {
    const std::string& s = cell(row, name);
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) {
      throw StructuralError("csv: '" + s + "' in column " + std::string(name) +
                            " is not a number");
    }
    return v;
  }

  double value(std::size_t row, std::string_view name) const {
    const auto v = number(row, name);
    if (!v) throw StructuralError("csv: empty cell in column " + std::string(name));
    return *v;
  }
};

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!have_header && line.starts_with("#")) {
      const auto colon = line.find(": ");
      if (colon != std::string::npos && colon > 2) {
        t.metadata[line.substr(2, colon - 2)] = line.substr(colon + 2);
      }
      continue;
    }
    if (!have_header) {
      t.columns = split_fields(line);
      have_header = true;
      continue;
    }
    auto fields = split_fields(line);
    if (fields.size() != t.columns.size()) {
      throw StructuralError("csv: ragged row " + std::to_string(t.rows.size() + 1));
    }
    t.rows.push_back(std::move(fields));
  }
  if (!have_header) throw StructuralError("csv: missing header row");
  return t;
}

}  // namespace gaussthermo::io
