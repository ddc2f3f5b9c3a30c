// Copyright 2026 The gradissect Authors
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

#include "gradissect/harness/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gradissect/core/error.hpp"

namespace gradissect::harness {

namespace {

constexpr std::string_view kDigestPrefix = "# config_digest=";
constexpr std::string_view kBaseHeader = "experiment,method,seed,step,loss";

void check_field(const std::string& s) {
  if (s.find_first_of(",\n\r\"") != std::string::npos) {
    throw ContractError("to_csv: field contains a delimiter: '" + s + "'");
  }
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <class T>
T parse_number(std::string_view s, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ContractError("parse_csv: bad number '" + std::string(s) + "' on line " + std::to_string(line_no));
  }
  return value;
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  if (ec != std::errc()) throw ContractError("format_real: conversion failed");
  return std::string(buf, ptr);
}

std::string to_csv(std::span<const RunRecord> records) {
  require(!records.empty(), "to_csv: records must be non-empty");
  const std::vector<std::string>& aux = records.front().aux_names;
  std::string out;
  if (!records.front().meta.config_digest.empty()) {
    out += kDigestPrefix;
    out += records.front().meta.config_digest;
    out += '\n';
  }
  out += kBaseHeader;
  for (const std::string& name : aux) {
    check_field(name);
    out += ',';
    out += name;
  }
  out += '\n';
  for (const RunRecord& r : records) {
    if (r.aux_names != aux) throw ContractError("to_csv: records disagree on aux columns");
    check_field(r.meta.experiment);
    check_field(r.meta.method);
    const std::string prefix = r.meta.experiment + ',' + r.meta.method + ',' + std::to_string(r.meta.seed) + ',';
    for (const RunRow& row : r.rows) {
      out += prefix;
      out += std::to_string(row.step);
      out += ',';
      out += format_real(row.loss);
      for (double a : row.aux) {
        out += ',';
        out += format_real(a);
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<RunRecord> parse_csv(std::string_view text) {
  std::vector<RunRecord> records;
  std::string digest;
  std::vector<std::string> aux_names;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!have_header) {
      if (line_no == 1 && line.starts_with(kDigestPrefix)) {
        digest = std::string(line.substr(kDigestPrefix.size()));
        continue;
      }
      if (!line.starts_with(kBaseHeader)) throw ContractError("parse_csv: missing header");
      const auto cols = split(line);
      for (std::size_t i = 5; i < cols.size(); ++i) aux_names.emplace_back(cols[i]);
      have_header = true;
      continue;
    }
    const auto cols = split(line);
    if (cols.size() != 5 + aux_names.size()) {
      throw ContractError("parse_csv: wrong column count on line " + std::to_string(line_no));
    }
    const auto seed = parse_number<std::uint64_t>(cols[2], line_no);
    if (records.empty() || records.back().meta.experiment != cols[0] || records.back().meta.method != cols[1] ||
        records.back().meta.seed != seed) {
      RunRecord r;
      r.meta.experiment = std::string(cols[0]);
      r.meta.method = std::string(cols[1]);
      r.meta.seed = seed;
      r.meta.config_digest = digest;
      r.aux_names = aux_names;
      records.push_back(std::move(r));
    }
    std::vector<double> aux;
    for (std::size_t i = 5; i < cols.size(); ++i) aux.push_back(parse_number<double>(cols[i], line_no));
    records.back().add_row(parse_number<std::int64_t>(cols[3], line_no), parse_number<double>(cols[4], line_no),
                           std::move(aux));
  }
  if (!have_header) throw ContractError("parse_csv: missing header");
  return records;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace gradissect::harness
