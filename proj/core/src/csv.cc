/*
 * Copyright 2026 The FogType Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fog/csv.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fog/error.h"

namespace fog::csv {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

[[noreturn]] void CellError(const Table& table, std::size_t row, std::size_t col,
                            const char* what) {
  const std::string column =
      col < table.header.size() ? table.header[col] : std::to_string(col);
  Fail(ErrorKind::kParse, table.source.string() + ": row " +
                              std::to_string(row) + ", column " + column +
                              ": " + what + " '" + table.rows[row][col] + "'");
}

}  // namespace

std::optional<std::size_t> Table::Find(std::string_view column) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) return i;
  }
  return std::nullopt;
}

std::size_t Table::Require(std::string_view column) const {
  if (auto index = Find(column)) return *index;
  Fail(ErrorKind::kSchema,
       source.string() + ": missing column '" + std::string(column) + "'");
}

std::vector<std::string> SplitLine(std::string_view line) {
  std::vector<std::string> fields;
  line = Trim(line);
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

Table Read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path.string());
  Table table;
  table.source = path;
  std::string line;
  if (!std::getline(in, line)) {
    Fail(ErrorKind::kSchema, path.string() + ": empty file (no header)");
  }
  table.header = SplitLine(line);
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    auto fields = SplitLine(line);
    if (fields.size() != table.header.size()) {
      Fail(ErrorKind::kParse,
           path.string() + ": row " + std::to_string(table.rows.size()) +
               " has " + std::to_string(fields.size()) + " fields, header has " +
               std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

double ParseDouble(const Table& table, std::size_t row, std::size_t col) {
  const std::string& cell = table.rows[row][col];
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || cell.empty()) {
    CellError(table, row, col, "not a number");
  }
  return value;
}

long long ParseInt(const Table& table, std::size_t row, std::size_t col) {
  const std::string& cell = table.rows[row][col];
  long long value = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    CellError(table, row, col, "not an integer");
  }
  return value;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) Fail(ErrorKind::kIo, "write failed for " + path.string());
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace fog::csv
