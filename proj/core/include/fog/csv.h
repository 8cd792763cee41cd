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

#ifndef FOG_CSV_H_
#define FOG_CSV_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fog::csv {

// Plain comma-separated text: no quoting, optional trailing '\r'.
struct Table {
  std::filesystem::path source;
  std::vector<std::string> header;
  // Data rows; row i is line i + 2 of the file.
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> Find(std::string_view column) const;
  // Throws kSchema when the column is missing.
  std::size_t Require(std::string_view column) const;
};

// Throws kIo if unreadable and kParse on ragged rows.
Table Read(const std::filesystem::path& path);

std::vector<std::string> SplitLine(std::string_view line);

// Throw kParse naming the file, 0-based data row index and column.
double ParseDouble(const Table& table, std::size_t row, std::size_t col);
long long ParseInt(const Table& table, std::size_t row, std::size_t col);

// Creates parent directories; throws kIo on failure.
void WriteText(const std::filesystem::path& path, const std::string& text);
std::string ReadText(const std::filesystem::path& path);

}  // namespace fog::csv

#endif  // FOG_CSV_H_
