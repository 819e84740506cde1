/* Copyright 2026 The impedans Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

// File helpers: atomic writes and CSV formatting.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace impedans::io {

/// Writes to a temporary sibling and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Shortest representation that reads back to the same double; "nan" and
/// "inf" for non-finite values.
std::string format_number(double value);

struct CsvTable {
  std::vector<std::string> header;  // column names carry their unit, e.g. "frequency [Hz]"
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string str() const;
};

}  // namespace impedans::io
