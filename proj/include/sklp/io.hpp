// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sklp::io {

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Shortest representation that parses back to the identical double.
std::string format_double(double value);

/// Parses the full token as a double; false on any trailing garbage.
bool parse_double(std::string_view token, double& out);

std::vector<std::string_view> split(std::string_view line, char delim);

std::string_view trim(std::string_view s);

}  // namespace sklp::io
