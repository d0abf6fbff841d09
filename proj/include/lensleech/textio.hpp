// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lensleech {

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// Shortest text that parses back to the identical double.
std::string format_double(double v);
// Fixed-point with the given number of decimals ('.' separator regardless of locale).
std::string format_fixed(double v, int decimals);

bool parse_double(std::string_view s, double& out);
bool parse_int(std::string_view s, long long& out);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_ws(std::string_view s);
std::vector<std::string_view> split_lines(std::string_view s);

} // namespace lensleech
