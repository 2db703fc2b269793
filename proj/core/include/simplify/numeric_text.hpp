#pragma once

// Small text helpers for the line-oriented file formats.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace simplify {

// Shortest decimal representation that round-trips.
std::string format_double(double value);

// Whole-string decimal parse; nullopt on trailing garbage or non-finite values.
std::optional<double> parse_double(std::string_view text);

// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> split_lines(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace simplify
