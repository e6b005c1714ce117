#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace climkg {

/// Shortest decimal representation that parses back to the same value.
std::string format_double(double v);
std::string format_float(float v);

std::optional<double> parse_double(std::string_view s);
std::optional<float> parse_float(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

}  // namespace climkg
