#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace climkg::text {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::string collapse_whitespace(std::string_view s);

/// Splits on runs of ASCII whitespace; no empty pieces.
std::vector<std::string> split_whitespace(std::string_view s);

/// Splits on a single delimiter character, keeping empty pieces.
std::vector<std::string> split(std::string_view s, char delim);

/// Lowercase alphanumeric runs. Everything else separates tokens.
std::vector<std::string> word_tokens(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool iequals(std::string_view a, std::string_view b);
bool starts_with_icase(std::string_view s, std::string_view prefix);

}  // namespace climkg::text
