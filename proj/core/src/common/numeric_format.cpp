#include "climkg/numeric_format.hpp"

#include <charconv>
#include <cmath>

#include "climkg/text.hpp"

namespace climkg {

namespace {

template <typename T>
std::string shortest(T v) {
  if (v == 0) return "0";  // folds -0 into 0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <typename T>
std::optional<T> parse(std::string_view s) {
  s = text::trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

std::string format_double(double v) { return shortest(v); }
std::string format_float(float v) { return shortest(v); }

std::optional<double> parse_double(std::string_view s) {
  auto v = parse<double>(s);
  if (v && !std::isfinite(*v)) return std::nullopt;
  return v;
}

std::optional<float> parse_float(std::string_view s) {
  auto v = parse<float>(s);
  if (v && !std::isfinite(*v)) return std::nullopt;
  return v;
}

std::optional<long long> parse_int(std::string_view s) { return parse<long long>(s); }

}  // namespace climkg
