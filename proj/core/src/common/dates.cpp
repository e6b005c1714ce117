#include "climkg/dates.hpp"

#include <cctype>
#include <cstdio>

#include "climkg/numeric_format.hpp"
#include "climkg/text.hpp"

namespace climkg::dates {

namespace {

std::optional<int> digits(std::string_view s, std::size_t pos, std::size_t n) {
  if (pos + n > s.size()) return std::nullopt;
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

bool valid_time_suffix(std::string_view rest) {
  // rest starts after the day: "Thh:mm[:ss[.fff]][Z|±hh:mm]" or " hh:mm..."
  if (rest.empty()) return true;
  if (rest[0] != 'T' && rest[0] != 't' && rest[0] != ' ') return false;
  rest.remove_prefix(1);
  if (!digits(rest, 0, 2) || rest.size() < 5 || rest[2] != ':' || !digits(rest, 3, 2)) return false;
  return true;
}

}  // namespace

std::optional<Day> parse_iso_day(std::string_view s) {
  using namespace std::chrono;
  s = text::trim(s);
  auto y = digits(s, 0, 4);
  if (!y) return std::nullopt;
  unsigned m = 1;
  unsigned d = 1;
  std::size_t pos = 4;
  if (pos < s.size()) {
    if (s[pos] != '-') return std::nullopt;
    auto mm = digits(s, pos + 1, 2);
    if (!mm) return std::nullopt;
    m = static_cast<unsigned>(*mm);
    pos += 3;
    if (pos < s.size() && s[pos] == '-') {
      auto dd = digits(s, pos + 1, 2);
      if (!dd) return std::nullopt;
      d = static_cast<unsigned>(*dd);
      pos += 3;
      if (!valid_time_suffix(s.substr(pos))) return std::nullopt;
    } else if (pos != s.size()) {
      return std::nullopt;
    }
  }
  year_month_day ymd{year{*y}, month{m}, day{d}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

double decimal_year(Day d) {
  using namespace std::chrono;
  year_month_day ymd{d};
  sys_days start{ymd.year() / January / 1};
  sys_days next{(ymd.year() + years{1}) / January / 1};
  double frac = static_cast<double>((d - start).count()) / static_cast<double>((next - start).count());
  return static_cast<int>(ymd.year()) + frac;
}

std::optional<double> parse_decimal_year(std::string_view s) {
  s = text::trim(s);
  if (s.size() > 4 && s[4] == '-') {
    if (auto d = parse_iso_day(s)) return decimal_year(*d);
    return std::nullopt;
  }
  return parse_double(s);
}

std::string format_day(Day d) {
  std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace climkg::dates
