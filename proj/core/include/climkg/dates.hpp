#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace climkg::dates {

using Day = std::chrono::sys_days;

/// Parses `YYYY`, `YYYY-MM`, `YYYY-MM-DD`, and full ISO-8601 timestamps
/// (`YYYY-MM-DDThh:mm:ss[.fff][Z|±hh:mm]`), truncating to the calendar day.
std::optional<Day> parse_iso_day(std::string_view s);

/// Year plus the elapsed fraction of that year, e.g. 2000-07-02 -> ~2000.5.
double decimal_year(Day d);

/// Decimal year of a timestamp string, or a bare number read as a year.
std::optional<double> parse_decimal_year(std::string_view s);

/// `YYYY-MM-DD`.
std::string format_day(Day d);

}  // namespace climkg::dates
