#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace efw {

using Date = std::chrono::sys_days;

/// YYYY-MM-DD.
std::string format_iso(Date d);
std::optional<Date> parse_iso(std::string_view text);

/// The M/D/YY header form used by the JHU time-series tables (years 2000-2099).
std::optional<Date> parse_month_day_year(std::string_view text);

inline Date add_days(Date d, long n) { return d + std::chrono::days{n}; }

}  // namespace efw
