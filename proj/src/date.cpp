#include "efw/date.hpp"

#include <charconv>
#include <cstdio>
#include <vector>

namespace efw {

namespace {

std::optional<int> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::optional<Date> make_date(int y, int m, int d) {
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (m < 1 || m > 12 || d < 1 || !ymd.ok()) return std::nullopt;
    return Date{ymd};
}

}  // namespace

std::string format_iso(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::optional<Date> parse_iso(std::string_view text) {
    const auto parts = split(text, '-');
    if (parts.size() != 3 || parts[0].size() != 4 || parts[1].size() != 2 || parts[2].size() != 2) {
        return std::nullopt;
    }
    const auto y = parse_int(parts[0]);
    const auto m = parse_int(parts[1]);
    const auto d = parse_int(parts[2]);
    if (!y || !m || !d) return std::nullopt;
    return make_date(*y, *m, *d);
}

std::optional<Date> parse_month_day_year(std::string_view text) {
    const auto parts = split(text, '/');
    if (parts.size() != 3 || parts[2].size() != 2) return std::nullopt;
    const auto m = parse_int(parts[0]);
    const auto d = parse_int(parts[1]);
    const auto y = parse_int(parts[2]);
    if (!m || !d || !y) return std::nullopt;
    return make_date(2000 + *y, *m, *d);
}

}  // namespace efw
