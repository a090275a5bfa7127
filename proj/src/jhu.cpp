#include "efw/jhu.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "efw/errors.hpp"
#include "efw/format.hpp"

namespace efw {

namespace {

struct Layout {
    std::size_t country_col = 0;
    std::size_t province_col = 0;
    std::size_t first_date_col = 0;
    std::vector<Date> dates;
};

std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return std::string(s);
}

Layout read_header(const std::vector<std::string>& header) {
    Layout layout;
    bool have_country = false;
    bool have_province = false;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string h = trim(header[i]);
        if (h == "Country/Region" || h == "Country_Region") {
            layout.country_col = i;
            have_country = true;
        } else if (h == "Province/State" || h == "Province_State") {
            layout.province_col = i;
            have_province = true;
        }
        if (auto d = parse_month_day_year(h)) {
            if (layout.dates.empty()) layout.first_date_col = i;
            else if (i != layout.first_date_col + layout.dates.size()) {
                throw ParseError("date columns must be contiguous (column " + std::to_string(i + 1) + ")");
            }
            layout.dates.push_back(*d);
        }
    }
    if (!have_country || !have_province) {
        throw ParseError("header lacks Province/State and Country/Region columns");
    }
    if (layout.dates.empty()) throw ParseError("header has no M/D/YY date columns");
    for (std::size_t i = 1; i < layout.dates.size(); ++i) {
        if (layout.dates[i] != add_days(layout.dates[i - 1], 1)) {
            throw ParseError("date columns are not consecutive days: " + format_iso(layout.dates[i - 1]) +
                             " is followed by " + format_iso(layout.dates[i]));
        }
    }
    return layout;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const bool same = std::tolower(static_cast<unsigned char>(a[i - 1])) ==
                              std::tolower(static_cast<unsigned char>(b[j - 1]));
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (same ? 0 : 1)});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

std::vector<std::string> close_matches(const std::vector<std::string>& names, std::string_view query) {
    std::vector<std::pair<std::size_t, std::string>> scored;
    const std::string q = lower(query);
    for (const auto& n : names) {
        const std::size_t dist = edit_distance(n, query);
        const bool contains = !q.empty() && lower(n).find(q) != std::string::npos;
        if (dist <= 3 || contains) scored.emplace_back(contains ? 0 : dist, n);
    }
    std::sort(scored.begin(), scored.end());
    std::vector<std::string> out;
    for (std::size_t i = 0; i < scored.size() && i < 5; ++i) out.push_back(scored[i].second);
    return out;
}

}  // namespace

RegionSelector RegionSelector::parse(std::string_view text) {
    RegionSelector sel;
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        sel.name = trim(text);
    } else {
        sel.name = trim(text.substr(0, colon));
        sel.province = trim(text.substr(colon + 1));
    }
    if (sel.name.empty()) throw ConfigError("empty region selector");
    return sel;
}

std::string RegionSelector::to_string() const { return province ? name + ":" + *province : name; }

std::vector<std::vector<std::string>> split_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                quoted = true;
                any = true;
                break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                any = true;
                break;
            case '\r': break;
            case '\n':
                if (any || !field.empty()) {
                    row.push_back(std::move(field));
                    rows.push_back(std::move(row));
                }
                field.clear();
                row.clear();
                any = false;
                break;
            default:
                field.push_back(ch);
                any = true;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field at end of input");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

RawTimeSeries parse_timeseries_csv(std::string_view text, const RegionSelector& selector) {
    const auto rows = split_csv(text);
    if (rows.empty()) throw ParseError("empty CSV input");
    const Layout layout = read_header(rows.front());
    const std::size_t width = rows.front().size();

    RawTimeSeries out;
    out.region = selector.to_string();
    out.dates = layout.dates;
    out.cumulative.assign(layout.dates.size(), 0.0);

    std::set<std::string> names;
    std::size_t matched = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::size_t row_no = r + 1;
        if (row.size() != width) {
            throw ParseError("row " + std::to_string(row_no) + ": expected " + std::to_string(width) +
                             " fields, found " + std::to_string(row.size()));
        }
        const std::string country = trim(row[layout.country_col]);
        const std::string province = trim(row[layout.province_col]);
        names.insert(country);
        if (!province.empty()) names.insert(province);

        bool match = false;
        if (selector.province) {
            match = country == selector.name && province == *selector.province;
        } else {
            match = country == selector.name || province == selector.name;
        }
        if (!match) continue;
        ++matched;
        for (std::size_t k = 0; k < layout.dates.size(); ++k) {
            const auto v = parse_double(row[layout.first_date_col + k]);
            if (!v || !std::isfinite(*v) || *v < 0.0) {
                throw ParseError("row " + std::to_string(row_no) + ", column " +
                                 std::to_string(layout.first_date_col + k + 1) + ": bad count '" +
                                 row[layout.first_date_col + k] + "'");
            }
            out.cumulative[k] += *v;
        }
    }
    if (matched == 0) {
        const std::vector<std::string> all(names.begin(), names.end());
        const auto near = close_matches(all, selector.name);
        std::string msg = "region '" + selector.to_string() + "' not found";
        if (!near.empty()) {
            msg += "; close matches:";
            for (std::size_t i = 0; i < near.size(); ++i) msg += (i ? ", " : " ") + near[i];
        }
        throw NotFoundError(msg);
    }
    return out;
}

std::vector<std::string> list_regions(std::string_view text) {
    const auto rows = split_csv(text);
    if (rows.empty()) return {};
    const Layout layout = read_header(rows.front());
    std::set<std::string> names;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() <= std::max(layout.country_col, layout.province_col)) continue;
        names.insert(trim(rows[r][layout.country_col]));
        const std::string p = trim(rows[r][layout.province_col]);
        if (!p.empty()) names.insert(p);
    }
    return {names.begin(), names.end()};
}

}  // namespace efw
