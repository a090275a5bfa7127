#include "efw/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "efw/errors.hpp"
#include "efw/format.hpp"

namespace efw {

DailySeries cumulative_to_daily(const RawTimeSeries& raw, std::vector<RevisionAnomaly>* anomalies) {
    if (raw.dates.size() != raw.cumulative.size()) {
        throw ConfigError("cumulative series and dates differ in length");
    }
    DailySeries out;
    out.kind = SeriesKind::Raw;
    if (raw.cumulative.empty()) return out;
    out.origin = raw.dates.front();
    out.values.resize(raw.cumulative.size());
    out.values[0] = std::max(0.0, raw.cumulative[0]);
    for (std::size_t i = 1; i < raw.cumulative.size(); ++i) {
        const double diff = raw.cumulative[i] - raw.cumulative[i - 1];
        if (diff < 0.0) {
            out.values[i] = 0.0;
            if (anomalies) anomalies->push_back({raw.dates[i], raw.cumulative[i - 1], raw.cumulative[i]});
        } else {
            out.values[i] = diff;
        }
    }
    return out;
}

EdgePolicy parse_edge_policy(std::string_view name) {
    if (name == "full" || name == "FullWindowOnly" || name == "full-window-only") return EdgePolicy::FullWindowOnly;
    if (name == "shrink" || name == "ShrinkAtEdges" || name == "shrink-at-edges") return EdgePolicy::ShrinkAtEdges;
    throw ConfigError("unknown edge policy '" + std::string(name) + "' (expected full or shrink)");
}

std::string_view to_string(EdgePolicy policy) {
    return policy == EdgePolicy::FullWindowOnly ? "FullWindowOnly" : "ShrinkAtEdges";
}

DailySeries moving_average(const DailySeries& y, std::size_t half_window, EdgePolicy policy) {
    const std::size_t n = y.size();
    const std::size_t d = half_window;
    DailySeries out;
    out.kind = SeriesKind::Smoothed;
    if (policy == EdgePolicy::FullWindowOnly) {
        if (n <= 2 * d) {
            throw ConfigError("series of length " + std::to_string(n) + " is too short for a " +
                              std::to_string(2 * d + 1) + "-day window");
        }
        out.origin = y.date_at(d);
        out.values.resize(n - 2 * d);
        const double width = static_cast<double>(2 * d + 1);
        for (std::size_t i = d; i + d < n; ++i) {
            double sum = 0.0;
            for (std::size_t k = i - d; k <= i + d; ++k) sum += y.values[k];
            out.values[i - d] = sum / width;
        }
        return out;
    }
    if (n == 0) throw ConfigError("cannot smooth an empty series");
    out.origin = y.origin;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= d ? i - d : 0;
        const std::size_t hi = std::min(n - 1, i + d);
        double sum = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) sum += y.values[k];
        out.values[i] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::pair<DailySeries, DailySeries> train_validation_split(const DailySeries& y, std::size_t holdout) {
    if (holdout >= y.size()) {
        throw ConfigError("holdout of " + std::to_string(holdout) + " days leaves no training data (series has " +
                          std::to_string(y.size()) + ")");
    }
    const std::size_t cut = y.size() - holdout;
    DailySeries train{y.origin, {y.values.begin(), y.values.begin() + static_cast<long>(cut)}, y.kind};
    DailySeries valid{y.date_at(cut), {y.values.begin() + static_cast<long>(cut), y.values.end()}, y.kind};
    return {std::move(train), std::move(valid)};
}

std::string write_series_csv(const DailySeries& y, const std::vector<std::string>& comment) {
    std::ostringstream os;
    for (const auto& line : comment) os << "# " << line << '\n';
    os << "date,value\n";
    for (std::size_t i = 0; i < y.size(); ++i) {
        os << format_iso(y.date_at(i)) << ',' << format_double(y.values[i]) << '\n';
    }
    return os.str();
}

DailySeries read_series_csv(std::string_view text, SeriesKind kind) {
    DailySeries out;
    out.kind = kind;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.substr(0, 4) == "date") continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) {
            throw ParseError("series CSV line " + std::to_string(line_no) + ": expected 'date,value'");
        }
        const auto date = parse_iso(line.substr(0, comma));
        const auto value = parse_double(line.substr(comma + 1));
        if (!date || !value) {
            throw ParseError("series CSV line " + std::to_string(line_no) + ": bad date or value");
        }
        if (out.values.empty()) {
            out.origin = *date;
        } else if (*date != out.date_at(out.size())) {
            throw ParseError("series CSV line " + std::to_string(line_no) + ": dates are not consecutive");
        }
        if (!std::isfinite(*value) || *value < 0.0) {
            throw ParseError("series CSV line " + std::to_string(line_no) + ": value must be finite and nonnegative");
        }
        out.values.push_back(*value);
    }
    return out;
}

}  // namespace efw
