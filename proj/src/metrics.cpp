#include "efw/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "efw/errors.hpp"
#include "efw/format.hpp"
#include "efw/jhu.hpp"

namespace efw {

double relative_percentage_difference(double y, double y_hat) {
    if (!(y > 0.0)) throw DomainError("relative percentage difference is undefined for y <= 0");
    return std::abs(y - y_hat) / y;
}

ValidationRow make_row(Date date, double real, double y, double y_hat) {
    ValidationRow row{date, real, y, y_hat, std::numeric_limits<double>::quiet_NaN()};
    if (y > 0.0) row.err = relative_percentage_difference(y, y_hat);
    return row;
}

MeanError mean_validation_error(std::span<const ValidationRow> rows) {
    if (rows.empty()) throw ConfigError("mean validation error of an empty table");
    MeanError out;
    double sum = 0.0;
    for (const auto& row : rows) {
        if (!(row.y > 0.0)) {
            ++out.excluded;
            continue;
        }
        sum += row.err;
        ++out.used;
    }
    if (out.used == 0) throw ConfigError("every validation row has a zero actual; mean error undefined");
    out.value = sum / static_cast<double>(out.used);
    return out;
}

std::string format_percent(double fraction) {
    if (!std::isfinite(fraction)) return "nan";
    // Truncated, not rounded: 0.046883 prints as 4.68. The tiny offset keeps
    // values such as 0.0595 from dropping a hundredth through representation error.
    const double hundredths = std::trunc(fraction * 1e4 + (fraction < 0 ? -1e-7 : 1e-7));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", hundredths / 100.0);
    return buf;
}

std::string write_validation_csv(std::span<const ValidationRow> rows, const std::vector<std::string>& comment) {
    std::ostringstream os;
    for (const auto& line : comment) os << "# " << line << '\n';
    os << "day,real data,smoothing,prediction,error\n";
    for (const auto& row : rows) {
        os << format_iso(row.date) << ',' << format_double(row.real) << ',' << format_double(row.y) << ','
           << format_double(row.y_hat) << ',' << format_percent(row.err) << "%\n";
    }
    return os.str();
}

std::vector<ValidationRow> read_validation_csv(std::string_view text) {
    std::vector<ValidationRow> out;
    std::string body;
    for (std::size_t pos = 0; pos < text.size();) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        if (line.empty() || line.front() != '#') {
            body.append(line);
            body.push_back('\n');
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    const auto records = split_csv(body);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& f = records[r];
        const std::string where = "validation CSV row " + std::to_string(r + 1);
        if (f.size() != 4 && f.size() != 5) throw ParseError(where + ": expected 4 or 5 columns");
        const auto date = parse_iso(f[0]);
        const auto real = parse_double(f[1]);
        const auto y = parse_double(f[2]);
        const auto y_hat = parse_double(f[3]);
        if (!date || !real || !y || !y_hat) throw ParseError(where + ": bad date or number");
        out.push_back(make_row(*date, *real, *y, *y_hat));
    }
    return out;
}

}  // namespace efw
