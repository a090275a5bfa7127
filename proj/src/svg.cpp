#include "efw/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace efw::svg {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (const char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(ch);
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// 1, 2 or 5 times a power of ten, giving roughly `target` intervals.
double nice_step(double span, int target) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
    return step * mag;
}

std::string tick_label(double v) {
    char buf[32];
    if (std::abs(v) >= 1e4) std::snprintf(buf, sizeof buf, "%.0fk", v / 1e3);
    else std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string palette(std::size_t index) {
    static constexpr std::array<const char*, 10> colors = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[index % colors.size()];
}

std::string render(const Chart& chart) {
    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool first = true;
    for (const auto& s : chart.series) {
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (first) {
                xmin = xmax = x;
                ymax = y;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymax = std::max(ymax, y);
        }
    }
    ymin = 0.0;
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    ymax *= 1.05;

    const double left = 80, right = 200, top = 40, bottom = 60;
    const double pw = chart.width - left - right;
    const double ph = chart.height - top - bottom;
    const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    const auto sy = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width << "\" height=\"" << chart.height
       << "\" viewBox=\"0 0 " << chart.width << ' ' << chart.height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"16\">" << escape(chart.title) << "</text>\n";

    // Axes and grid.
    os << "<g stroke=\"#000\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(left + pw) << "\" y2=\""
       << num(top + ph) << "\"/>\n";
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\""
       << num(top + ph) << "\"/>\n";
    os << "</g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    const double ystep = nice_step(ymax - ymin, 6);
    for (double y = 0.0; y <= ymax; y += ystep) {
        os << "<line x1=\"" << num(left) << "\" y1=\"" << num(sy(y)) << "\" x2=\"" << num(left + pw) << "\" y2=\""
           << num(sy(y)) << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(sy(y) + 4) << "\" text-anchor=\"end\">"
           << tick_label(y) << "</text>\n";
    }
    if (chart.x_ticks.empty()) {
        const double xstep = nice_step(xmax - xmin, 8);
        for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax; x += xstep) {
            os << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(top + ph + 16) << "\" text-anchor=\"middle\">"
               << tick_label(x) << "</text>\n";
        }
    } else {
        for (const auto& [x, label] : chart.x_ticks) {
            if (x < xmin || x > xmax) continue;
            os << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(sx(x))
               << "\" y2=\"" << num(top + ph + 4) << "\" stroke=\"#000\"/>\n";
            os << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(top + ph + 16) << "\" text-anchor=\"middle\">"
               << escape(label) << "</text>\n";
        }
    }
    os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(chart.height - 16.0)
       << "\" text-anchor=\"middle\">" << escape(chart.x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << num(top + ph / 2) << ")\">" << escape(chart.y_label) << "</text>\n";
    os << "</g>\n";

    if (std::isfinite(chart.marker_x) && chart.marker_x >= xmin && chart.marker_x <= xmax) {
        os << "<line x1=\"" << num(sx(chart.marker_x)) << "\" y1=\"" << num(top) << "\" x2=\""
           << num(sx(chart.marker_x)) << "\" y2=\"" << num(top + ph)
           << "\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";
    }

    for (const auto& s : chart.series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << num(s.stroke_width) << '"';
        if (s.dashed) os << " stroke-dasharray=\"6 3\"";
        os << " points=\"";
        bool sep = false;
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (sep) os << ' ';
            os << num(sx(x)) << ',' << num(sy(y));
            sep = true;
        }
        os << "\"/>\n";
    }

    os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        const double y = top + 10 + 18.0 * static_cast<double>(i);
        const double x = left + pw + 16;
        os << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 24) << "\" y2=\"" << num(y)
           << "\" stroke=\"" << chart.series[i].color << "\" stroke-width=\"3\"/>\n";
        os << "<text x=\"" << num(x + 30) << "\" y=\"" << num(y + 4) << "\">" << escape(chart.series[i].label)
           << "</text>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace efw::svg
