#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace efw::svg {

struct Series {
    std::string label;
    std::string color = "#1f77b4";
    std::vector<std::pair<double, double>> points;
    double stroke_width = 1.5;
    bool dashed = false;
};

struct Chart {
    std::string title;
    std::string x_label = "day";
    std::string y_label = "daily cases";
    int width = 960;
    int height = 540;
    std::vector<Series> series;
    /// Optional labels for x ticks: (x value, text).
    std::vector<std::pair<double, std::string>> x_ticks;
    /// Vertical marker (e.g. last observed day); NaN disables it.
    double marker_x = std::numeric_limits<double>::quiet_NaN();
};

/// Standalone SVG: axes, one <polyline> per series, legend. Legend and axes
/// never use <polyline>, so the polyline count equals series.size().
std::string render(const Chart& chart);

/// A qualitative palette cycled by index.
std::string palette(std::size_t index);

}  // namespace efw::svg
