#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "efw/date.hpp"

namespace efw {

enum class SeriesKind { Raw, Smoothed };

/// Cumulative counts for one region, one value per consecutive calendar day.
struct RawTimeSeries {
    std::string region;
    std::vector<Date> dates;
    std::vector<double> cumulative;
};

/// Equally spaced daily values. values[0] is day index t = 1, dated `origin`.
struct DailySeries {
    Date origin{};
    std::vector<double> values;
    SeriesKind kind = SeriesKind::Raw;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    Date date_at(std::size_t i) const { return add_days(origin, static_cast<long>(i)); }
    /// Day index (t = 1 for the first value) of a calendar date.
    double day_index(Date d) const { return static_cast<double>((d - origin).count()) + 1.0; }
};

/// A negative day-over-day change in a cumulative series, clamped to zero.
struct RevisionAnomaly {
    Date date;
    double previous = 0.0;
    double current = 0.0;
};

/// values[i] = max(0, cum[i] - cum[i-1]); values[0] = cum[0].
/// Clamped revisions are appended to `anomalies` when given.
DailySeries cumulative_to_daily(const RawTimeSeries& raw, std::vector<RevisionAnomaly>* anomalies = nullptr);

enum class EdgePolicy { FullWindowOnly, ShrinkAtEdges };

EdgePolicy parse_edge_policy(std::string_view name);
std::string_view to_string(EdgePolicy policy);

/// Centered (2d+1)-day mean. FullWindowOnly drops d points at each end and
/// shifts the origin forward by d days; ShrinkAtEdges keeps every day and
/// averages over the part of the window that exists.
DailySeries moving_average(const DailySeries& y, std::size_t half_window = 3,
                           EdgePolicy policy = EdgePolicy::FullWindowOnly);

/// Last `holdout` values become the validation part; dates carry over.
std::pair<DailySeries, DailySeries> train_validation_split(const DailySeries& y, std::size_t holdout);

/// Two-column CSV: "date,value" header then ISO date and shortest round-trip
/// decimal per line. `comment` lines are emitted first, each prefixed "# ".
std::string write_series_csv(const DailySeries& y, const std::vector<std::string>& comment = {});

/// Inverse of write_series_csv. Skips '#' lines and the header; dates must be consecutive.
DailySeries read_series_csv(std::string_view text, SeriesKind kind = SeriesKind::Raw);

}  // namespace efw
