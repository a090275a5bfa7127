#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "efw/series.hpp"

namespace efw {

/// Which rows of a JHU table to aggregate. `name` matches the country column
/// or the province/state column; when `province` is set, only the row(s)
/// of that country with exactly that province are used ("" = country-level row).
struct RegionSelector {
    std::string name;
    std::optional<std::string> province;

    /// "Germany" or "France:" or "United Kingdom:Bermuda".
    static RegionSelector parse(std::string_view text);
    std::string to_string() const;
};

/// Splits CSV text into records, honoring quoted fields (with "" escapes and embedded newlines).
std::vector<std::vector<std::string>> split_csv(std::string_view text);

/// Parses the JHU global or US confirmed-cases wide layout and sums the
/// cumulative counts of all matching rows per date.
RawTimeSeries parse_timeseries_csv(std::string_view text, const RegionSelector& selector);

/// All distinct region names (countries and provinces) in a table, sorted.
std::vector<std::string> list_regions(std::string_view text);

}  // namespace efw
