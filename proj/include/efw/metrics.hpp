#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "efw/date.hpp"

namespace efw {

/// |y - y_hat| / y. Throws DomainError for y <= 0, where the metric is undefined.
double relative_percentage_difference(double y, double y_hat);

struct ValidationRow {
    Date date{};
    double real = 0.0;      ///< raw daily count, reported for reference only
    double y = 0.0;         ///< smoothed actual
    double y_hat = 0.0;     ///< model prediction
    double err = 0.0;       ///< NaN when y == 0 (excluded from the mean)
};

/// Fills `err` from (y, y_hat); rows with y == 0 get NaN.
ValidationRow make_row(Date date, double real, double y, double y_hat);

struct MeanError {
    double value = 0.0;
    std::size_t used = 0;
    std::size_t excluded = 0;  ///< rows with y == 0
};

/// Arithmetic mean of err over rows with y > 0. Throws ConfigError on an
/// empty list or when every row is excluded.
MeanError mean_validation_error(std::span<const ValidationRow> rows);

/// Percent truncated to two decimals, e.g. 0.039649 -> "3.96", 0.046883 -> "4.68".
std::string format_percent(double fraction);

/// "day,real data,smoothing,prediction,error" table; error in percent.
std::string write_validation_csv(std::span<const ValidationRow> rows, const std::vector<std::string>& comment = {});

/// Reads rows written by write_validation_csv; also accepts a table without
/// the error column (errors then computed from smoothing and prediction).
std::vector<ValidationRow> read_validation_csv(std::string_view text);

}  // namespace efw
