#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "efw/date.hpp"
#include "efw/series.hpp"
#include "efw/wavelet.hpp"

namespace efw {

/// W(t) = sum_i a_i psi_{b_i, c_i}(t), with day index t = 1 on `origin`.
struct WaveletMixture {
    std::vector<Wavelet> components;
    Date origin{};

    std::size_t size() const { return components.size(); }
};

/// Orders components by peak time; ties by amplitude (descending), then c (ascending).
void canonical_sort(WaveletMixture& m);

double eval_mixture(const WaveletMixture& m, double t);
Eigen::ArrayXd eval_mixture(const WaveletMixture& m, const Eigen::ArrayXd& t);

/// Values at t = last_observed + 1 .. last_observed + horizon, dated from the mixture origin.
DailySeries forecast(const WaveletMixture& m, std::size_t last_observed, std::size_t horizon);

/// One series per component over day indices first .. last (inclusive).
std::vector<DailySeries> decompose(const WaveletMixture& m, std::size_t first, std::size_t last);

/// Indices of components whose amplitude is below `ratio` times the largest amplitude.
std::vector<std::size_t> redundant_components(const WaveletMixture& m, double ratio = 1e-3);

}  // namespace efw
