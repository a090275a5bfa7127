#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "efw/errors.hpp"
#include "efw/lm.hpp"
#include "efw/mixture.hpp"
#include "efw/series.hpp"
#include "efw/wavelet.hpp"

namespace efw {

struct FitConfig {
    std::size_t n_wavelets = 5;
    std::size_t n_starts = 16;
    double jitter = 0.2;
    Family family = Family::LogNormal;
    LmOptions lm{};
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    /// Base curve for Family::SirWave; the default SIR reference is used when empty.
    std::shared_ptr<const SirCurve> sir_curve;
};

/// Least-squares view of a mixture fit: parameters are stored per component
/// as (a, b, c) in an unconstrained internal form (log for positive entries,
/// log(b - 1) for the BetaPrime shape), residuals are W(t_i) - y_i at t_i = i + 1.
class MixtureProblem {
public:
    MixtureProblem(const DailySeries& y, Family family, std::size_t n_wavelets,
                   std::shared_ptr<const SirCurve> curve = nullptr);

    Eigen::VectorXd residual(const Eigen::VectorXd& internal) const;
    /// Analytic: grad_params per component, chained through the positivity map.
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& internal) const;

    Eigen::VectorXd to_internal(const WaveletMixture& m) const;
    Eigen::VectorXd to_model(const Eigen::VectorXd& internal) const;
    /// Throws ConfigError if the parameters leave the family's admitted set.
    WaveletMixture to_mixture(const Eigen::VectorXd& internal) const;

    const std::vector<bool>& mask() const { return mask_; }
    Problem problem() const;
    std::size_t n_params() const { return 3 * n_; }

private:
    Eigen::ArrayXd times_;
    Eigen::VectorXd y_;
    Date origin_;
    Family family_;
    std::size_t n_;
    std::shared_ptr<const SirCurve> curve_;
    std::vector<bool> mask_;
    Eigen::VectorXd lower_;
};

/// Peaks at the (i - 1/2)/N quantiles of the cumulative mass of y, amplitudes
/// equal to y on those days; LogNormal widths start at c = 0.3.
WaveletMixture initialize(const DailySeries& y, const FitConfig& cfg);

struct StartResult {
    std::optional<Report> report;  ///< empty when the start failed outright
    std::string error;
};

struct FitOutcome {
    WaveletMixture mixture;
    Report report;  ///< the winning start
    std::size_t best_start = 0;
    std::vector<StartResult> starts;
    WaveletMixture initial;
    double initial_sse = 0.0;
    std::vector<std::size_t> redundant;  ///< components with a < 1e-3 max a
};

class FitError : public NumericError {
public:
    FitError(const std::string& what, std::vector<StartResult> starts)
        : NumericError(what), starts_(std::move(starts)) {}
    const std::vector<StartResult>& starts() const { return starts_; }

private:
    std::vector<StartResult> starts_;
};

/// Multi-start LM: start 0 is initialize(), starts 1.. are that point with
/// every internal parameter perturbed multiplicatively by exp(jitter * z).
/// The lowest SSE wins, ties to the lower start index.
FitOutcome fit(const DailySeries& y, const FitConfig& cfg);

}  // namespace efw
