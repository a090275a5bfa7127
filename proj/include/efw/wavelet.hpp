#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace efw {

enum class Family { LogNormal, Gaussian, GaussianTruncated, Gompertz, BetaPrime, SirWave };

std::string_view to_string(Family family);
/// Accepts the enumerator names case-insensitively ("lognormal", "LogNormal", ...).
Family parse_family(std::string_view name);

/// Infectious curve I(t) sampled on a uniform grid starting at t = 0 and
/// normalized to unit peak. Shared read-only between SirWave wavelets.
struct SirCurve {
    double dt = 0.05;
    std::vector<double> values;
    double peak_time = 0.0;

    /// Linear interpolation; clamps to the first/last sample outside the grid.
    double at(double t) const;
};

// Unit-amplitude shape kernels. No parameter validation: callers that need
// the admitted-parameter guarantees go through Wavelet.

template <typename Scalar>
Scalar log_normal_kernel(Scalar t, Scalar b, Scalar c) {
    using std::exp;
    using std::log;
    if (!(t > Scalar(0))) return Scalar(0);
    const Scalar z = (log(t) - b) / c;
    return exp(-z * z / Scalar(2));
}

template <typename Scalar>
Scalar gaussian_kernel(Scalar t, Scalar b, Scalar c) {
    using std::exp;
    const Scalar z = (t - b) / c;
    return exp(-z * z / Scalar(2));
}

template <typename Scalar>
Scalar gaussian_truncated_kernel(Scalar t, Scalar b, Scalar c) {
    const Scalar v = gaussian_kernel(t, b, c) - gaussian_kernel(Scalar(0), b, c);
    return v > Scalar(0) ? v : Scalar(0);
}

template <typename Scalar>
Scalar gompertz_kernel(Scalar t, Scalar b, Scalar c) {
    using std::exp;
    if (!(t > Scalar(0))) return Scalar(0);
    return b * c * exp(c + b * t - c * exp(b * t));
}

/// `log_beta_bc` is log B(b, c), precomputed by the caller.
template <typename Scalar>
Scalar beta_prime_kernel(Scalar t, Scalar b, Scalar c, Scalar log_beta_bc) {
    using std::exp;
    using std::log;
    using std::log1p;
    if (!(t > Scalar(0))) return Scalar(0);
    return exp((b - Scalar(1)) * log(t) - (b + c) * log1p(t) - log_beta_bc);
}

/// One epidemic-fitted wavelet a * psi_{b,c}(t). Every family carries three
/// parameters (a, b, c); for SirWave, b is a time shift in days and c a time
/// dilation, so eval(t) = a * I_norm((t - b) / c).
class Wavelet {
public:
    static Wavelet log_normal(double a, double b, double c);
    static Wavelet gaussian(double a, double b, double c);
    static Wavelet gaussian_truncated(double a, double b, double c);
    static Wavelet gompertz(double a, double b, double c);
    static Wavelet beta_prime(double a, double b, double c);
    static Wavelet sir(std::shared_ptr<const SirCurve> curve, double a, double shift = 0.0,
                       double scale = 1.0);

    /// Generic factory; `curve` is required for SirWave and ignored otherwise.
    /// Throws ConfigError on parameters outside the family's admitted set.
    static Wavelet make(Family family, double a, double b, double c,
                        std::shared_ptr<const SirCurve> curve = nullptr);

    Family family() const { return family_; }
    double amplitude() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    Eigen::Vector3d params() const { return {a_, b_, c_}; }
    const std::shared_ptr<const SirCurve>& curve() const { return curve_; }

    /// Same family (and curve), new parameters, revalidated.
    Wavelet with_params(double a, double b, double c) const;

    /// Unit-amplitude value psi_{b,c}(t).
    double shape(double t) const;

private:
    Wavelet(Family family, double a, double b, double c, std::shared_ptr<const SirCurve> curve);

    Family family_;
    double a_;
    double b_;
    double c_;
    double log_beta_ = 0.0;
    std::shared_ptr<const SirCurve> curve_;
};

/// a * psi(t); zero for t <= 0 in the log-time families.
double eval(const Wavelet& w, double t);

/// Vectorized eval over an array of day indices.
Eigen::ArrayXd eval(const Wavelet& w, const Eigen::ArrayXd& t);

/// d eval / d(a, b, c). Analytic for LogNormal, Gaussian and GaussianTruncated;
/// central differences with step 1e-6 * max(1, |theta|) for the others.
Eigen::Vector3d grad_params(const Wavelet& w, double t);

/// d eval / dt. Analytic for LogNormal and Gaussian, central differences otherwise.
double time_derivative(const Wavelet& w, double t);

/// Location of the maximum, in days.
double peak(const Wavelet& w);

/// Start-peak-stop check on a uniform grid over [lo, hi] (endpoints included).
/// Endpoints must fall below kEndpointRatio * max; plateaus are tolerated.
bool is_epidemic_fitted(const Wavelet& w, double lo, double hi, std::size_t grid_size = 512);

inline constexpr double kEndpointRatio = 1e-3;

struct AdmissibilityCheck {
    double odd_extension_mean = 0.0;  ///< trapezoid integral of the odd extension
    double first_moment = 0.0;        ///< trapezoid integral of |psi~|(1 + |x|)
    double tail_fraction = 0.0;       ///< share of first_moment from the outer 10% of the grid
    bool first_moment_finite = false;
};

/// Numerical admissibility check of the odd extension psi~(x) = sgn(x) psi(|x|)
/// on [-half_width, half_width] with `grid_size` points (forced odd so x = 0 is a node).
AdmissibilityCheck admissibility_sanity(const Wavelet& w, double half_width,
                                        std::size_t grid_size = 200001);

/// Defaults used by the CLI and the family-wide property checks, with an
/// interval on which each satisfies the start-peak-stop property.
struct FamilyDefault {
    Wavelet wavelet;
    double lo;
    double hi;
};
FamilyDefault family_default(Family family, std::shared_ptr<const SirCurve> curve = nullptr);

}  // namespace efw
