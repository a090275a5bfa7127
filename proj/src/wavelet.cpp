#include "efw/wavelet.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "efw/errors.hpp"
#include "efw/special.hpp"

namespace efw {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 6> kFamilyNames = {{
    {Family::LogNormal, "LogNormal"},
    {Family::Gaussian, "Gaussian"},
    {Family::GaussianTruncated, "GaussianTruncated"},
    {Family::Gompertz, "Gompertz"},
    {Family::BetaPrime, "BetaPrime"},
    {Family::SirWave, "SirWave"},
}};

bool iequals(std::string_view x, std::string_view y) {
    return x.size() == y.size() && std::equal(x.begin(), x.end(), y.begin(), [](char p, char q) {
               return std::tolower(static_cast<unsigned char>(p)) ==
                      std::tolower(static_cast<unsigned char>(q));
           });
}

constexpr double kFdStep = 1e-6;

double step_for(double theta) { return kFdStep * std::max(1.0, std::abs(theta)); }

// Unvalidated shape evaluation so finite-difference probes may step slightly
// outside the admitted set (e.g. BetaPrime b near 1).
double raw_shape(Family family, double b, double c, const SirCurve* curve, double t) {
    switch (family) {
        case Family::LogNormal: return log_normal_kernel(t, b, c);
        case Family::Gaussian: return gaussian_kernel(t, b, c);
        case Family::GaussianTruncated: return gaussian_truncated_kernel(t, b, c);
        case Family::Gompertz: return gompertz_kernel(t, b, c);
        case Family::BetaPrime: return beta_prime_kernel(t, b, c, log_beta(b, c));
        case Family::SirWave: return curve->at((t - b) / c);
    }
    return 0.0;
}

}  // namespace

std::string_view to_string(Family family) {
    for (const auto& [f, name] : kFamilyNames) {
        if (f == family) return name;
    }
    return "Unknown";
}

Family parse_family(std::string_view name) {
    for (const auto& [f, n] : kFamilyNames) {
        if (iequals(n, name)) return f;
    }
    throw ConfigError("unknown wavelet family '" + std::string(name) + "'");
}

double SirCurve::at(double t) const {
    if (values.empty()) return 0.0;
    if (!(t > 0.0)) return values.front();
    const double pos = t / dt;
    const auto last = static_cast<double>(values.size() - 1);
    if (pos >= last) return values.back();
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return values[i] + frac * (values[i + 1] - values[i]);
}

Wavelet::Wavelet(Family family, double a, double b, double c, std::shared_ptr<const SirCurve> curve)
    : family_(family), a_(a), b_(b), c_(c), curve_(std::move(curve)) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
        throw ConfigError("wavelet parameters must be finite");
    }
    if (a < 0.0) throw ConfigError("wavelet amplitude must be nonnegative");
    if (!(c > 0.0)) throw ConfigError("wavelet width parameter c must be positive");
    switch (family) {
        case Family::Gompertz:
            if (!(b > 0.0)) throw ConfigError("Gompertz rate b must be positive");
            break;
        case Family::BetaPrime:
            if (!(b > 1.0)) throw ConfigError("BetaPrime shape b must exceed 1");
            log_beta_ = log_beta(b, c);
            break;
        case Family::SirWave:
            if (!curve_ || curve_->values.empty() || !(curve_->dt > 0.0)) {
                throw ConfigError("SirWave requires a nonempty sampled curve");
            }
            break;
        default: break;
    }
}

Wavelet Wavelet::log_normal(double a, double b, double c) { return {Family::LogNormal, a, b, c, nullptr}; }
Wavelet Wavelet::gaussian(double a, double b, double c) { return {Family::Gaussian, a, b, c, nullptr}; }
Wavelet Wavelet::gaussian_truncated(double a, double b, double c) {
    return {Family::GaussianTruncated, a, b, c, nullptr};
}
Wavelet Wavelet::gompertz(double a, double b, double c) { return {Family::Gompertz, a, b, c, nullptr}; }
Wavelet Wavelet::beta_prime(double a, double b, double c) { return {Family::BetaPrime, a, b, c, nullptr}; }
Wavelet Wavelet::sir(std::shared_ptr<const SirCurve> curve, double a, double shift, double scale) {
    return {Family::SirWave, a, shift, scale, std::move(curve)};
}

Wavelet Wavelet::make(Family family, double a, double b, double c, std::shared_ptr<const SirCurve> curve) {
    if (family != Family::SirWave) curve = nullptr;
    return {family, a, b, c, std::move(curve)};
}

Wavelet Wavelet::with_params(double a, double b, double c) const { return {family_, a, b, c, curve_}; }

double Wavelet::shape(double t) const {
    if (family_ == Family::BetaPrime) return beta_prime_kernel(t, b_, c_, log_beta_);
    return raw_shape(family_, b_, c_, curve_.get(), t);
}

double eval(const Wavelet& w, double t) { return w.amplitude() * w.shape(t); }

Eigen::ArrayXd eval(const Wavelet& w, const Eigen::ArrayXd& t) {
    return t.unaryExpr([&w](double x) { return eval(w, x); });
}

Eigen::Vector3d grad_params(const Wavelet& w, double t) {
    const double a = w.amplitude();
    const double b = w.b();
    const double c = w.c();
    const double s = w.shape(t);
    Eigen::Vector3d g;
    g[0] = s;
    switch (w.family()) {
        case Family::LogNormal: {
            if (!(t > 0.0)) return Eigen::Vector3d::Zero();
            const double z = std::log(t) - b;
            g[1] = a * s * z / (c * c);
            g[2] = a * s * z * z / (c * c * c);
            return g;
        }
        case Family::Gaussian: {
            const double z = t - b;
            g[1] = a * s * z / (c * c);
            g[2] = a * s * z * z / (c * c * c);
            return g;
        }
        case Family::GaussianTruncated: {
            if (!(s > 0.0)) return Eigen::Vector3d::Zero();
            const double st = gaussian_kernel(t, b, c);
            const double s0 = gaussian_kernel(0.0, b, c);
            const double z = t - b;
            g[1] = a * (st * z + s0 * b) / (c * c);
            g[2] = a * (st * z * z - s0 * b * b) / (c * c * c);
            return g;
        }
        default: break;
    }
    const SirCurve* curve = w.curve().get();
    const double hb = step_for(b);
    const double hc = step_for(c);
    g[1] = a * (raw_shape(w.family(), b + hb, c, curve, t) - raw_shape(w.family(), b - hb, c, curve, t)) /
           (2.0 * hb);
    g[2] = a * (raw_shape(w.family(), b, c + hc, curve, t) - raw_shape(w.family(), b, c - hc, curve, t)) /
           (2.0 * hc);
    return g;
}

double time_derivative(const Wavelet& w, double t) {
    const double b = w.b();
    const double c = w.c();
    switch (w.family()) {
        case Family::LogNormal:
            if (!(t > 0.0)) return 0.0;
            return eval(w, t) * (-(std::log(t) - b)) / (c * c * t);
        case Family::Gaussian: return eval(w, t) * (-(t - b)) / (c * c);
        default: {
            const double h = step_for(t);
            return (eval(w, t + h) - eval(w, t - h)) / (2.0 * h);
        }
    }
}

double peak(const Wavelet& w) {
    switch (w.family()) {
        case Family::LogNormal: return std::exp(w.b());
        case Family::Gaussian:
        case Family::GaussianTruncated: return w.b();
        case Family::Gompertz: return -std::log(w.c()) / w.b();
        case Family::BetaPrime: return (w.b() - 1.0) / (w.c() + 1.0);
        case Family::SirWave: return w.b() + w.c() * w.curve()->peak_time;
    }
    return 0.0;
}

bool is_epidemic_fitted(const Wavelet& w, double lo, double hi, std::size_t grid_size) {
    if (!(lo < hi) || grid_size < 16) return false;
    std::vector<double> v(grid_size);
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double x = (i + 1 == grid_size) ? hi : lo + step * static_cast<double>(i);
        v[i] = eval(w, x);
        if (!std::isfinite(v[i]) || v[i] < 0.0) return false;
    }
    const auto peak_it = std::max_element(v.begin(), v.end());
    const double vmax = *peak_it;
    if (!(vmax > 0.0)) return false;
    for (std::size_t i = 1; i + 1 < grid_size; ++i) {
        if (!(v[i] > 0.0)) return false;
    }
    if (!(v.front() < kEndpointRatio * vmax) || !(v.back() < kEndpointRatio * vmax)) return false;
    if (!std::is_sorted(v.begin(), peak_it + 1)) return false;
    return std::is_sorted(peak_it, v.end(), std::greater<>{});
}

AdmissibilityCheck admissibility_sanity(const Wavelet& w, double half_width, std::size_t grid_size) {
    if (!(half_width > 0.0)) throw ConfigError("admissibility_sanity: half_width must be positive");
    if (grid_size < 3) grid_size = 3;
    if (grid_size % 2 == 0) ++grid_size;
    const std::size_t half = grid_size / 2;
    const double h = half_width / static_cast<double>(half);
    const auto odd_ext = [&w](double x) {
        if (x > 0.0) return eval(w, x);
        if (x < 0.0) return -eval(w, -x);
        return 0.0;
    };

    AdmissibilityCheck out;
    double tail = 0.0;
    const double tail_start = 0.9 * half_width;
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double x = (static_cast<double>(i) - static_cast<double>(half)) * h;
        const double weight = (i == 0 || i + 1 == grid_size) ? 0.5 * h : h;
        const double f = odd_ext(x);
        out.odd_extension_mean += weight * f;
        const double m = weight * std::abs(f) * (1.0 + std::abs(x));
        out.first_moment += m;
        if (std::abs(x) >= tail_start) tail += m;
    }
    out.tail_fraction = out.first_moment > 0.0 ? tail / out.first_moment : 0.0;
    out.first_moment_finite = std::isfinite(out.first_moment) && out.tail_fraction < 0.01;
    return out;
}

FamilyDefault family_default(Family family, std::shared_ptr<const SirCurve> curve) {
    switch (family) {
        case Family::LogNormal: return {Wavelet::log_normal(1.0, std::log(50.0), 0.3), 1e-6, 200.0};
        case Family::Gaussian: return {Wavelet::gaussian(1.0, 50.0, 10.0), 0.0, 100.0};
        case Family::GaussianTruncated: return {Wavelet::gaussian_truncated(1.0, 50.0, 10.0), 0.0, 100.0};
        case Family::Gompertz: return {Wavelet::gompertz(1.0, 0.1, 1e-4), 0.0, 150.0};
        case Family::BetaPrime: return {Wavelet::beta_prime(1.0, 3.0, 3.0), 0.0, 100.0};
        case Family::SirWave: {
            if (!curve) throw ConfigError("SirWave default requires a sampled curve");
            const double end = curve->dt * static_cast<double>(curve->values.size() - 1);
            return {Wavelet::sir(std::move(curve), 1.0), 0.0, end};
        }
    }
    throw ConfigError("unknown family");
}

}  // namespace efw
