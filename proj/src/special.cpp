#include "efw/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "efw/errors.hpp"

namespace efw {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("log_gamma: argument must be finite and positive");
    }
    // Reflection keeps the series in its accurate range.
    if (x < 0.5) {
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
    }
    const double z = x - 1.0;
    double sum = kLanczosCoef[0];
    for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) {
        sum += kLanczosCoef[i] / (z + static_cast<double>(i));
    }
    const double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

double log_beta(double b, double c) {
    return log_gamma(b) + log_gamma(c) - log_gamma(b + c);
}

}  // namespace efw
