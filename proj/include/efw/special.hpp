#pragma once

namespace efw {

/// Natural log of the gamma function for x > 0 (Lanczos, g = 7, n = 9).
double log_gamma(double x);

/// log B(b, c) = lgamma(b) + lgamma(c) - lgamma(b + c).
double log_beta(double b, double c);

}  // namespace efw
