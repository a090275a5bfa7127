#include "efw/mixture.hpp"

#include <algorithm>

#include "efw/errors.hpp"

namespace efw {

void canonical_sort(WaveletMixture& m) {
    std::stable_sort(m.components.begin(), m.components.end(), [](const Wavelet& x, const Wavelet& y) {
        const double px = peak(x);
        const double py = peak(y);
        if (px != py) return px < py;
        if (x.amplitude() != y.amplitude()) return x.amplitude() > y.amplitude();
        return x.c() < y.c();
    });
}

double eval_mixture(const WaveletMixture& m, double t) {
    double sum = 0.0;
    for (const auto& w : m.components) sum += eval(w, t);
    return sum;
}

Eigen::ArrayXd eval_mixture(const WaveletMixture& m, const Eigen::ArrayXd& t) {
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(t.size());
    for (const auto& w : m.components) out += eval(w, t);
    return out;
}

DailySeries forecast(const WaveletMixture& m, std::size_t last_observed, std::size_t horizon) {
    if (horizon == 0) throw ConfigError("forecast horizon must be at least one day");
    DailySeries out;
    out.kind = SeriesKind::Smoothed;
    out.origin = add_days(m.origin, static_cast<long>(last_observed));
    out.values.resize(horizon);
    for (std::size_t k = 0; k < horizon; ++k) {
        out.values[k] = eval_mixture(m, static_cast<double>(last_observed + 1 + k));
    }
    return out;
}

std::vector<DailySeries> decompose(const WaveletMixture& m, std::size_t first, std::size_t last) {
    if (first > last) throw ConfigError("decompose: first day after last day");
    if (first == 0) first = 1;
    std::vector<DailySeries> out;
    out.reserve(m.size());
    for (const auto& w : m.components) {
        DailySeries s;
        s.kind = SeriesKind::Smoothed;
        s.origin = add_days(m.origin, static_cast<long>(first) - 1);
        s.values.reserve(last - first + 1);
        for (std::size_t t = first; t <= last; ++t) s.values.push_back(eval(w, static_cast<double>(t)));
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::size_t> redundant_components(const WaveletMixture& m, double ratio) {
    double amax = 0.0;
    for (const auto& w : m.components) amax = std::max(amax, w.amplitude());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m.components[i].amplitude() < ratio * amax) out.push_back(i);
    }
    return out;
}

}  // namespace efw
