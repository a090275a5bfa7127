#include "efw/sir.hpp"

#include <algorithm>
#include <cmath>

#include "efw/errors.hpp"
#include "efw/rng.hpp"

namespace efw {

namespace {

SirState derivative(const SirParams& p, const SirState& x) {
    const double infection = p.beta * x.i * x.s / p.population;
    const double recovery = p.gamma * x.i;
    return {-infection, infection - recovery, recovery};
}

SirState axpy(const SirState& x, double h, const SirState& k) {
    return {x.s + h * k.s, x.i + h * k.i, x.r + h * k.r};
}

void validate(const SirParams& p, const SirState& s0) {
    if (!std::isfinite(p.beta) || !std::isfinite(p.gamma) || !std::isfinite(p.population)) {
        throw ConfigError("SIR parameters must be finite");
    }
    if (p.beta < 0.0) throw ConfigError("SIR contact rate beta must be nonnegative");
    if (!(p.gamma > 0.0)) throw ConfigError("SIR recovery rate gamma must be positive");
    if (!(p.population > 0.0)) throw ConfigError("SIR population must be positive");
    if (s0.s < 0.0 || s0.i < 0.0 || s0.r < 0.0) throw ConfigError("SIR compartments must be nonnegative");
    if (std::abs(s0.total() - p.population) > 1e-9 * p.population) {
        throw ConfigError("SIR initial state does not sum to the population");
    }
}

}  // namespace

std::size_t SirTrajectory::peak_index() const {
    const auto it = std::max_element(states.begin(), states.end(),
                                     [](const SirState& x, const SirState& y) { return x.i < y.i; });
    return static_cast<std::size_t>(it - states.begin());
}

SirTrajectory integrate_sir(const SirParams& p, const SirState& s0, double dt, std::size_t steps) {
    validate(p, s0);
    if (!(dt > 0.0)) throw ConfigError("SIR step dt must be positive");
    if (steps == 0) throw ConfigError("SIR integration needs at least one step");
    if (dt * p.beta > 1.0) throw ConfigError("SIR step too large: dt * beta exceeds 1");

    SirTrajectory traj;
    traj.dt = dt;
    traj.states.reserve(steps + 1);
    traj.states.push_back(s0);
    SirState x = s0;
    for (std::size_t k = 0; k < steps; ++k) {
        const SirState k1 = derivative(p, x);
        const SirState k2 = derivative(p, axpy(x, 0.5 * dt, k1));
        const SirState k3 = derivative(p, axpy(x, 0.5 * dt, k2));
        const SirState k4 = derivative(p, axpy(x, dt, k3));
        x.s += dt / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s);
        x.i += dt / 6.0 * (k1.i + 2.0 * k2.i + 2.0 * k3.i + k4.i);
        x.r += dt / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r);
        traj.states.push_back(x);
    }
    return traj;
}

SirPeak locate_peak(const SirTrajectory& traj, const SirParams& p) {
    if (traj.states.empty()) throw ConfigError("empty SIR trajectory");
    const std::size_t k = traj.peak_index();
    const auto rate = [&](std::size_t j) { return derivative(p, traj.states[j]).i; };
    std::size_t lo = k;
    std::size_t hi = k;
    if (k > 0 && rate(k) <= 0.0) lo = k - 1;
    else if (k + 1 < traj.states.size()) hi = k + 1;
    SirPeak out{traj.time_at(k), traj.states[k].s, traj.states[k].i};
    if (lo == hi) return out;
    const double r0 = rate(lo);
    const double r1 = rate(hi);
    if (!(r0 > 0.0 && r1 <= 0.0) || r0 == r1) return out;
    const double frac = r0 / (r0 - r1);
    const SirState& x0 = traj.states[lo];
    const SirState& x1 = traj.states[hi];
    out.time = traj.time_at(lo) + frac * traj.dt;
    out.susceptible = x0.s + frac * (x1.s - x0.s);
    out.infectious = x0.i + frac * (x1.i - x0.i);
    return out;
}

std::shared_ptr<const SirCurve> sir_curve(const SirTrajectory& traj) {
    if (traj.states.empty()) throw ConfigError("empty SIR trajectory");
    const std::size_t k = traj.peak_index();
    const double imax = traj.states[k].i;
    if (!(imax > 0.0)) throw ConfigError("SIR trajectory has no infectious individuals");
    auto curve = std::make_shared<SirCurve>();
    curve->dt = traj.dt;
    curve->values.reserve(traj.states.size());
    for (const auto& x : traj.states) curve->values.push_back(x.i / imax);
    curve->peak_time = traj.time_at(k);
    return curve;
}

Wavelet sir_wavelet(const SirTrajectory& traj, double amplitude) {
    return Wavelet::sir(sir_curve(traj), amplitude);
}

SirReference default_sir_reference() {
    SirReference ref;
    ref.initial = {ref.params.population - 1.0, 1.0, 0.0};
    return ref;
}

SirTrajectory integrate(const SirReference& ref) {
    return integrate_sir(ref.params, ref.initial, ref.dt, ref.steps);
}

DailySeries synth_daily_cases(const WaveletMixture& mix, std::size_t days, double noise_cv, std::uint64_t seed) {
    if (days == 0) throw ConfigError("synthetic series needs at least one day");
    if (!(noise_cv >= 0.0) || !std::isfinite(noise_cv)) throw ConfigError("noise_cv must be finite and nonnegative");
    NormalStream rng(seed);
    DailySeries out;
    out.origin = mix.origin;
    out.kind = SeriesKind::Raw;
    out.values.resize(days);
    for (std::size_t i = 0; i < days; ++i) {
        const double w = eval_mixture(mix, static_cast<double>(i + 1));
        const double eps = noise_cv > 0.0 ? noise_cv * rng.normal() : 0.0;
        out.values[i] = std::max(0.0, w * (1.0 + eps));
    }
    return out;
}

}  // namespace efw
