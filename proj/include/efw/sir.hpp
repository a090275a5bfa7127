#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "efw/mixture.hpp"
#include "efw/series.hpp"
#include "efw/wavelet.hpp"

namespace efw {

struct SirParams {
    double beta = 0.3;    ///< contacts per day
    double gamma = 0.1;   ///< recoveries per day
    double population = 1e6;
};

struct SirState {
    double s = 0.0;
    double i = 0.0;
    double r = 0.0;

    double total() const { return s + i + r; }
};

/// States at t = k * dt, k = 0 .. steps.
struct SirTrajectory {
    double dt = 0.05;
    std::vector<SirState> states;

    double time_at(std::size_t k) const { return dt * static_cast<double>(k); }
    double end_time() const { return states.empty() ? 0.0 : time_at(states.size() - 1); }
    /// Index of the largest I (first one on ties).
    std::size_t peak_index() const;
};

inline constexpr double kDefaultSirStep = 0.05;

/// Classic fourth-order Runge-Kutta on dS = -bIS/N, dI = bIS/N - gI, dR = gI.
/// Throws ConfigError for dt <= 0, steps == 0, dt * beta > 1, or an invalid start state.
SirTrajectory integrate_sir(const SirParams& p, const SirState& s0, double dt, std::size_t steps);

/// Time where dI/dt changes sign, found by linear interpolation of dI/dt
/// between neighbouring samples, and S interpolated at that time.
struct SirPeak {
    double time = 0.0;
    double susceptible = 0.0;
    double infectious = 0.0;
};
SirPeak locate_peak(const SirTrajectory& traj, const SirParams& p);

/// I(t) normalized to unit peak, as a sampled curve.
std::shared_ptr<const SirCurve> sir_curve(const SirTrajectory& traj);

/// SirWave with eval(t) = amplitude * I(t) / max I, linearly interpolated and
/// clamped to the last sample beyond the trajectory end. Throws ConfigError on all-zero I.
Wavelet sir_wavelet(const SirTrajectory& traj, double amplitude);

/// Reference epidemic used when a SirWave family is requested without an
/// explicit trajectory: beta 0.3, gamma 0.1, N 1e6, I0 1, 300 days at dt 0.05.
struct SirReference {
    SirParams params;
    SirState initial;
    double dt = kDefaultSirStep;
    std::size_t steps = 6000;
};
SirReference default_sir_reference();
SirTrajectory integrate(const SirReference& ref);

/// series[i] = max(0, W(i + 1) * (1 + eps_i)), eps_i ~ Normal(0, noise_cv),
/// drawn from a seeded mt19937_64 through Box-Muller so results are portable.
DailySeries synth_daily_cases(const WaveletMixture& mix, std::size_t days, double noise_cv, std::uint64_t seed);

}  // namespace efw
