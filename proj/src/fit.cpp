#include "efw/fit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "efw/rng.hpp"
#include "efw/sir.hpp"

namespace efw {

namespace {

std::shared_ptr<const SirCurve> resolve_curve(Family family, std::shared_ptr<const SirCurve> curve) {
    if (family != Family::SirWave || curve) return curve;
    return sir_curve(integrate(default_sir_reference()));
}

// Whether parameter k (0 = a, 1 = b, 2 = c) of a family lives on a log scale internally.
bool positive_param(Family family, int k) {
    if (k != 1) return true;
    return family == Family::Gompertz || family == Family::BetaPrime;
}

}  // namespace

MixtureProblem::MixtureProblem(const DailySeries& y, Family family, std::size_t n_wavelets,
                               std::shared_ptr<const SirCurve> curve)
    : times_(static_cast<Eigen::Index>(y.size())),
      y_(static_cast<Eigen::Index>(y.size())),
      origin_(y.origin),
      family_(family),
      n_(n_wavelets),
      curve_(resolve_curve(family, std::move(curve))),
      mask_(3 * n_wavelets),
      lower_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(3 * n_wavelets))) {
    if (n_wavelets == 0) throw ConfigError("mixture needs at least one wavelet");
    for (std::size_t i = 0; i < y.size(); ++i) {
        times_[static_cast<Eigen::Index>(i)] = static_cast<double>(i + 1);
        y_[static_cast<Eigen::Index>(i)] = y.values[i];
    }
    for (std::size_t i = 0; i < n_; ++i) {
        for (int k = 0; k < 3; ++k) mask_[3 * i + static_cast<std::size_t>(k)] = positive_param(family, k);
        if (family == Family::BetaPrime) lower_[static_cast<Eigen::Index>(3 * i + 1)] = 1.0;
    }
}

Eigen::VectorXd MixtureProblem::to_model(const Eigen::VectorXd& internal) const {
    return transform_positive<double>(internal, mask_, &lower_);
}

Eigen::VectorXd MixtureProblem::to_internal(const WaveletMixture& m) const {
    if (m.size() != n_) throw ConfigError("mixture size does not match the problem");
    Eigen::VectorXd model(static_cast<Eigen::Index>(3 * n_));
    for (std::size_t i = 0; i < n_; ++i) model.segment<3>(static_cast<Eigen::Index>(3 * i)) = m.components[i].params();
    return inverse_transform_positive<double>(model, mask_, &lower_);
}

WaveletMixture MixtureProblem::to_mixture(const Eigen::VectorXd& internal) const {
    const Eigen::VectorXd model = to_model(internal);
    WaveletMixture m;
    m.origin = origin_;
    m.components.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const auto j = static_cast<Eigen::Index>(3 * i);
        m.components.push_back(Wavelet::make(family_, model[j], model[j + 1], model[j + 2], curve_));
    }
    return m;
}

Eigen::VectorXd MixtureProblem::residual(const Eigen::VectorXd& internal) const {
    const Eigen::VectorXd model = to_model(internal);
    Eigen::ArrayXd w = Eigen::ArrayXd::Zero(times_.size());
    for (std::size_t i = 0; i < n_; ++i) {
        const auto j = static_cast<Eigen::Index>(3 * i);
        const double a = model[j];
        const double b = model[j + 1];
        const double c = model[j + 2];
        // Parameters outside the admitted set (reachable only through overflow) give a non-finite residual.
        if (!(c > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) ||
            (family_ == Family::BetaPrime && !(b > 1.0)) || (family_ == Family::Gompertz && !(b > 0.0))) {
            return Eigen::VectorXd::Constant(times_.size(), std::numeric_limits<double>::quiet_NaN());
        }
        w += eval(Wavelet::make(family_, a, b, c, curve_), times_);
    }
    return w.matrix() - y_;
}

Eigen::MatrixXd MixtureProblem::jacobian(const Eigen::VectorXd& internal) const {
    const Eigen::VectorXd model = to_model(internal);
    Eigen::MatrixXd jac(times_.size(), static_cast<Eigen::Index>(3 * n_));
    for (std::size_t i = 0; i < n_; ++i) {
        const auto j = static_cast<Eigen::Index>(3 * i);
        const Wavelet w = Wavelet::make(family_, model[j], model[j + 1], model[j + 2], curve_);
        for (Eigen::Index r = 0; r < times_.size(); ++r) jac.block<1, 3>(r, j) = grad_params(w, times_[r]).transpose();
    }
    chain_positive<double>(jac, model, mask_, &lower_);
    return jac;
}

Problem MixtureProblem::problem() const {
    Problem p;
    p.n_params = static_cast<Eigen::Index>(3 * n_);
    p.n_residuals = times_.size();
    p.residual = [this](const Eigen::VectorXd& x) { return residual(x); };
    p.jacobian = [this](const Eigen::VectorXd& x) { return jacobian(x); };
    return p;
}

WaveletMixture initialize(const DailySeries& y, const FitConfig& cfg) {
    if (cfg.n_wavelets == 0) throw ConfigError("n_wavelets must be at least 1");
    if (y.empty()) throw ConfigError("cannot initialize from an empty series");
    std::vector<double> cum(y.size());
    double total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y.values[i] >= 0.0) || !std::isfinite(y.values[i])) {
            throw ConfigError("series values must be finite and nonnegative");
        }
        total += y.values[i];
        cum[i] = total;
    }
    if (!(total > 0.0)) throw ConfigError("cannot initialize from an all-zero series");

    const auto curve = resolve_curve(cfg.family, cfg.sir_curve);
    WaveletMixture m;
    m.origin = y.origin;
    const auto n = static_cast<double>(cfg.n_wavelets);
    for (std::size_t i = 0; i < cfg.n_wavelets; ++i) {
        const double target = (static_cast<double>(i) + 0.5) / n * total;
        const auto it = std::lower_bound(cum.begin(), cum.end(), target);
        const auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cum.begin(),
                                                                           static_cast<std::ptrdiff_t>(y.size() - 1)));
        const double t = static_cast<double>(idx + 1);
        const double height = y.values[idx];

        Wavelet shape = Wavelet::log_normal(1.0, std::log(t), 0.3);
        switch (cfg.family) {
            case Family::LogNormal: break;
            case Family::Gaussian: shape = Wavelet::gaussian(1.0, t, 0.3 * t); break;
            case Family::GaussianTruncated: shape = Wavelet::gaussian_truncated(1.0, t, 0.3 * t); break;
            case Family::Gompertz: shape = Wavelet::gompertz(1.0, std::log(1e3) / t, 1e-3); break;
            case Family::BetaPrime: shape = Wavelet::beta_prime(1.0, 1.0 + 2.0 * t, 1.0); break;
            case Family::SirWave: shape = Wavelet::sir(curve, 1.0, t - curve->peak_time, 1.0); break;
        }
        const double unit_peak = shape.shape(peak(shape));
        m.components.push_back(shape.with_params(height / unit_peak, shape.b(), shape.c()));
    }
    canonical_sort(m);
    return m;
}

FitOutcome fit(const DailySeries& y, const FitConfig& cfg) {
    if (cfg.n_wavelets == 0) throw ConfigError("n_wavelets must be at least 1");
    if (cfg.n_starts == 0) throw ConfigError("n_starts must be at least 1");
    if (!(cfg.jitter >= 0.0)) throw ConfigError("jitter must be nonnegative");
    if (y.size() < 3 * cfg.n_wavelets) {
        throw ConfigError("series of " + std::to_string(y.size()) + " days is too short for " +
                          std::to_string(cfg.n_wavelets) + " wavelets (need at least " +
                          std::to_string(3 * cfg.n_wavelets) + ")");
    }

    FitConfig resolved = cfg;
    resolved.sir_curve = resolve_curve(cfg.family, cfg.sir_curve);
    const MixtureProblem mp(y, resolved.family, resolved.n_wavelets, resolved.sir_curve);
    const Problem problem = mp.problem();

    FitOutcome out;
    out.initial = initialize(y, resolved);
    const Eigen::VectorXd theta_init = mp.to_internal(out.initial);
    out.initial_sse = problem.residual(theta_init).squaredNorm();

    const auto seed_lo = static_cast<std::uint32_t>(cfg.seed & 0xffffffffu);
    const auto seed_hi = static_cast<std::uint32_t>(cfg.seed >> 32);
    std::vector<Eigen::VectorXd> starts(cfg.n_starts, theta_init);
    for (std::size_t s = 1; s < cfg.n_starts; ++s) {
        NormalStream rng{seed_lo, seed_hi, static_cast<std::uint32_t>(s)};
        const Eigen::VectorXd model = mp.to_model(theta_init);
        Eigen::VectorXd& theta = starts[s];
        for (Eigen::Index j = 0; j < theta.size(); ++j) {
            const double z = cfg.jitter * rng.normal();
            const bool log_scale = mp.mask()[static_cast<std::size_t>(j)] ||
                                   (cfg.family == Family::LogNormal && j % 3 == 1);
            if (log_scale) theta[j] += z;
            else theta[j] = model[j] * std::exp(z);
        }
    }

    out.starts.resize(cfg.n_starts);
    const auto run_start = [&](std::size_t s) {
        try {
            Report rep = levenberg_marquardt(problem, starts[s], cfg.lm);
            (void)mp.to_mixture(rep.theta_hat);
            out.starts[s].report = std::move(rep);
        } catch (const Error& e) {
            out.starts[s].error = e.what();
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(cfg.threads, 1, cfg.n_starts);
    if (workers == 1) {
        for (std::size_t s = 0; s < cfg.n_starts; ++s) run_start(s);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t s = next++; s < cfg.n_starts; s = next++) run_start(s);
            });
        }
        for (auto& th : pool) th.join();
    }

    std::optional<std::size_t> best;
    for (std::size_t s = 0; s < cfg.n_starts; ++s) {
        const auto& rep = out.starts[s].report;
        if (!rep || !std::isfinite(rep->sse)) continue;
        if (!best || rep->sse < out.starts[*best].report->sse) best = s;
    }
    if (!best) throw FitError("every fit start failed", out.starts);

    out.best_start = *best;
    out.report = *out.starts[*best].report;
    out.mixture = mp.to_mixture(out.report.theta_hat);
    canonical_sort(out.mixture);
    out.redundant = redundant_components(out.mixture);
    return out;
}

}  // namespace efw
