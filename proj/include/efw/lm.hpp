#pragma once

// Levenberg-Marquardt with Marquardt diagonal scaling, plus the central
// difference Jacobian and exponential positivity transform it is paired with.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "efw/errors.hpp"

namespace efw {

template <typename Scalar = double>
struct LeastSquaresProblem {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    /// r(theta), r_i = model(t_i) - y_i. Output length must stay n_residuals.
    std::function<Vector(const Vector&)> residual;
    /// dr_i / dtheta_j; when empty the solver falls back to jacobian_fd.
    std::function<Matrix(const Vector&)> jacobian;
    Eigen::Index n_params = 0;
    Eigen::Index n_residuals = 0;
};

struct LmOptions {
    double lambda0 = 1e-3;
    double lambda_up = 10.0;
    double lambda_down = 10.0;
    double tol_rel_sse = 1e-10;
    double tol_grad = 1e-10;
    int max_iter = 200;
    /// Finite-difference step used when the problem has no analytic Jacobian.
    double fd_step = 1e-6;
};

inline constexpr double kLambdaCeiling = 1e12;

enum class Termination {
    SseTol,    ///< relative SSE improvement below tolerance on two consecutive accepted steps
    GradTol,   ///< ||J^T r||_inf below tolerance
    MaxIter,
    Stalled,   ///< damping escalated past the ceiling without an improving step
    NonFinite  ///< Jacobian or gradient became non-finite at the current iterate
};

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::SseTol: return "SseTol";
        case Termination::GradTol: return "GradTol";
        case Termination::MaxIter: return "MaxIter";
        case Termination::Stalled: return "Stalled";
        case Termination::NonFinite: return "NonFinite";
    }
    return "?";
}

/// One trial step: damping used, SSE at the candidate, whether it was taken.
struct LmEvent {
    double lambda = 0.0;
    double candidate_sse = 0.0;
    bool accepted = false;
};

template <typename Scalar = double>
struct FitReport {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Vector theta_hat;
    Scalar sse = 0;
    Scalar initial_sse = 0;
    int iterations = 0;  ///< accepted steps
    Termination termination = Termination::MaxIter;
    std::vector<Scalar> sse_trace;  ///< initial SSE, then SSE after each accepted step
    std::vector<LmEvent> events;

    bool converged() const { return termination == Termination::SseTol || termination == Termination::GradTol; }
    /// Stalled and NonFinite runs still carry the best iterate found.
    bool diagnostic_failure() const {
        return termination == Termination::Stalled || termination == Termination::NonFinite;
    }
};

/// Central differences; column j uses step h * max(1, |theta_j|).
template <typename Scalar>
typename LeastSquaresProblem<Scalar>::Matrix jacobian_fd(const LeastSquaresProblem<Scalar>& p,
                                                         const typename LeastSquaresProblem<Scalar>::Vector& theta,
                                                         Scalar h) {
    using Vector = typename LeastSquaresProblem<Scalar>::Vector;
    using Matrix = typename LeastSquaresProblem<Scalar>::Matrix;
    if (!(h > Scalar(0))) throw ConfigError("jacobian_fd: step must be positive");
    Matrix jac(p.n_residuals, theta.size());
    Vector probe = theta;
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
        using std::abs;
        const Scalar step = h * std::max(Scalar(1), abs(theta[j]));
        const Scalar hi = theta[j] + step;
        const Scalar lo = theta[j] - step;
        probe[j] = hi;
        const Vector plus = p.residual(probe);
        probe[j] = lo;
        const Vector minus = p.residual(probe);
        probe[j] = theta[j];
        if (!plus.allFinite() || !minus.allFinite()) {
            throw NumericError("jacobian_fd: non-finite residual when perturbing column " + std::to_string(j));
        }
        // Divide by the representable spacing, not the nominal 2 * step.
        jac.col(j) = (plus - minus) / (hi - lo);
    }
    return jac;
}

namespace detail {

// Reductions over residuals accumulate in extended precision, so reordering
// the residuals changes the rounded double results only in rare ties.
template <typename Scalar>
using Accumulator = std::conditional_t<std::is_floating_point_v<Scalar>, long double, Scalar>;

template <typename Scalar>
Scalar sum_squares(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& r) {
    Accumulator<Scalar> s(0);
    for (Eigen::Index i = 0; i < r.size(); ++i) s += static_cast<Accumulator<Scalar>>(r[i]) * r[i];
    return static_cast<Scalar>(s);
}

/// J^T r.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> gradient(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& jac,
                                                  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& r) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> g(jac.cols());
    for (Eigen::Index j = 0; j < jac.cols(); ++j) {
        Accumulator<Scalar> s(0);
        for (Eigen::Index i = 0; i < jac.rows(); ++i) s += static_cast<Accumulator<Scalar>>(jac(i, j)) * r[i];
        g[j] = static_cast<Scalar>(s);
    }
    return g;
}

/// J^T J.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gram(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& jac) {
    const Eigen::Index n = jac.cols();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k <= j; ++k) {
            Accumulator<Scalar> s(0);
            for (Eigen::Index i = 0; i < jac.rows(); ++i) s += static_cast<Accumulator<Scalar>>(jac(i, j)) * jac(i, k);
            a(j, k) = a(k, j) = static_cast<Scalar>(s);
        }
    }
    return a;
}

template <typename Scalar>
bool solve_normal_equations(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                            const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& rhs,
                            Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& out) {
    Eigen::LLT<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> llt(a);
    if (llt.info() == Eigen::Success) {
        out = llt.solve(rhs);
        if (out.allFinite()) return true;
    }
    const Eigen::Index n = a.rows();
    const Scalar jitter = Scalar(1e-12) * std::max(a.trace(), std::numeric_limits<Scalar>::min()) / Scalar(n);
    auto jittered = a;
    jittered.diagonal().array() += jitter;
    llt.compute(jittered);
    if (llt.info() != Eigen::Success) return false;
    out = llt.solve(rhs);
    return out.allFinite();
}

}  // namespace detail

/// Minimizes ||r(theta)||^2. Each iteration solves
/// (J^T J + lambda D) delta = -J^T r, D the running maximum of diag(J^T J),
/// and accepts the step only if the SSE decreases; otherwise lambda grows by
/// lambda_up and theta is kept.
template <typename Scalar>
FitReport<Scalar> levenberg_marquardt(const LeastSquaresProblem<Scalar>& p,
                                      const typename LeastSquaresProblem<Scalar>::Vector& theta0,
                                      const LmOptions& opts = {}) {
    using Vector = typename LeastSquaresProblem<Scalar>::Vector;
    using Matrix = typename LeastSquaresProblem<Scalar>::Matrix;

    if (theta0.size() != p.n_params) throw ConfigError("levenberg_marquardt: theta0 has the wrong length");
    if (p.n_residuals < p.n_params) throw ConfigError("levenberg_marquardt: fewer residuals than parameters");
    if (!(opts.lambda0 >= 0.0) || !(opts.lambda_up > 1.0) || !(opts.lambda_down > 1.0) || opts.max_iter < 0) {
        throw ConfigError("levenberg_marquardt: invalid damping options");
    }

    FitReport<Scalar> rep;
    rep.theta_hat = theta0;
    Vector r = p.residual(theta0);
    if (r.size() != p.n_residuals) throw ConfigError("levenberg_marquardt: residual has the wrong length");
    if (!r.allFinite()) throw NumericError("levenberg_marquardt: residual is not finite at the starting point");
    rep.sse = detail::sum_squares(r);
    rep.initial_sse = rep.sse;
    rep.sse_trace.push_back(rep.sse);

    const auto jacobian_at = [&](const Vector& theta) -> Matrix {
        if (p.jacobian) return p.jacobian(theta);
        return jacobian_fd(p, theta, static_cast<Scalar>(opts.fd_step));
    };

    Scalar lambda = static_cast<Scalar>(opts.lambda0);
    int small_improvements = 0;
    // Damping scale: running maximum of diag(J^T J), as in MINPACK, so a
    // column that momentarily loses its influence keeps a sane step bound.
    Vector scale = Vector::Zero(theta0.size());
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        if (rep.sse == Scalar(0)) {
            rep.termination = Termination::SseTol;
            return rep;
        }
        Matrix jac;
        try {
            jac = jacobian_at(rep.theta_hat);
        } catch (const NumericError&) {
            rep.termination = Termination::NonFinite;
            return rep;
        }
        const Vector grad = detail::gradient(jac, r);
        if (!jac.allFinite() || !grad.allFinite()) {
            rep.termination = Termination::NonFinite;
            return rep;
        }
        if (grad.template lpNorm<Eigen::Infinity>() < opts.tol_grad) {
            rep.termination = Termination::GradTol;
            return rep;
        }
        const Matrix jtj = detail::gram(jac);
        scale = scale.cwiseMax(jtj.diagonal());
        const Scalar floor = std::max(scale.maxCoeff() * Scalar(1e-12), std::numeric_limits<Scalar>::min());
        const Vector damping = scale.cwiseMax(Vector::Constant(scale.size(), floor));

        bool accepted = false;
        while (!accepted) {
            Matrix damped = jtj;
            damped.diagonal() += lambda * damping;
            Vector delta;
            Scalar candidate_sse = std::numeric_limits<Scalar>::infinity();
            Vector candidate;
            Vector r_new;
            if (detail::solve_normal_equations<Scalar>(damped, -grad, delta)) {
                candidate = rep.theta_hat + delta;
                r_new = p.residual(candidate);
                if (r_new.allFinite()) candidate_sse = detail::sum_squares(r_new);
            }
            if (candidate_sse < rep.sse) {
                rep.events.push_back({static_cast<double>(lambda), static_cast<double>(candidate_sse), true});
                const Scalar rel = (rep.sse - candidate_sse) / rep.sse;
                rep.theta_hat = candidate;
                rep.sse = candidate_sse;
                r = std::move(r_new);
                rep.sse_trace.push_back(rep.sse);
                ++rep.iterations;
                lambda /= static_cast<Scalar>(opts.lambda_down);
                accepted = true;
                small_improvements = rel < opts.tol_rel_sse ? small_improvements + 1 : 0;
            } else {
                rep.events.push_back({static_cast<double>(lambda), static_cast<double>(candidate_sse), false});
                lambda = lambda > Scalar(0) ? lambda * static_cast<Scalar>(opts.lambda_up)
                                            : static_cast<Scalar>(opts.lambda0 > 0.0 ? opts.lambda0 : 1e-12);
                if (lambda > kLambdaCeiling) {
                    rep.termination = Termination::Stalled;
                    return rep;
                }
            }
        }
        if (small_improvements >= 2) {
            rep.termination = Termination::SseTol;
            return rep;
        }
    }
    rep.termination = Termination::MaxIter;
    return rep;
}

/// Elementwise positivity map: model_j = lower_j + exp(internal_j) where
/// mask[j] is set, identity elsewhere. `lower` defaults to zero.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> transform_positive(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& internal,
                                                            const std::vector<bool>& mask,
                                                            const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>* lower = nullptr) {
    if (static_cast<Eigen::Index>(mask.size()) != internal.size()) throw ConfigError("transform_positive: mask size");
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> model = internal;
    for (Eigen::Index j = 0; j < internal.size(); ++j) {
        if (!mask[static_cast<std::size_t>(j)]) continue;
        using std::exp;
        model[j] = (lower ? (*lower)[j] : Scalar(0)) + exp(internal[j]);
    }
    return model;
}

/// Inverse of transform_positive. Throws DomainError when a masked entry is not above its bound.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inverse_transform_positive(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& model, const std::vector<bool>& mask,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>* lower = nullptr) {
    if (static_cast<Eigen::Index>(mask.size()) != model.size()) throw ConfigError("transform_positive: mask size");
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> internal = model;
    for (Eigen::Index j = 0; j < model.size(); ++j) {
        if (!mask[static_cast<std::size_t>(j)]) continue;
        const Scalar gap = model[j] - (lower ? (*lower)[j] : Scalar(0));
        if (!(gap > Scalar(0))) {
            throw DomainError("inverse_transform_positive: entry " + std::to_string(j) + " is not above its bound");
        }
        using std::log;
        internal[j] = log(gap);
    }
    return internal;
}

/// Converts d r / d model into d r / d internal in place: masked columns are
/// scaled by exp(internal_j) = model_j - lower_j.
template <typename Scalar>
void chain_positive(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& jac,
                    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& model, const std::vector<bool>& mask,
                    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>* lower = nullptr) {
    for (Eigen::Index j = 0; j < jac.cols(); ++j) {
        if (!mask[static_cast<std::size_t>(j)]) continue;
        jac.col(j) *= model[j] - (lower ? (*lower)[j] : Scalar(0));
    }
}

using Problem = LeastSquaresProblem<double>;
using Report = FitReport<double>;

}  // namespace efw
