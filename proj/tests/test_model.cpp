#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "efw/errors.hpp"
#include "efw/fit.hpp"
#include "efw/mixture.hpp"
#include "efw/sir.hpp"
#include "oracles.hpp"

using namespace efw;

namespace {

WaveletMixture three_waves() {
    WaveletMixture m;
    m.origin = Date{std::chrono::year{2020} / 3 / 1};
    m.components = {Wavelet::log_normal(1000, std::log(20.0), 0.25), Wavelet::log_normal(3000, std::log(55.0), 0.15),
                    Wavelet::log_normal(2000, std::log(90.0), 0.12)};
    return m;
}

double norm2(const DailySeries& y) {
    double s = 0.0;
    for (double v : y.values) s += v * v;
    return s;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("eval_mixture examples") {
    WaveletMixture zero;
    zero.components = {Wavelet::log_normal(0, 1, 0.5), Wavelet::gaussian(0, 10, 3)};
    for (double t : {1.0, 5.0, 50.0}) CHECK(eval_mixture(zero, t) == 0.0);

    WaveletMixture one;
    one.components = {Wavelet::log_normal(1, 0, 1)};
    CHECK(eval_mixture(one, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

    WaveletMixture twin;
    twin.components = {Wavelet::log_normal(3, 2, 0.4), Wavelet::log_normal(3, 2, 0.4)};
    WaveletMixture doubled;
    doubled.components = {Wavelet::log_normal(6, 2, 0.4)};
    for (double t = 1; t < 60; t += 0.7) {
        CHECK(std::abs(eval_mixture(twin, t) - eval_mixture(doubled, t)) <= 1e-12 * std::max(1.0, eval_mixture(doubled, t)));
    }
    const Eigen::ArrayXd ts = Eigen::ArrayXd::LinSpaced(30, 1, 30);
    const Eigen::ArrayXd vs = eval_mixture(twin, ts);
    for (Eigen::Index i = 0; i < ts.size(); ++i) CHECK(vs[i] == eval_mixture(twin, ts[i]));
}

TEST_CASE("canonical order is by peak, then amplitude, then width") {
    WaveletMixture m;
    m.components = {Wavelet::log_normal(5, 3, 0.2), Wavelet::log_normal(1, 2, 0.5), Wavelet::log_normal(9, 2, 0.3),
                    Wavelet::log_normal(9, 2, 0.1)};
    canonical_sort(m);
    CHECK(m.components[0].amplitude() == 9);
    CHECK(m.components[0].c() == 0.1);
    CHECK(m.components[1].c() == 0.3);
    CHECK(m.components[2].amplitude() == 1);
    CHECK(m.components[3].b() == 3);
}

TEST_CASE("initialize places a single peak at the mass median") {
    DailySeries y;
    for (int i = 1; i <= 90; ++i) y.values.push_back(eval(Wavelet::log_normal(100, std::log(35.0), 0.3), i));
    FitConfig cfg;
    cfg.n_wavelets = 1;
    const auto m = initialize(y, cfg);
    REQUIRE(m.size() == 1);
    const std::size_t median = oracle::mass_quantile(y.values, 0.5);
    CHECK(peak(m.components[0]) == doctest::Approx(static_cast<double>(median + 1)));
    CHECK(m.components[0].amplitude() == y.values[median]);
    CHECK(m.components[0].c() == 0.3);
}

TEST_CASE("initialize on constant mass puts peaks near the quarter points") {
    DailySeries y;
    y.values.assign(100, 7.0);
    FitConfig cfg;
    cfg.n_wavelets = 2;
    const auto m = initialize(y, cfg);
    REQUIRE(m.size() == 2);
    CHECK(std::abs(peak(m.components[0]) - 25.0) <= 1.0);
    CHECK(std::abs(peak(m.components[1]) - 75.0) <= 1.0);
    for (const auto& w : m.components) CHECK(w.amplitude() == 7.0);
}

TEST_CASE("initialize works for every family and rejects bad input") {
    DailySeries y;
    for (int i = 1; i <= 80; ++i) y.values.push_back(eval(Wavelet::gaussian(50, 40, 8), i));
    for (auto f : {Family::LogNormal, Family::Gaussian, Family::GaussianTruncated, Family::Gompertz,
                   Family::BetaPrime, Family::SirWave}) {
        FitConfig cfg;
        cfg.family = f;
        cfg.n_wavelets = 3;
        const auto m = initialize(y, cfg);
        REQUIRE(m.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            const double t = peak(m.components[i]);
            CHECK_MESSAGE(eval(m.components[i], t) == doctest::Approx(y.values[static_cast<std::size_t>(std::lround(t)) - 1]).epsilon(1e-6),
                          to_string(f));
        }
    }
    DailySeries zero;
    zero.values.assign(20, 0.0);
    CHECK_THROWS_AS(initialize(zero, FitConfig{}), ConfigError);
    CHECK_THROWS_AS(initialize(DailySeries{}, FitConfig{}), ConfigError);
    DailySeries neg;
    neg.values = {1, -2, 3};
    CHECK_THROWS_AS(initialize(neg, FitConfig{}), ConfigError);
}

TEST_CASE("mixture problem round-trips parameters") {
    DailySeries y;
    y.values.assign(50, 1.0);
    for (auto f : {Family::LogNormal, Family::Gompertz, Family::BetaPrime}) {
        const MixtureProblem mp(y, f, 2);
        FitConfig cfg;
        cfg.family = f;
        cfg.n_wavelets = 2;
        DailySeries hump;
        for (int i = 1; i <= 50; ++i) hump.values.push_back(1 + std::exp(-0.01 * (i - 25) * (i - 25)));
        const auto m = initialize(hump, cfg);
        const auto back = mp.to_mixture(mp.to_internal(m));
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK((back.components[i].params() - m.components[i].params()).cwiseAbs().maxCoeff() <=
                  1e-12 * m.components[i].params().cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("noiseless three-wave mixture is recovered") {
    const auto truth = three_waves();
    const auto y = synth_daily_cases(truth, 120, 0.0, 1);
    FitConfig cfg;
    cfg.n_wavelets = 3;
    cfg.seed = 42;
    const auto out = fit(y, cfg);
    CHECK(out.report.sse < 1e-6 * norm2(y));
    REQUIRE(out.mixture.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) CHECK(rel(out.mixture.components[i].params()[k], truth.components[i].params()[k]) < 0.01);
    }
    CHECK(out.report.sse <= out.initial_sse);
    CHECK(out.mixture.origin == y.origin);
}

TEST_CASE("extra components never fit worse") {
    WaveletMixture one;
    one.components = {Wavelet::log_normal(500, std::log(40.0), 0.2)};
    const auto y = synth_daily_cases(one, 100, 0.0, 1);
    FitConfig c1;
    c1.n_wavelets = 1;
    FitConfig c3;
    c3.n_wavelets = 3;
    const auto f1 = fit(y, c1);
    const auto f3 = fit(y, c3);
    CHECK(f3.report.sse <= f1.report.sse + 1e-9 * norm2(y));
}

TEST_CASE("fits are deterministic and independent of thread count") {
    const auto y = synth_daily_cases(three_waves(), 120, 0.05, 9);
    FitConfig cfg;
    cfg.n_wavelets = 3;
    cfg.n_starts = 8;
    cfg.seed = 5;
    const auto a = fit(y, cfg);
    const auto b = fit(y, cfg);
    cfg.threads = 4;
    const auto c = fit(y, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.mixture.components[i].params() == b.mixture.components[i].params());
        CHECK(a.mixture.components[i].params() == c.mixture.components[i].params());
    }
    CHECK(a.best_start == c.best_start);
    CHECK(a.report.sse == c.report.sse);
}

TEST_CASE("fit SSE never exceeds the initialization") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto y = synth_daily_cases(three_waves(), 120, 0.1, seed);
        FitConfig cfg;
        cfg.n_wavelets = 3;
        cfg.n_starts = 4;
        const auto out = fit(y, cfg);
        CHECK(out.report.sse <= out.initial_sse);
        for (const auto& s : out.starts) {
            if (s.report) {
                for (std::size_t k = 1; k < s.report->sse_trace.size(); ++k) CHECK(s.report->sse_trace[k] < s.report->sse_trace[k - 1]);
            }
        }
    }
}

TEST_CASE("scaling the data scales the amplitudes") {
    const auto y = synth_daily_cases(three_waves(), 120, 0.0, 1);
    DailySeries ys = y;
    const double s = 37.5;
    for (double& v : ys.values) v *= s;
    FitConfig cfg;
    cfg.n_wavelets = 3;
    const auto f1 = fit(y, cfg);
    const auto f2 = fit(ys, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& w1 = f1.mixture.components[i];
        const auto& w2 = f2.mixture.components[i];
        CHECK(rel(w2.amplitude(), s * w1.amplitude()) < 0.01);
        CHECK(std::abs(w2.b() - w1.b()) < 1e-3);
        CHECK(std::abs(w2.c() - w1.c()) < 1e-3);
    }
}

TEST_CASE("shifting the series shifts the fitted curve") {
    WaveletMixture truth;
    truth.components = {Wavelet::gaussian(300, 30, 6), Wavelet::gaussian(800, 70, 9)};
    const auto y = synth_daily_cases(truth, 100, 0.0, 1);
    const std::size_t k = 12;
    DailySeries shifted;
    shifted.origin = add_days(y.origin, -static_cast<long>(k));
    shifted.values.assign(k, 0.0);
    shifted.values.insert(shifted.values.end(), y.values.begin(), y.values.end());

    FitConfig cfg;
    cfg.family = Family::Gaussian;
    cfg.n_wavelets = 2;
    const auto f1 = fit(y, cfg);
    const auto f2 = fit(shifted, cfg);
    const double tol = 1e-3 * std::sqrt(norm2(y) / static_cast<double>(y.size()));
    for (std::size_t i = 1; i <= y.size(); ++i) {
        const double t = static_cast<double>(i);
        CHECK(std::abs(eval_mixture(f2.mixture, t + static_cast<double>(k)) - eval_mixture(f1.mixture, t)) < tol);
    }
}

TEST_CASE("other families fit their own shapes") {
    const auto curve = sir_curve(integrate(default_sir_reference()));
    struct Case {
        Family family;
        Wavelet truth;
    };
    for (const auto& c : {Case{Family::Gaussian, Wavelet::gaussian(400, 45, 10)},
                          Case{Family::GaussianTruncated, Wavelet::gaussian_truncated(400, 45, 20)},
                          Case{Family::SirWave, Wavelet::sir(curve, 400, -40, 0.8)}}) {
        WaveletMixture m;
        m.components = {c.truth};
        const auto y = synth_daily_cases(m, 100, 0.0, 1);
        FitConfig cfg;
        cfg.family = c.family;
        cfg.n_wavelets = 1;
        cfg.sir_curve = curve;
        const auto out = fit(y, cfg);
        CHECK_MESSAGE(out.report.sse < 1e-6 * norm2(y), to_string(c.family));
    }
    for (auto f : {Family::Gompertz, Family::BetaPrime}) {
        const auto y = synth_daily_cases(three_waves(), 120, 0.0, 1);
        FitConfig cfg;
        cfg.family = f;
        cfg.n_wavelets = 3;
        cfg.n_starts = 4;
        const auto out = fit(y, cfg);
        CHECK(out.report.sse < out.initial_sse);
        for (const auto& w : out.mixture.components) CHECK(w.family() == f);
    }
}

TEST_CASE("fit rejects impossible configurations") {
    DailySeries y;
    y.values.assign(8, 1.0);
    FitConfig cfg;
    cfg.n_wavelets = 3;
    CHECK_THROWS_AS(fit(y, cfg), ConfigError);
    cfg.n_wavelets = 0;
    CHECK_THROWS_AS(fit(y, cfg), ConfigError);
    cfg.n_wavelets = 1;
    cfg.n_starts = 0;
    CHECK_THROWS_AS(fit(y, cfg), ConfigError);
}

TEST_CASE("a fit with no usable start reports every start") {
    DailySeries y;
    for (int i = 1; i <= 30; ++i) y.values.push_back(1e200 * (1 + std::sin(0.2 * i)));
    FitConfig cfg;
    cfg.n_wavelets = 1;
    cfg.n_starts = 3;
    try {
        (void)fit(y, cfg);
        FAIL("expected FitError");
    } catch (const FitError& e) {
        CHECK(e.starts().size() == 3);
    }
}

TEST_CASE("forecast examples") {
    const auto m = three_waves();
    const auto f = forecast(m, 100, 60);
    REQUIRE(f.size() == 60);
    CHECK(f.origin == add_days(m.origin, 100));
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(f.values[i] == eval_mixture(m, 101.0 + static_cast<double>(i)));
        CHECK(f.values[i] >= 0.0);
    }
    CHECK(forecast(m, 100, 1).values[0] == eval_mixture(m, 101.0));
    WaveletMixture zero;
    zero.components = {Wavelet::log_normal(0, 3, 0.2)};
    for (double v : forecast(zero, 10, 60).values) CHECK(v == 0.0);
    CHECK_THROWS_AS(forecast(m, 100, 0), ConfigError);
}

TEST_CASE("decomposition sums to the mixture") {
    const auto m = three_waves();
    const auto parts = decompose(m, 1, 500);
    REQUIRE(parts.size() == 3);
    for (std::size_t i = 0; i < 500; ++i) {
        double sum = 0.0;
        for (const auto& p : parts) sum += p.values[i];
        const double total = eval_mixture(m, static_cast<double>(i + 1));
        CHECK(std::abs(sum - total) <= 1e-10 * std::max(1.0, total));
    }
    for (std::size_t c = 0; c < 3; ++c) {
        const auto& v = parts[c].values;
        const auto argmax = static_cast<double>(std::max_element(v.begin(), v.end()) - v.begin()) + 1.0;
        CHECK(std::abs(argmax - peak(m.components[c])) <= 1.0);
    }
    WaveletMixture one;
    one.components = {m.components[1]};
    const auto single = decompose(one, 10, 40);
    REQUIRE(single.size() == 1);
    for (std::size_t i = 0; i < single[0].size(); ++i) CHECK(single[0].values[i] == eval_mixture(one, 10.0 + static_cast<double>(i)));
}

TEST_CASE("redundant components are flagged") {
    WaveletMixture m;
    m.components = {Wavelet::log_normal(1000, 3, 0.2), Wavelet::log_normal(0.5, 4, 0.2), Wavelet::log_normal(2, 4.5, 0.1)};
    const auto r = redundant_components(m);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == 1);
}
