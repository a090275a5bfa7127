#pragma once

// Independent reference computations used to check the library. None of
// these call into efw, so a shared bug cannot make both sides agree.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

/// Richardson-extrapolated central difference, O(h^4).
inline double derivative(const std::function<double(double)>& f, double x, double h) {
    const double d1 = (f(x + h) - f(x - h)) / (2 * h);
    const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
    return (4 * d2 - d1) / 3;
}

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth) {
    const double m = (a + b) / 2;
    const double lm = (a + m) / 2;
    const double rm = (m + b) / 2;
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
    return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson quadrature on [a, b], started from `panels` equal
/// panels so narrow peaks are not missed by the first samples.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                        int depth = 50, int panels = 1) {
    double sum = 0.0;
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * w;
        const double hi = p + 1 == panels ? b : lo + w;
        const double fa = f(lo);
        const double fb = f(hi);
        const double fm = f((lo + hi) / 2);
        const double whole = (hi - lo) / 6 * (fa + 4 * fm + fb);
        sum += detail::simpson_step(f, lo, hi, fa, fm, fb, whole, tol / panels, depth);
    }
    return sum;
}

using Matrix = std::vector<std::vector<double>>;

/// Least squares through the normal equations, solved by Gaussian
/// elimination with partial pivoting in long double.
inline std::vector<double> least_squares(const Matrix& a, const std::vector<double>& y) {
    const std::size_t m = a.size();
    const std::size_t n = a.front().size();
    std::vector<std::vector<long double>> g(n, std::vector<long double>(n + 1, 0.0L));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t r = 0; r < m; ++r) g[i][j] += static_cast<long double>(a[r][i]) * a[r][j];
        }
        for (std::size_t r = 0; r < m; ++r) g[i][n] += static_cast<long double>(a[r][i]) * y[r];
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(g[r][col]) > std::fabs(g[pivot][col])) pivot = r;
        }
        std::swap(g[col], g[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const long double f = g[r][col] / g[col][col];
            for (std::size_t k = col; k <= n; ++k) g[r][k] -= f * g[col][k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(g[i][n] / g[i][i]);
    return x;
}

/// Centered (2d+1) mean by direct summation, full windows only.
inline std::vector<double> moving_average(const std::vector<double>& x, std::size_t d) {
    std::vector<double> out;
    for (std::size_t i = d; i + d < x.size(); ++i) {
        long double s = 0.0L;
        for (std::size_t k = i - d; k <= i + d; ++k) s += x[k];
        out.push_back(static_cast<double>(s / static_cast<long double>(2 * d + 1)));
    }
    return out;
}

/// Index of the first sample at or above fraction q of the total mass.
inline std::size_t mass_quantile(const std::vector<double>& y, double q) {
    double total = 0.0;
    for (double v : y) total += v;
    double run = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        run += y[i];
        if (run >= q * total) return i;
    }
    return y.size() - 1;
}

/// Grid point of the largest value of f on [lo, hi].
inline double grid_argmax(const std::function<double(double)>& f, double lo, double hi, std::size_t n) {
    double best_x = lo;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        const double v = f(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    return best_x;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace oracle
