#pragma once

// Test-only reference implementations. Everything here is deliberately
// independent of the library code paths it is used to check: brute-force
// series, quadrature of defining integrals, recurrences from exact anchors.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracles {

// Gamma at x = k/2 (x > 0) by exact recurrence from Gamma(1/2) = sqrt(pi)
// and Gamma(1) = 1, in extended precision.
inline long double gamma_half_integer(int twice_x) {
    // anchors: Gamma(1) = 1, Gamma(1/2) = sqrt(pi); then Gamma(x+1) = x Gamma(x)
    long double acc = (twice_x % 2 == 0) ? 1.0L : sqrtl(3.14159265358979323846264338327950288L);
    long double x = (twice_x % 2 == 0) ? 1.0L : 0.5L;
    const long double target = static_cast<long double>(twice_x) / 2.0L;
    while (x < target - 0.25L) {
        acc *= x;
        x += 1.0L;
    }
    return acc;
}

// tanh-sinh quadrature of f over (0, 1); handles integrable endpoint
// singularities. The integrand receives both the abscissa p and 1 - p so
// endpoint distances never go through a catastrophic cancellation.
inline long double tanh_sinh(const std::function<long double(long double, long double)>& f,
                             int level = 7) {
    const long double pi_half = 1.57079632679489661923132169163975144L;
    const long double h = 1.0L / static_cast<long double>(1 << level);
    const int kmax = static_cast<int>(7.0L / h);
    long double sum = 0.0L;
    for (int k = -kmax; k <= kmax; ++k) {
        const long double t = h * static_cast<long double>(k);
        const long double u = pi_half * sinhl(t);
        const long double q = expl(-2.0L * fabsl(u)); // in (0, 1]
        const long double small_side = q / (1.0L + q); // distance to the nearer endpoint
        const long double big_side = 1.0L / (1.0L + q);
        const long double w = pi_half * coshl(t) * (4.0L * q / ((1.0L + q) * (1.0L + q)));
        if (small_side <= 0.0L || w <= 0.0L) continue;
        if (k < 0) {
            sum += w * f(small_side, big_side);
        } else {
            sum += w * f(big_side, small_side);
        }
    }
    return 0.5L * sum * h;
}

// Brute-force Mittag-Leffler series in extended precision with a fixed
// (large) term count; the summation stops only on term underflow.
inline long double mittag_leffler_series(long double p, long double q, long double z,
                                         int terms = 10000) {
    long double sum = 0.0L;
    for (int k = 0; k < terms; ++k) {
        const long double lg = lgammal(p * static_cast<long double>(k) + q);
        long double term;
        if (z == 0.0L) {
            term = (k == 0) ? expl(-lg) : 0.0L;
        } else {
            term = expl(static_cast<long double>(k) * logl(z) - lg);
        }
        sum += term;
        if (k > 4 && term < 1e-30L * sum) break;
    }
    return sum;
}

// Adaptive Simpson quadrature for smooth integrands (no endpoint singularity).
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 28) {
    auto simpson = [&](double lo, double hi) {
        const double m = 0.5 * (lo + hi);
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(m) + f(hi));
    };
    std::function<double(double, double, double, int)> rec = [&](double lo, double hi, double whole,
                                                                 int d) -> double {
        const double m = 0.5 * (lo + hi);
        const double left = simpson(lo, m);
        const double right = simpson(m, hi);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
            return left + right + (left + right - whole) / 15.0;
        }
        return rec(lo, m, left, d - 1) + rec(m, hi, right, d - 1);
    };
    return rec(a, b, simpson(a, b), depth);
}

// Least-squares slope of y against x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double d = n * sxx - sx * sx;
    return {(n * sxy - sx * sy) / d, (sxx * sy - sx * sxy) / d};
}

} // namespace oracles
