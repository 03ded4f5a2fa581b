#pragma once

#include "fracjump/parallel.hpp"
#include "fracjump/problem.hpp"
#include "fracjump/special_functions.hpp"
#include "fracjump/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracjump {

/// Empirical p-th moment of the running supremum over M paths.
struct MomentReport {
    double p = 2.0;
    std::size_t paths = 0;
    double estimate = 0.0;
    double std_err = 0.0;
    std::optional<double> envelope; // theoretical value with a fitted constant
    std::size_t failures = 0;
};

inline MomentReport mc_sup_moment(const Problem& prob, double p, std::size_t M,
                                  std::uint64_t master_seed, unsigned threads = 0) {
    if (!(p >= 1.0)) throw std::invalid_argument("mc_sup_moment: p must be >= 1");
    if (M < 1) throw std::invalid_argument("mc_sup_moment: M must be >= 1");
    std::vector<double> sup_p(M, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> failed(M, 0);
    parallel_for(M, threads, [&](std::size_t k) {
        try {
            const auto path = solve_path(prob, master_seed, k);
            sup_p[k] = std::pow(path.sup_abs(), p);
        } catch (const PicardNonConvergence&) {
            failed[k] = 1;
        }
    });
    MomentReport rep;
    rep.p = p;
    rep.paths = M;
    std::vector<double> ok;
    ok.reserve(M);
    for (std::size_t k = 0; k < M; ++k) {
        if (failed[k]) {
            ++rep.failures;
        } else {
            ok.push_back(sup_p[k]);
        }
    }
    if (rep.failures * 100 > M)
        throw std::runtime_error("mc_sup_moment: more than 1% of paths failed to converge (" +
                                 std::to_string(rep.failures) + "/" + std::to_string(M) + ")");
    const auto mv = mean_variance(ok);
    rep.estimate = mv.mean;
    rep.std_err = mv.std_err;
    return rep;
}

/// Moment-bound envelope c (1 + |u0|^p) E_{1-a*,1}(c Gamma(1-a*) T^{1-a*})
/// with the (non-constructive) constant supplied by calibration.
inline double theoretical_moment_envelope(double fitted_c, double p, double T, double alpha_star,
                                          double u0_norm, const SeriesControl& ctrl = {}) {
    if (!(fitted_c > 0.0)) throw std::invalid_argument("theoretical_moment_envelope: c must be > 0");
    if (!(alpha_star >= 0.0) || alpha_star >= 1.0)
        throw std::invalid_argument("theoretical_moment_envelope: alpha* must be in [0, 1)");
    const double q = 1.0 - alpha_star;
    const double arg = fitted_c * gamma(q) * std::pow(T, q);
    return fitted_c * (1.0 + std::pow(std::abs(u0_norm), p)) * mittag_leffler(q, 1.0, arg, ctrl);
}

/// Increment-moment regression against dyadic lags.
struct HolderReport {
    double p = 2.0;
    double gamma_holder = 1.0;
    double alpha_star = 0.0;
    std::vector<double> lags;    // strictly decreasing, multiples of the grid step
    std::vector<double> moments; // pooled E|u(t + lag) - u(t)|^p per lag
    double fitted_slope = 0.0;
    double slope_se = 0.0;
    double c4_theoretical = 0.0; // min{1, p gamma, p (1 - alpha*)}
    bool slope_defined = false;
    std::size_t paths = 0;
};

inline HolderReport holder_exponent_estimate(const Problem& prob, double p, std::size_t M,
                                             std::vector<double> lags, std::uint64_t master_seed,
                                             unsigned threads = 0) {
    if (lags.size() < 3) throw std::invalid_argument("holder_exponent_estimate: need >= 3 lags");
    const double T = prob.horizon;
    const double dt = T / static_cast<double>(prob.steps);
    std::sort(lags.begin(), lags.end(), std::greater<>());
    std::vector<std::size_t> lag_steps;
    for (double lag : lags) {
        if (!(lag > dt * (1.0 - 1e-12)) || lag > T / 4.0 * (1.0 + 1e-12))
            throw std::invalid_argument("holder_exponent_estimate: lags must lie in (grid step, T/4]");
        lag_steps.push_back(
            std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(lag / dt))));
    }
    // base points keep clear of the initial layer: t >= 2 * largest lag
    const double t_min = 2.0 * lags.front();

    const std::size_t n_lags = lags.size();
    std::vector<std::vector<double>> sums(M), counts(M);
    parallel_for(M, threads, [&](std::size_t k) {
        const auto path = solve_path(prob, master_seed, k);
        // per-path: restrict to the uniform subgrid shared by all paths
        std::vector<std::size_t> idx(prob.steps + 1);
        for (std::size_t i = 0; i <= prob.steps; ++i) {
            const double t = T * static_cast<double>(i) / static_cast<double>(prob.steps);
            const auto it = std::lower_bound(path.times.begin(), path.times.end(), t);
            idx[i] = static_cast<std::size_t>(it - path.times.begin());
        }
        sums[k].assign(n_lags, 0.0);
        counts[k].assign(n_lags, 0.0);
        for (std::size_t l = 0; l < n_lags; ++l) {
            const std::size_t step = lag_steps[l];
            for (std::size_t i = 0; i + step <= prob.steps; ++i) {
                const double t = T * static_cast<double>(i) / static_cast<double>(prob.steps);
                if (t < t_min) continue;
                const double d = path.values[idx[i + step]] - path.values[idx[i]];
                sums[k][l] += std::pow(std::abs(d), p);
                counts[k][l] += 1.0;
            }
        }
    });

    HolderReport rep;
    rep.p = p;
    rep.paths = M;
    rep.gamma_holder = prob.kernel.order.holder_exponent();
    rep.alpha_star = prob.kernel.order.max_order(T);
    rep.c4_theoretical = std::min({1.0, p * rep.gamma_holder, p * (1.0 - rep.alpha_star)});
    rep.lags = lags;
    rep.moments.assign(n_lags, 0.0);
    for (std::size_t l = 0; l < n_lags; ++l) {
        CompensatedSum s, c;
        for (std::size_t k = 0; k < M; ++k) {
            s.add(sums[k][l]);
            c.add(counts[k][l]);
        }
        rep.moments[l] = c.value() > 0.0 ? s.value() / c.value() : 0.0;
    }
    if (std::all_of(rep.moments.begin(), rep.moments.end(), [](double m) { return m > 0.0; })) {
        std::vector<double> lx, ly;
        for (std::size_t l = 0; l < n_lags; ++l) {
            lx.push_back(std::log(rep.lags[l]));
            ly.push_back(std::log(rep.moments[l]));
        }
        const auto fit = ols_fit(lx, ly);
        rep.fitted_slope = fit.slope;
        rep.slope_se = fit.slope_se;
        rep.slope_defined = true;
    }
    return rep;
}

/// Gronwall-envelope spot check: the equality-case solution of the singular
/// integral inequality, built by fixed-point iteration on a grid, stays
/// below the Mittag-Leffler envelope.
struct GronwallCheck {
    double beta = 0.5;
    double c6 = 0.0;
    std::size_t samples = 0;
    std::size_t violations = 0;
    double max_excess = 0.0; // worst phi - envelope over the sample
};

inline GronwallCheck gronwall_validate(double beta_exp, double c6,
                                       const std::function<double(double)>& phi0, double a,
                                       double b, std::size_t grid_n = 512, double slack = 1e-8) {
    if (!(beta_exp > 0.0) || !(beta_exp <= 1.0))
        throw std::invalid_argument("gronwall_validate: beta must be in (0, 1]");
    if (!(c6 >= 0.0)) throw std::invalid_argument("gronwall_validate: C6 must be >= 0");
    if (!(b > a)) throw std::invalid_argument("gronwall_validate: need b > a");

    // kernel C6 (t-s)^{beta-1} as a constant-order fractional kernel on [0, b-a]
    auto order = FractionalOrder::constant(1.0 - beta_exp, b - a);
    order.regularity_claimed = false;
    const FractionalKernel kern{c6 * gamma(beta_exp), order};
    const auto grid = Grid::build(b - a, grid_n);
    WeightRows rows(kern, grid);

    const std::size_t n = grid.size();
    std::vector<double> phi(n), base(n), next(n);
    for (std::size_t i = 0; i < n; ++i) {
        base[i] = phi0(a + grid.nodes[i]);
        phi[i] = base[i];
    }
    std::vector<double> scratch;
    for (std::size_t iter = 0; iter < 4 * grid_n; ++iter) {
        next = base;
        double diff = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const auto w = rows.row(i, scratch);
            double acc = 0.0;
            for (std::size_t j = 0; j < i; ++j) acc += w[j] * phi[j];
            next[i] = base[i] + acc;
            diff = std::max(diff, std::abs(next[i] - phi[i]));
        }
        phi.swap(next);
        if (diff == 0.0) break;
    }

    GronwallCheck rep;
    rep.beta = beta_exp;
    rep.c6 = c6;
    rep.samples = n;
    for (std::size_t i = 0; i < n; ++i) {
        const double env = gronwall_envelope(base[i], c6, beta_exp, grid.nodes[i]);
        rep.max_excess = std::max(rep.max_excess, phi[i] - env);
        if (phi[i] > env + slack) ++rep.violations;
    }
    return rep;
}

/// Second-moment identity of the compensated small-jump integral for a
/// deterministic, time-constant integrand g(z): the sample variance of
/// sum_k g(z_k) - T * nu(g) against the exact T * nu(g^2).
struct IsometryReport {
    double empirical = 0.0;
    double exact = 0.0;
    double rel_error = 0.0;
    bool pass = false;
    std::size_t paths = 0;
};

inline IsometryReport isometry_check(const LevyMeasure& measure,
                                     const std::function<double(const std::vector<double>&)>& g,
                                     double T, std::size_t M, std::uint64_t master_seed,
                                     unsigned threads = 0, std::size_t quadrature_nodes = 256) {
    const auto rule = make_compensator_rule(measure, quadrature_nodes);
    auto lift = [&g](double, double, const std::vector<double>& z) { return g(z); };
    auto lift2 = [&g](double, double, const std::vector<double>& z) {
        const double v = g(z);
        return v * v;
    };
    const double nu_g = apply_compensator_rule(rule, lift, 0.0, 0.0);
    const double nu_g2 = apply_compensator_rule(rule, lift2, 0.0, 0.0);

    std::vector<double> integrals(M, 0.0);
    parallel_for(M, threads, [&](std::size_t k) {
        const auto real = sample_realization(measure, T, derive_seed(master_seed, k));
        double v = -T * nu_g;
        for (const auto& e : real.events)
            if (e.klass == JumpClass::Small) v += g(e.mark);
        integrals[k] = v;
    });

    IsometryReport rep;
    rep.paths = M;
    rep.exact = T * nu_g2;
    const auto mv = mean_variance(integrals);
    rep.empirical = mv.variance;
    rep.rel_error = rep.exact != 0.0 ? std::abs(rep.empirical / rep.exact - 1.0)
                                     : std::abs(rep.empirical);
    rep.pass = rep.rel_error <= 5.0 / std::sqrt(static_cast<double>(M));
    return rep;
}

/// Discrete Jensen inequality |sum a_i|^p <= max(m^{p-1}, 1) sum |a_i|^p.
inline bool jensen_discrete_check(std::span<const double> values, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("jensen_discrete_check: p must be > 0");
    if (values.empty()) return true;
    CompensatedSum total, powers;
    for (double a : values) {
        total.add(a);
        powers.add(std::pow(std::abs(a), p));
    }
    const double m = static_cast<double>(values.size());
    const double lhs = std::pow(std::abs(total.value()), p);
    const double rhs = std::max(std::pow(m, p - 1.0), 1.0) * powers.value();
    return lhs <= rhs * (1.0 + 1e-12) + 1e-300;
}

} // namespace fracjump
