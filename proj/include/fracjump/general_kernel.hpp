#pragma once

#include "fracjump/fractional_kernel.hpp"
#include "fracjump/grid.hpp"
#include "fracjump/special_functions.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracjump {

/// Volterra kernel outside the built-in fractional family: a positive
/// evaluator on {0 <= s < t}, an optional dominating kernel used by the
/// resolvent construction, and an optional exact cell integral
/// (t, a, b) -> integral of the dominating kernel over [a, b].
struct GeneralKernel {
    std::function<double(double, double)> evaluator;
    std::function<double(double, double)> bound_kernel;
    std::function<double(double, double, double)> cell_integral;
    bool scale_monotone_claimed = false;

    static GeneralKernel constant(double c) {
        GeneralKernel k;
        k.evaluator = [c](double, double) { return c; };
        k.bound_kernel = k.evaluator;
        k.cell_integral = [c](double, double a, double b) { return c * (b - a); };
        k.scale_monotone_claimed = c >= 0.0;
        return k;
    }

    /// Dominating kernel C5(T) (t-s)^{-alpha*(T)} of a fractional kernel,
    /// with exact cell integrals.
    static GeneralKernel from_fractional(const FractionalKernel& fk, double T) {
        GeneralKernel k;
        const double c5 = singular_bound_constant(fk, T);
        const double a_star = fk.order.max_order(T);
        k.evaluator = [fk](double t, double s) { return std::abs(fk(t, s)); };
        k.bound_kernel = [c5, a_star](double t, double s) { return c5 * std::pow(t - s, -a_star); };
        const double q = 1.0 - a_star;
        k.cell_integral = [c5, q](double t, double a, double b) {
            const double right = std::pow(t - a, q);
            const double left = (b >= t) ? 0.0 : std::pow(t - b, q);
            return c5 * (right - left) / q;
        };
        k.scale_monotone_claimed = true;
        return k;
    }

    double bound(double t, double s) const {
        return bound_kernel ? bound_kernel(t, s) : evaluator(t, s);
    }

    /// Integral of the dominating kernel over [a, b] at outer time t; exact
    /// when a closed form was supplied, 8-point Gauss-Legendre otherwise.
    double bound_cell_integral(double t, double a, double b) const {
        if (cell_integral) return cell_integral(t, a, b);
        static constexpr double x[4] = {0.1834346424956498, 0.5255324099163290,
                                        0.7966664774136267, 0.9602898564975363};
        static constexpr double w[4] = {0.3626837833783620, 0.3137066458778873,
                                        0.2223810344533745, 0.1012285362903763};
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double acc = 0.0;
        for (int q = 0; q < 4; ++q) {
            acc += w[q] * (bound(t, mid - half * x[q]) + bound(t, mid + half * x[q]));
        }
        return acc * half;
    }
};

/// Thrown when the iterated-kernel integrals fail to decay geometrically.
class ResolventDivergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Report on the integrability and small-window conditions the resolvent
/// construction assumes; the window condition is a limsup and is probed at
/// the recorded finite epsilon schedule only.
struct KernelConditionReport {
    double sup_integral = 0.0;
    std::vector<double> epsilons;
    std::vector<double> window_values; // sup_t of the [t, t+eps] integral, per eps
    bool ok = true;
    std::string message;
};

inline KernelConditionReport check_kernel_conditions(const GeneralKernel& k, double T,
                                                     std::size_t time_samples = 64) {
    KernelConditionReport r;
    for (std::size_t i = 1; i <= time_samples; ++i) {
        const double t = T * static_cast<double>(i) / static_cast<double>(time_samples);
        r.sup_integral = std::max(r.sup_integral, k.bound_cell_integral(t, 0.0, t));
    }
    if (!std::isfinite(r.sup_integral)) {
        r.ok = false;
        r.message = "sup_t of the kernel integral is not finite on the sample";
    }
    for (int e = 3; e <= 10; ++e) {
        const double eps = std::pow(2.0, -e);
        double window = 0.0;
        for (std::size_t i = 0; i < time_samples; ++i) {
            const double t = (T - eps) * static_cast<double>(i) / static_cast<double>(time_samples);
            window = std::max(window, k.bound_cell_integral(t + eps, t, t + eps));
        }
        r.epsilons.push_back(eps);
        r.window_values.push_back(window);
    }
    if (r.ok && r.window_values.back() >= 1.0) {
        r.ok = false;
        r.message = "small-window kernel integral does not drop below 1 at the probed scales";
    }
    return r;
}

/// Partial sum of iterated kernels r_n on a grid, with the per-term integral
/// sups used for the geometric-decay diagnostic.
class ResolventTable {
public:
    ResolventTable(Grid grid, std::vector<double> values, std::size_t n_terms,
                   std::vector<double> term_sups, double c11, KernelConditionReport cond)
        : grid_(std::move(grid)),
          values_(std::move(values)),
          n_terms_(n_terms),
          term_integral_sup_(std::move(term_sups)),
          c11_estimate_(c11),
          conditions_(std::move(cond)) {
        const std::size_t n = grid_.size();
        offsets_.assign(n, 0);
        std::size_t total = 0;
        for (std::size_t i = 1; i < n; ++i) {
            offsets_[i] = total;
            total += i;
        }
    }

    /// r(t_i, t_j), j < i.
    double operator()(std::size_t i, std::size_t j) const {
        if (j >= i || i >= grid_.size())
            throw std::invalid_argument("ResolventTable: need j < i < node count");
        return values_[offsets_[i] + j];
    }

    const Grid& grid() const { return grid_; }
    std::size_t n_terms() const { return n_terms_; }
    const std::vector<double>& term_integral_sup() const { return term_integral_sup_; }
    double c11_estimate() const { return c11_estimate_; }
    const KernelConditionReport& conditions() const { return conditions_; }

private:
    Grid grid_;
    std::vector<double> values_;
    std::size_t n_terms_;
    std::vector<double> term_integral_sup_;
    double c11_estimate_;
    KernelConditionReport conditions_;
    std::vector<std::size_t> offsets_;
};

/// Neumann-series resolvent r = sum of iterated kernels r_n, accumulated on
/// the grid. The dominating-kernel factor is integrated exactly per cell;
/// the previous iterate enters by trapezoid, falling back to the
/// right-endpoint rectangle on the cell touching its diagonal singularity.
inline ResolventTable resolvent_compute(const GeneralKernel& k, const Grid& grid,
                                        std::size_t n_max) {
    if (n_max < 2) throw std::invalid_argument("resolvent_compute: n_max must be >= 2");
    auto conditions = check_kernel_conditions(k, grid.horizon);
    if (!conditions.ok)
        throw std::invalid_argument("resolvent_compute: bound kernel fails its admissibility probe: " +
                                    conditions.message);

    const std::size_t n = grid.size();
    std::vector<std::size_t> offsets(n, 0);
    std::size_t total = 0;
    for (std::size_t i = 1; i < n; ++i) {
        offsets[i] = total;
        total += i;
    }
    auto at = [&offsets](std::vector<double>& v, std::size_t i, std::size_t j) -> double& {
        return v[offsets[i] + j];
    };

    std::vector<double> prev(total), next(total), sum(total);
    // cell integrals of the dominating kernel, W[i][m] for m < i
    std::vector<double> cellw(total);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t m = 0; m < i; ++m)
            at(cellw, i, m) = k.bound_cell_integral(grid.nodes[i], grid.nodes[m], grid.nodes[m + 1]);

    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) at(prev, i, j) = k.bound(grid.nodes[i], grid.nodes[j]);
    sum = prev;

    auto term_sup = [&](const std::vector<double>& term) {
        // left-endpoint Riemann diagnostic of sup_i int_0^{t_i} r_n(t_i, s) ds
        double sup = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < i; ++j) acc += grid.step(j) * term[offsets[i] + j];
            sup = std::max(sup, acc);
        }
        return sup;
    };

    std::vector<double> sups;
    sups.push_back(term_sup(prev));

    for (std::size_t iter = 2; iter <= n_max; ++iter) {
        for (std::size_t i = 1; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                double acc = 0.0;
                for (std::size_t m = j; m < i; ++m) {
                    const double w = at(cellw, i, m);
                    if (m == j) {
                        acc += w * prev[offsets[m + 1] + j]; // right endpoint: r_{n-1} singular at u = t_j
                    } else {
                        acc += 0.5 * w * (prev[offsets[m] + j] + prev[offsets[m + 1] + j]);
                    }
                }
                at(next, i, j) = acc;
            }
        }
        for (std::size_t idx = 0; idx < total; ++idx) sum[idx] += next[idx];
        sups.push_back(term_sup(next));
        prev.swap(next);
    }

    double c11 = 0.0;
    const std::size_t tail = std::min<std::size_t>(3, sups.size() - 1);
    for (std::size_t m = sups.size() - tail; m < sups.size(); ++m) {
        if (sups[m - 1] > 0.0) c11 = std::max(c11, sups[m] / sups[m - 1]);
    }
    if (c11 >= 1.0 || !std::isfinite(c11)) {
        throw ResolventDivergence(
            "resolvent_compute: iterated-kernel integrals are not decaying geometrically "
            "by n_max (late ratio " +
            std::to_string(c11) + ")");
    }
    return ResolventTable(grid, std::move(sum), n_max, std::move(sups), c11, std::move(conditions));
}

/// Samples u in (0, 1) and t pairs; true iff t -> t * kappa~(t, t u) is
/// nondecreasing on every sampled pair.
inline bool check_scale_condition(const GeneralKernel& k, double T, std::size_t samples) {
    const std::size_t m_u = std::max<std::size_t>(8, static_cast<std::size_t>(std::sqrt(static_cast<double>(samples))));
    const std::size_t m_t = std::max<std::size_t>(8, samples / m_u);
    for (std::size_t a = 0; a < m_u; ++a) {
        const double u = (static_cast<double>(a) + 0.5) / static_cast<double>(m_u);
        double last = 0.0;
        for (std::size_t b = 1; b <= m_t; ++b) {
            const double t = T * static_cast<double>(b) / static_cast<double>(m_t);
            const double v = t * k.bound(t, t * u);
            if (b > 1 && v < last * (1.0 - 1e-12)) return false;
            last = v;
        }
    }
    return true;
}

} // namespace fracjump
