#pragma once

#include "fracjump/coefficients.hpp"
#include "fracjump/fractional_kernel.hpp"
#include "fracjump/grid.hpp"
#include "fracjump/noise.hpp"
#include "fracjump/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fracjump {

/// Càdlàg trajectory on a grid. `values[i]` is u(t_i) (post-jump at jump
/// nodes); `left_limits[i]` differs from `values[i]` exactly at the nodes
/// listed in `jump_nodes`.
struct Path {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> left_limits;
    std::vector<std::size_t> jump_nodes;
    double u0 = 0.0;

    std::size_t size() const { return times.size(); }

    bool is_jump_node(std::size_t i) const {
        return std::binary_search(jump_nodes.begin(), jump_nodes.end(), i);
    }

    double sup_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }

    /// Columns: t, u, is_jump, left_limit.
    void write_csv(std::ostream& os) const {
        os << "t,u,is_jump,left_limit\n";
        os.precision(17);
        for (std::size_t i = 0; i < times.size(); ++i) {
            os << times[i] << ',' << values[i] << ',' << (is_jump_node(i) ? 1 : 0) << ','
               << left_limits[i] << '\n';
        }
    }
};

/// Per-solve iteration diagnostics: the sup-norm increments g_n of the
/// Picard sweeps and the fitted theoretical envelope they are compared to.
struct PicardReport {
    std::size_t iterations = 0;
    std::vector<double> sup_diffs;
    std::vector<double> bound_curve;
    double fitted_c11 = 0.0;
    double fitted_a = 0.0; // c11 * Gamma(1-a*) * T^{1-a*}, the envelope's geometric factor
    double fitted_scale = 0.0;
    bool converged = false;
};

class PicardNonConvergence : public std::runtime_error {
public:
    PicardNonConvergence(const std::string& what, PicardReport rep, int segment_index)
        : std::runtime_error(what), report(std::move(rep)), segment(segment_index) {}
    PicardReport report;
    int segment; // -1 for the unsegmented solve
};

struct SolveOptions {
    double tol = 1e-10;        // 0 iterates to exact stationarity
    std::size_t max_iter = 50; // per segment
};

/// Right side of the iteration error estimate at t = T:
/// [c11 Gamma(1-a*) T^{1-a*}]^n / Gamma(1 + n (1-a*)) * (1-a*) * K.
/// p enters only through the fitted constants (c11, K) supplied by the caller.
inline double theoretical_picard_bound(const FractionalKernel& k, double T, double p, double K,
                                       double c11, std::size_t n) {
    if (!(p >= 1.0 && p <= 2.0))
        throw std::invalid_argument("theoretical_picard_bound: p must be in [1, 2]");
    if (!(c11 > 0.0)) throw std::invalid_argument("theoretical_picard_bound: c11 must be > 0");
    if (n < 1) throw std::invalid_argument("theoretical_picard_bound: n must be >= 1");
    const double q = 1.0 - k.order.max_order(T);
    const double log_a = std::log(c11) + log_gamma(q) + q * std::log(T);
    return std::exp(static_cast<double>(n) * log_a - log_gamma(1.0 + static_cast<double>(n) * q)) *
           q * K;
}

/// Consecutive-term ratio of the same estimate (K cancels).
inline double picard_bound_ratio(double q, double fitted_a, std::size_t n) {
    return fitted_a * std::exp(log_gamma(1.0 + static_cast<double>(n) * q) -
                               log_gamma(1.0 + static_cast<double>(n + 1) * q));
}

/// Where the observed increments settle into the contraction regime:
/// `decreasing_from` / `dominated_from` are the smallest n >= 3 from which,
/// through the end of the run, the increments strictly decrease resp. their
/// ratios sit below the fitted envelope's ratio curve. 0 means never.
struct ContractionCheck {
    bool eventually_decreasing = false;
    std::size_t decreasing_from = 0;
    bool eventually_dominated = false;
    std::size_t dominated_from = 0;
    std::size_t n_ratios = 0;
};

/// Smallest envelope factor A = c11 Gamma(1-a*) T^{1-a*} whose est3-shaped
/// curve A^n / Gamma(1+nq) * q * K covers both of the first two observed
/// increments; K is the initial-iterate surrogate (|u0| for the plain solve).
inline double dominance_fit_a(const PicardReport& rep, double q, double K) {
    if (rep.sup_diffs.size() < 2 || !(K > 0.0)) return 0.0;
    const double a1 = rep.sup_diffs[0] * std::exp(log_gamma(1.0 + q)) / (q * K);
    const double a2 = std::sqrt(rep.sup_diffs[1] * std::exp(log_gamma(1.0 + 2.0 * q)) / (q * K));
    return std::max(a1, a2);
}

inline ContractionCheck check_contraction(const PicardReport& rep, double q,
                                          double a_override = 0.0, double noise_floor = 0.0,
                                          std::size_t min_tail = 2) {
    ContractionCheck out;
    const auto& g = rep.sup_diffs; // g[n-1] is the n-th increment
    const double a = a_override > 0.0 ? a_override : rep.fitted_a;
    if (g.size() < 4 || a <= 0.0) return out;
    // ratios within the stopping layer are boundary-distorted; exclude them
    std::size_t last_ratio = g.size() - 1; // ratio n compares g_{n+1}/g_n
    while (last_ratio > 1 && g[last_ratio] <= noise_floor) --last_ratio;
    out.n_ratios = last_ratio;

    std::size_t dec = 0, dom = 0; // latest violation indices
    for (std::size_t n = 1; n <= last_ratio; ++n) {
        const double observed = g[n] / g[n - 1];
        if (!(g[n] < g[n - 1])) dec = n;
        if (!(observed <= picard_bound_ratio(q, a, n) * (1.0 + 1e-9))) dom = n;
    }
    out.decreasing_from = std::max<std::size_t>(3, dec + 1);
    out.dominated_from = std::max<std::size_t>(3, dom + 1);
    out.eventually_decreasing = out.decreasing_from + min_tail <= last_ratio + 1;
    out.eventually_dominated = out.dominated_from + min_tail <= last_ratio + 1;
    return out;
}

namespace detail {

/// Shared discretization state for one solve: weights, small events grouped
/// by grid cell, and the running large-jump constants.
class VolterraEngine {
public:
    VolterraEngine(const FractionalKernel& k, const CoefficientSet& coeffs,
                   const NoiseRealization& realization, double u0, const Grid& grid)
        : grid_(grid), coeffs_(coeffs), u0_(u0), weights_(shared_weight_rows(k, grid)) {
        const std::size_t cells = grid.size() - 1;
        cell_offset_.assign(cells + 1, 0);
        for (const auto& e : realization.events)
            if (e.klass == JumpClass::Small) ++cell_offset_[grid.node_before(e.time) + 1];
        for (std::size_t j = 1; j <= cells; ++j) cell_offset_[j] += cell_offset_[j - 1];
        small_events_.resize(cell_offset_[cells]);
        std::vector<std::size_t> fill(cells, 0);
        for (const auto& e : realization.events) {
            if (e.klass != JumpClass::Small) continue;
            const std::size_t j = grid_.node_before(e.time);
            small_events_[cell_offset_[j] + fill[j]++] = &e;
        }
        jump_add_.assign(grid.size(), 0.0);
    }

    const Grid& grid() const { return grid_; }

    /// Records a resolved large jump of size hv at node m.
    void add_jump_constant(std::size_t m, double hv) {
        for (std::size_t i = m + 1; i < jump_add_.size(); ++i) jump_add_[i] += hv;
    }

    /// One Jacobi sweep over the segment nodes (start, stop]: out[i] becomes
    /// the discrete integral-equation right side evaluated on the iterate v.
    /// Nodes outside the segment are copied through.
    void sweep(const std::vector<double>& v, std::size_t start, std::size_t stop,
               std::vector<double>& out) const {
        out = v;
        double drift_acc = 0.0, comp_acc = 0.0, jump_acc = 0.0;
        std::vector<double> scratch;
        for (std::size_t i = 1; i <= stop; ++i) {
            accumulate_cell(i - 1, v[i - 1], drift_acc, comp_acc, jump_acc);
            if (i <= start) continue;
            const auto row = weights_->row(i, scratch);
            double mem = 0.0;
            for (std::size_t j = 0; j < i; ++j) mem += row[j] * v[j];
            out[i] = combine(mem, drift_acc, comp_acc, jump_acc, i);
        }
    }

    /// Paper-style segment initialization u_0(t) = k(t): only the history
    /// before `start` contributes.
    void init_segment(std::vector<double>& v, std::size_t start, std::size_t stop) const {
        double drift_acc = 0.0, comp_acc = 0.0, jump_acc = 0.0;
        for (std::size_t j = 0; j < start; ++j)
            accumulate_cell(j, v[j], drift_acc, comp_acc, jump_acc);
        std::vector<double> scratch;
        for (std::size_t i = start + 1; i <= stop; ++i) {
            const auto row = weights_->row(i, scratch);
            double mem = 0.0;
            for (std::size_t j = 0; j < start; ++j) mem += row[j] * v[j];
            v[i] = combine(mem, drift_acc, comp_acc, jump_acc, i);
        }
    }

    double u0() const { return u0_; }

private:
    void accumulate_cell(std::size_t j, double vj, double& drift_acc, double& comp_acc,
                         double& jump_acc) const {
        const double dt = grid_.step(j);
        const double tj = grid_.nodes[j];
        drift_acc += dt * coeffs_.f(tj, vj);
        comp_acc += dt * coeffs_.compensator(tj, vj);
        for (std::size_t e = cell_offset_[j]; e < cell_offset_[j + 1]; ++e) {
            const JumpEvent& ev = *small_events_[e];
            jump_acc += coeffs_.g(ev.time, vj, ev.mark);
        }
    }

    double combine(double mem, double drift, double comp, double jump, std::size_t i) const {
        return (((u0_ + mem) + drift) + (jump - comp)) + jump_add_[i];
    }

    const Grid& grid_;
    const CoefficientSet& coeffs_;
    double u0_;
    std::shared_ptr<const WeightRows> weights_;
    std::vector<const JumpEvent*> small_events_;
    std::vector<std::size_t> cell_offset_;
    std::vector<double> jump_add_;
};

/// Picard iteration on one segment; returns per-sweep sup increments.
/// Throws PicardNonConvergence when max_iter sweeps leave the increment
/// above tol.
inline std::vector<double> segment_picard(const VolterraEngine& engine, std::vector<double>& v,
                                          std::size_t start, std::size_t stop,
                                          const SolveOptions& opts, int segment_index) {
    std::vector<double> diffs;
    engine.init_segment(v, start, stop);
    std::vector<double> next;
    for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
        engine.sweep(v, start, stop, next);
        double diff = 0.0;
        for (std::size_t i = start + 1; i <= stop; ++i) diff = std::max(diff, std::abs(next[i] - v[i]));
        v.swap(next);
        diffs.push_back(diff);
        if (diff <= opts.tol) return diffs;
    }
    PicardReport rep;
    rep.iterations = diffs.size();
    rep.sup_diffs = diffs;
    rep.converged = false;
    throw PicardNonConvergence("picard iteration did not reach tol " + std::to_string(opts.tol) +
                                   " within " + std::to_string(opts.max_iter) + " sweeps",
                               std::move(rep), segment_index);
}

/// est3-style envelope fitted to the first two observed increments.
inline void fit_bound_curve(PicardReport& rep, const FractionalKernel& k, double T) {
    if (rep.sup_diffs.size() < 2 || rep.sup_diffs[0] <= 0.0 || rep.sup_diffs[1] <= 0.0) return;
    const double q = 1.0 - k.order.max_order(T);
    const double ratio = rep.sup_diffs[1] / rep.sup_diffs[0];
    const double a = ratio * std::exp(log_gamma(1.0 + 2.0 * q) - log_gamma(1.0 + q));
    rep.fitted_a = a;
    rep.fitted_c11 = a / (gamma(q) * std::pow(T, q));
    rep.fitted_scale = rep.sup_diffs[0] * std::exp(log_gamma(1.0 + q)) / (a * q);
    rep.bound_curve.clear();
    for (std::size_t n = 1; n <= rep.sup_diffs.size(); ++n) {
        rep.bound_curve.push_back(
            std::exp(static_cast<double>(n) * std::log(a) - log_gamma(1.0 + static_cast<double>(n) * q)) *
            q * rep.fitted_scale);
    }
}

inline Path make_path(const Grid& grid, std::vector<double> values, std::vector<double> left_limits,
                      std::vector<std::size_t> jump_nodes, double u0) {
    Path p;
    p.times = grid.nodes;
    p.values = std::move(values);
    p.left_limits = std::move(left_limits);
    p.jump_nodes = std::move(jump_nodes);
    p.u0 = u0;
    return p;
}

} // namespace detail

struct PicardResult {
    Path path;
    PicardReport report;
};

/// Picard construction of the no-large-jump model on a frozen realization:
/// iterates the discrete integral equation from the constant initial guess
/// until the sup increment drops to tol. Large-jump events in the
/// realization are ignored (the caller passes the small-jump restriction).
inline PicardResult picard_solve(const FractionalKernel& k, const CoefficientSet& coeffs,
                                 const NoiseRealization& realization, double u0, const Grid& grid,
                                 const SolveOptions& opts = {}) {
    coeffs.validate_shape();
    detail::VolterraEngine engine(k, coeffs, realization, u0, grid);
    std::vector<double> v(grid.size(), u0);
    PicardReport rep;
    rep.sup_diffs = detail::segment_picard(engine, v, 0, grid.size() - 1, opts, -1);
    rep.iterations = rep.sup_diffs.size();
    rep.converged = true;
    detail::fit_bound_curve(rep, k, grid.horizon);
    Path p = detail::make_path(grid, v, v, {}, u0);
    return {std::move(p), std::move(rep)};
}

/// Independently coded single-pass cross-check: the same discrete system
/// solved by forward substitution (each node from the strictly earlier ones).
inline Path euler_volterra_solve(const FractionalKernel& k, const CoefficientSet& coeffs,
                                 const NoiseRealization& realization, double u0, const Grid& grid) {
    coeffs.validate_shape();
    const auto weights = shared_weight_rows(k, grid);
    const std::size_t n = grid.size();

    // small events by cell, directly from the sorted event list
    std::vector<std::pair<std::size_t, const JumpEvent*>> events;
    for (const auto& e : realization.events)
        if (e.klass == JumpClass::Small) events.emplace_back(grid.node_before(e.time), &e);

    std::vector<double> v(n, u0);
    std::vector<double> scratch;
    double drift = 0.0, comp = 0.0, jump = 0.0;
    std::size_t next_event = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t j = i - 1;
        drift += grid.step(j) * coeffs.f(grid.nodes[j], v[j]);
        comp += grid.step(j) * coeffs.compensator(grid.nodes[j], v[j]);
        while (next_event < events.size() && events[next_event].first <= j) {
            const JumpEvent& ev = *events[next_event].second;
            jump += coeffs.g(ev.time, v[events[next_event].first], ev.mark);
            ++next_event;
        }
        const auto row = weights->row(i, scratch);
        double mem = 0.0;
        for (std::size_t l = 0; l < i; ++l) mem += row[l] * v[l];
        v[i] = (((u0 + mem) + drift) + (jump - comp));
    }
    return detail::make_path(grid, v, v, {}, u0);
}

/// Interlaced construction: Picard segments between consecutive large-jump
/// arrivals, the jump relation applied exactly at each arrival node, and the
/// history entering later segments through the recomputed inhomogeneity.
inline Path interlaced_solve(const FractionalKernel& k, const CoefficientSet& coeffs,
                             const NoiseRealization& realization, double u0, const Grid& grid,
                             const SolveOptions& opts = {}) {
    coeffs.validate_shape();
    std::vector<const JumpEvent*> large;
    for (const auto& e : realization.events)
        if (e.klass == JumpClass::Large) large.push_back(&e);
    if (large.size() != grid.jump_nodes.size())
        throw std::invalid_argument(
            "interlaced_solve: grid was not built with this realization's large-jump times");

    detail::VolterraEngine engine(k, coeffs, realization, u0, grid);
    const std::size_t last = grid.size() - 1;
    std::vector<double> v(grid.size(), u0);
    std::vector<double> left_limits(grid.size(), u0);
    std::vector<std::size_t> jump_nodes;

    std::size_t start = 0;
    for (std::size_t s = 0; s <= large.size(); ++s) {
        const std::size_t stop = (s < large.size()) ? grid.jump_nodes[s] : last;
        if (stop > start) detail::segment_picard(engine, v, start, stop, opts, static_cast<int>(s));
        for (std::size_t i = start + 1; i <= stop; ++i) left_limits[i] = v[i];
        if (s < large.size()) {
            const std::size_t m = stop;
            const double left = v[m];
            const double hv = coeffs.h(grid.nodes[m], left, large[s]->mark);
            left_limits[m] = left;
            v[m] = left + hv;
            engine.add_jump_constant(m, hv);
            jump_nodes.push_back(m);
            start = m;
        }
    }
    return detail::make_path(grid, std::move(v), std::move(left_limits), std::move(jump_nodes), u0);
}

/// Deterministic single-jump construction in three pieces: the pre-jump
/// Volterra solution, the jump value at t0, and the post-jump equation whose
/// inhomogeneity carries the whole history across t0. Noise-free, so forward
/// substitution solves each piece exactly.
inline Path deterministic_example(const FractionalKernel& k, const DriftFn& f,
                                  const std::function<double(double, double)>& h_jump, double t0,
                                  double u0, const Grid& grid) {
    if (!(t0 > 0.0) || !(t0 < grid.horizon))
        throw std::domain_error("deterministic_example: t0 must lie in (0, T)");
    const auto it = std::lower_bound(grid.nodes.begin(), grid.nodes.end(), t0);
    if (it == grid.nodes.end() || *it != t0)
        throw std::domain_error("deterministic_example: t0 must be a grid node");
    const std::size_t m = static_cast<std::size_t>(it - grid.nodes.begin());

    const auto weights = shared_weight_rows(k, grid);
    const std::size_t n = grid.size();
    std::vector<double> v(n, u0);
    std::vector<double> left_limits(n, u0);
    std::vector<double> scratch;
    double jump_const = 0.0;
    double drift = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t j = i - 1;
        drift += grid.step(j) * (f ? f(grid.nodes[j], v[j]) : 0.0);
        const auto row = weights->row(i, scratch);
        double mem = 0.0;
        for (std::size_t l = 0; l < i; ++l) mem += row[l] * v[l];
        const double value = ((u0 + mem) + drift) + jump_const;
        left_limits[i] = value;
        if (i == m) {
            jump_const = h_jump(t0, value);
            v[i] = value + jump_const;
        } else {
            v[i] = value;
        }
    }
    return detail::make_path(grid, std::move(v), std::move(left_limits), {m}, u0);
}

} // namespace fracjump
