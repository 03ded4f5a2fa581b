#pragma once

#include "fracjump/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace fracjump {

/// One atom of a purely atomic measure component.
struct MeasureAtom {
    std::vector<double> z;
    double mass = 0.0;
};

// Small-jump families on {0 < |z| < 1}. For mark dimension 1 the stable-like
// density is c |z|^{-1-beta} on either side of the origin; for d >= 2 the
// radial mass density is c r^{-1-beta} with uniform directions.
struct NoSmallJumps {};
struct StableLikeSmall {
    double c = 1.0;
    double beta = 0.5; // in (0, 2)
};
struct AnnulusUniformSmall {
    double mass = 1.0; // total mass on [r_lo, r_hi)
    double r_lo = 0.0;
    double r_hi = 1.0;
};
struct AtomsSmall {
    std::vector<MeasureAtom> atoms; // all |z| in (0, 1)
};
using SmallJumpFamily = std::variant<NoSmallJumps, StableLikeSmall, AnnulusUniformSmall, AtomsSmall>;

// Large-jump parts on {|z| >= 1}: a finite total mass plus a normalized
// radius distribution (directions uniform).
struct NoLargeJumps {};
struct ParetoLarge {
    double mass = 1.0;       // Lambda
    double tail_index = 1.5; // radius density tail_index * r^{-1-tail_index} on [1, inf)
};
struct ShellLarge {
    double mass = 1.0; // Lambda, radius uniform on [r_lo, r_hi)
    double r_lo = 1.0;
    double r_hi = 2.0;
};
struct AtomsLarge {
    std::vector<MeasureAtom> atoms; // all |z| >= 1
};
using LargeJumpPart = std::variant<NoLargeJumps, ParetoLarge, ShellLarge, AtomsLarge>;

namespace detail {
inline double norm(const std::vector<double>& z) {
    double s = 0.0;
    for (double x : z) s += x * x;
    return std::sqrt(s);
}
} // namespace detail

/// Parametric Lévy measure split into a small-jump family (truncated at
/// epsilon and compensated) and a finite-activity large-jump part.
struct LevyMeasure {
    int mark_dim = 1;
    SmallJumpFamily small = NoSmallJumps{};
    LargeJumpPart large = NoLargeJumps{};
    double epsilon = 1e-2; // truncation level in (0, 1)

    void validate() const {
        if (mark_dim < 1) throw std::invalid_argument("LevyMeasure: mark_dim must be >= 1");
        if (!(epsilon > 0.0) || !(epsilon < 1.0))
            throw std::invalid_argument("LevyMeasure: epsilon must be in (0, 1)");
        if (const auto* s = std::get_if<StableLikeSmall>(&small)) {
            if (!(s->c >= 0.0)) throw std::invalid_argument("LevyMeasure: stable-like c must be >= 0");
            if (!(s->beta > 0.0) || !(s->beta < 2.0))
                throw std::invalid_argument("LevyMeasure: stable-like beta must be in (0, 2)");
        } else if (const auto* a = std::get_if<AnnulusUniformSmall>(&small)) {
            if (!(a->mass >= 0.0)) throw std::invalid_argument("LevyMeasure: annulus mass must be >= 0");
            if (!(a->r_lo >= 0.0) || !(a->r_lo < a->r_hi) || !(a->r_hi <= 1.0))
                throw std::invalid_argument("LevyMeasure: annulus radii must satisfy 0 <= r_lo < r_hi <= 1");
        } else if (const auto* at = std::get_if<AtomsSmall>(&small)) {
            for (const auto& atom : at->atoms) {
                if (atom.z.size() != static_cast<std::size_t>(mark_dim))
                    throw std::invalid_argument("LevyMeasure: atom dimension mismatch");
                const double r = detail::norm(atom.z);
                if (!(r > 0.0) || !(r < 1.0))
                    throw std::invalid_argument("LevyMeasure: small atoms must have |z| in (0, 1)");
                if (!(atom.mass >= 0.0)) throw std::invalid_argument("LevyMeasure: atom mass must be >= 0");
            }
        }
        if (const auto* p = std::get_if<ParetoLarge>(&large)) {
            if (!(p->mass >= 0.0)) throw std::invalid_argument("LevyMeasure: large mass must be >= 0");
            if (!(p->tail_index > 0.0))
                throw std::invalid_argument("LevyMeasure: pareto tail index must be > 0");
        } else if (const auto* sh = std::get_if<ShellLarge>(&large)) {
            if (!(sh->mass >= 0.0)) throw std::invalid_argument("LevyMeasure: large mass must be >= 0");
            if (!(sh->r_lo >= 1.0) || !(sh->r_lo < sh->r_hi))
                throw std::invalid_argument("LevyMeasure: shell radii must satisfy 1 <= r_lo < r_hi");
        } else if (const auto* at = std::get_if<AtomsLarge>(&large)) {
            for (const auto& atom : at->atoms) {
                if (atom.z.size() != static_cast<std::size_t>(mark_dim))
                    throw std::invalid_argument("LevyMeasure: atom dimension mismatch");
                if (!(detail::norm(atom.z) >= 1.0))
                    throw std::invalid_argument("LevyMeasure: large atoms must have |z| >= 1");
                if (!(atom.mass >= 0.0)) throw std::invalid_argument("LevyMeasure: atom mass must be >= 0");
            }
        }
    }

    /// 2 for the two-sided scalar case, 1 for radial measures in d >= 2.
    double side_factor() const { return mark_dim == 1 ? 2.0 : 1.0; }
};

/// Intensity of the retained small jumps, lambda_eps = nu({eps <= |z| < 1}).
inline double small_mass(const LevyMeasure& m) {
    if (std::holds_alternative<NoSmallJumps>(m.small)) return 0.0;
    if (const auto* s = std::get_if<StableLikeSmall>(&m.small)) {
        return m.side_factor() * s->c * (std::pow(m.epsilon, -s->beta) - 1.0) / s->beta;
    }
    if (const auto* a = std::get_if<AnnulusUniformSmall>(&m.small)) {
        const double lo = std::max(m.epsilon, a->r_lo);
        if (lo >= a->r_hi) return 0.0;
        return a->mass * (a->r_hi - lo) / (a->r_hi - a->r_lo);
    }
    const auto& atoms = std::get<AtomsSmall>(m.small).atoms;
    double total = 0.0;
    for (const auto& atom : atoms)
        if (detail::norm(atom.z) >= m.epsilon) total += atom.mass;
    return total;
}

/// Intensity of the large jumps, Lambda = nu({|z| >= 1}).
inline double large_mass(const LevyMeasure& m) {
    if (std::holds_alternative<NoLargeJumps>(m.large)) return 0.0;
    if (const auto* p = std::get_if<ParetoLarge>(&m.large)) return p->mass;
    if (const auto* s = std::get_if<ShellLarge>(&m.large)) return s->mass;
    const auto& atoms = std::get<AtomsLarge>(m.large).atoms;
    double total = 0.0;
    for (const auto& atom : atoms) total += atom.mass;
    return total;
}

namespace detail {

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    const double pi = 3.14159265358979323846264338327950288;
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = t;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (t * p1 - p0) / (t * t - 1.0);
            const double step = p1 / dp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        const double ww = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = ww;
        w[n - 1 - i] = ww;
    }
}

/// Deterministic quasi-uniform direction set on the unit sphere in R^d.
inline std::vector<std::vector<double>> direction_set(int dim, std::size_t count) {
    std::vector<std::vector<double>> dirs;
    if (dim == 1) {
        dirs.push_back({1.0});
        dirs.push_back({-1.0});
        return dirs;
    }
    RandomStream stream(0x5EEDD1A6u); // fixed: the rule must be deterministic
    dirs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) dirs.push_back(stream.unit_direction(dim));
    return dirs;
}

} // namespace detail

/// Fixed quadrature rule for integrals against the truncated small-jump
/// measure: sum_k weights[k] * f(points[k]) approximates the nu-integral
/// over {eps <= |z| < 1}. Radial factor in log-radius Gauss-Legendre nodes
/// (exact for atoms); directions are the two signs in d = 1 and a fixed
/// 64-point spherical set for d >= 2.
struct CompensatorRule {
    std::vector<std::vector<double>> points;
    std::vector<double> weights;

    double total_mass() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }
};

inline CompensatorRule make_compensator_rule(const LevyMeasure& m, std::size_t radial_nodes = 256) {
    m.validate();
    if (radial_nodes < 2) throw std::invalid_argument("make_compensator_rule: need >= 2 radial nodes");
    CompensatorRule rule;
    if (std::holds_alternative<NoSmallJumps>(m.small)) return rule;

    if (const auto* at = std::get_if<AtomsSmall>(&m.small)) {
        for (const auto& atom : at->atoms) {
            if (detail::norm(atom.z) >= m.epsilon && atom.mass > 0.0) {
                rule.points.push_back(atom.z);
                rule.weights.push_back(atom.mass);
            }
        }
        return rule;
    }

    // radial density on [lo, 1) resp. [lo, r_hi)
    double lo = m.epsilon, hi = 1.0;
    std::function<double(double)> radial_density;
    if (const auto* s = std::get_if<StableLikeSmall>(&m.small)) {
        const double c = s->c, b = s->beta;
        radial_density = [c, b](double r) { return c * std::pow(r, -1.0 - b); };
    } else {
        const auto& a = std::get<AnnulusUniformSmall>(m.small);
        lo = std::max(m.epsilon, a.r_lo);
        hi = a.r_hi;
        if (lo >= hi) return rule;
        const double density = a.mass / (a.r_hi - a.r_lo);
        radial_density = [density](double) { return density; };
    }

    // log-radius substitution keeps the rule accurate down to small epsilon
    std::vector<double> gx, gw;
    detail::gauss_legendre(radial_nodes, gx, gw);
    const double la = std::log(lo), lb = std::log(hi);
    const auto dirs = detail::direction_set(m.mark_dim, 64);
    const double side = m.side_factor() / static_cast<double>(dirs.size());
    for (std::size_t q = 0; q < radial_nodes; ++q) {
        const double lx = 0.5 * (la + lb) + 0.5 * (lb - la) * gx[q];
        const double r = std::exp(lx);
        const double wq = 0.5 * (lb - la) * gw[q] * radial_density(r) * r; // dr = r dx
        for (const auto& d : dirs) {
            std::vector<double> z(d.size());
            for (std::size_t c = 0; c < d.size(); ++c) z[c] = r * d[c];
            rule.points.push_back(std::move(z));
            rule.weights.push_back(wq * side);
        }
    }
    return rule;
}

/// Quadrature rule against the large-jump part on {|z| >= 1}; same contract
/// as the compensator rule. The Pareto tail is mapped through v = r^{-tail}
/// so the infinite radius range needs no truncation.
inline CompensatorRule make_large_jump_rule(const LevyMeasure& m, std::size_t radial_nodes = 256) {
    m.validate();
    CompensatorRule rule;
    if (std::holds_alternative<NoLargeJumps>(m.large)) return rule;
    if (const auto* at = std::get_if<AtomsLarge>(&m.large)) {
        for (const auto& atom : at->atoms) {
            if (atom.mass > 0.0) {
                rule.points.push_back(atom.z);
                rule.weights.push_back(atom.mass);
            }
        }
        return rule;
    }
    std::vector<double> gx, gw;
    detail::gauss_legendre(radial_nodes, gx, gw);
    const auto dirs = detail::direction_set(m.mark_dim, 64);
    const double dir_w = 1.0 / static_cast<double>(dirs.size());
    auto push = [&](double r, double w) {
        for (const auto& d : dirs) {
            std::vector<double> z(d.size());
            for (std::size_t c = 0; c < d.size(); ++c) z[c] = r * d[c];
            rule.points.push_back(std::move(z));
            rule.weights.push_back(w * dir_w);
        }
    };
    if (const auto* p = std::get_if<ParetoLarge>(&m.large)) {
        for (std::size_t q = 0; q < radial_nodes; ++q) {
            const double v = 0.5 + 0.5 * gx[q]; // in (0, 1)
            const double r = std::pow(v, -1.0 / p->tail_index);
            push(r, 0.5 * gw[q] * p->mass);
        }
    } else {
        const auto& s = std::get<ShellLarge>(m.large);
        const double density = s.mass / (s.r_hi - s.r_lo);
        for (std::size_t q = 0; q < radial_nodes; ++q) {
            const double r = 0.5 * (s.r_lo + s.r_hi) + 0.5 * (s.r_hi - s.r_lo) * gx[q];
            push(r, 0.5 * (s.r_hi - s.r_lo) * gw[q] * density);
        }
    }
    return rule;
}

/// Integral of z -> g(t, u, z) against the truncated small-jump measure.
template <typename G>
double apply_compensator_rule(const CompensatorRule& rule, const G& g, double t, double u) {
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.points.size(); ++k)
        acc += rule.weights[k] * g(t, u, rule.points[k]);
    return acc;
}

/// Convenience one-shot form of the compensator integral.
template <typename G>
double compensator_integral(const LevyMeasure& m, const G& g, double t, double u,
                            std::size_t radial_nodes = 256) {
    return apply_compensator_rule(make_compensator_rule(m, radial_nodes), g, t, u);
}

} // namespace fracjump
