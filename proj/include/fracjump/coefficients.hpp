#pragma once

#include "fracjump/levy_measure.hpp"
#include "fracjump/rng.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracjump {

using DriftFn = std::function<double(double t, double u)>;
using JumpFn = std::function<double(double t, double u, const std::vector<double>& z)>;
using CompensatorFn = std::function<double(double t, double u)>;

/// Drift, small-jump and large-jump coefficients of the model together with
/// their regularity metadata: the locally bounded bound function L(t), the
/// moment exponent p, and which conditions the coefficients claim to satisfy.
/// Null callables mean identically zero. `small_compensator` must evaluate
/// the nu-integral of g over the retained annulus; presets ship closed forms
/// that agree with the fixed quadrature rule.
struct CoefficientSet {
    DriftFn drift;
    JumpFn small_jump;
    JumpFn large_jump;
    CompensatorFn small_compensator;
    std::function<double(double)> lipschitz_bound; // L(t)
    double p_exponent = 2.0;                       // in [1, 2]
    bool lipschitz_claimed = false;
    bool growth_claimed = false;
    bool h_growth_claimed = false;
    std::string preset_name;

    double f(double t, double u) const { return drift ? drift(t, u) : 0.0; }
    double g(double t, double u, const std::vector<double>& z) const {
        return small_jump ? small_jump(t, u, z) : 0.0;
    }
    double h(double t, double u, const std::vector<double>& z) const {
        return large_jump ? large_jump(t, u, z) : 0.0;
    }
    double compensator(double t, double u) const {
        return small_compensator ? small_compensator(t, u) : 0.0;
    }
    double bound(double t) const { return lipschitz_bound ? lipschitz_bound(t) : 0.0; }

    void validate_shape() const {
        if (!(p_exponent >= 1.0 && p_exponent <= 2.0))
            throw std::invalid_argument("CoefficientSet: p must be in [1, 2]");
        if (small_jump && !small_compensator)
            throw std::invalid_argument("CoefficientSet: small jumps need a compensator evaluator");
    }
};

/// Result of the sampling checks behind the coefficient assumptions.
struct CoefficientValidation {
    bool ok = true;
    std::string message;
    double worst_lipschitz_ratio = 0.0; // observed / claimed, over the sample
    double worst_growth_ratio = 0.0;
};

/// Spot-checks continuity in u and, where claimed, the Lipschitz and linear
/// growth conditions against the recorded L(t), with the stated 1e-6 slack.
inline CoefficientValidation validate_coefficients(const CoefficientSet& c, const LevyMeasure& m,
                                                   std::uint64_t seed = 2024,
                                                   std::size_t samples = 200) {
    c.validate_shape();
    CoefficientValidation r;
    const auto small_rule = make_compensator_rule(m, 64);
    const auto large_rule = make_large_jump_rule(m, 64);
    RandomStream rng(seed);
    const double p = c.p_exponent;
    const double slack = 1.0 + 1e-6;

    auto fail = [&r](const std::string& why) {
        r.ok = false;
        if (r.message.empty()) r.message = why;
    };

    for (std::size_t s = 0; s < samples; ++s) {
        const double t = rng.uniform(0.0, 10.0);
        const double u = rng.uniform(-10.0, 10.0);
        const double v = rng.uniform(-10.0, 10.0);
        const double L = c.bound(t);

        // continuity spot check in u on a representative mark
        if (!small_rule.points.empty() && c.small_jump) {
            const auto& z = small_rule.points[s % small_rule.points.size()];
            const double du = 1e-9 * (1.0 + std::abs(u));
            const double d = std::abs(c.g(t, u + du, z) - c.g(t, u, z));
            if (d > 1e-5 * (1.0 + std::abs(c.g(t, u, z)))) fail("small-jump coefficient looks discontinuous in u");
        }
        if (!large_rule.points.empty() && c.large_jump) {
            const auto& z = large_rule.points[s % large_rule.points.size()];
            const double du = 1e-9 * (1.0 + std::abs(u));
            const double d = std::abs(c.h(t, u + du, z) - c.h(t, u, z));
            if (d > 1e-5 * (1.0 + std::abs(c.h(t, u, z)))) fail("large-jump coefficient looks discontinuous in u");
        }

        if (c.lipschitz_claimed) {
            const double df = std::abs(c.f(t, u) - c.f(t, v));
            const double denom = L * std::abs(u - v);
            if (df > denom * slack + 1e-14) fail("drift violates the claimed Lipschitz bound");
            if (denom > 0.0) r.worst_lipschitz_ratio = std::max(r.worst_lipschitz_ratio, df / denom);
            if (c.small_jump) {
                const double dg = apply_compensator_rule(
                    small_rule,
                    [&](double tt, double, const std::vector<double>& z) {
                        return std::pow(std::abs(c.g(tt, u, z) - c.g(tt, v, z)), p);
                    },
                    t, 0.0);
                const double gd = L * std::pow(std::abs(u - v), p);
                if (dg > gd * slack + 1e-14) fail("small-jump coefficient violates the claimed L^p Lipschitz bound");
                if (gd > 0.0) r.worst_lipschitz_ratio = std::max(r.worst_lipschitz_ratio, dg / gd);
            }
        }
        if (c.growth_claimed) {
            const double gf = std::abs(c.f(t, u));
            const double fb = L * (1.0 + std::abs(u));
            if (gf > fb * slack + 1e-14) fail("drift violates the claimed linear growth bound");
            if (fb > 0.0) r.worst_growth_ratio = std::max(r.worst_growth_ratio, gf / fb);
            if (c.small_jump) {
                const double gp = apply_compensator_rule(
                    small_rule,
                    [&](double tt, double uu, const std::vector<double>& z) {
                        return std::pow(std::abs(c.g(tt, uu, z)), p);
                    },
                    t, u);
                const double gb = L * (1.0 + std::pow(std::abs(u), p));
                if (gp > gb * slack + 1e-14) fail("small-jump coefficient violates the claimed L^p growth bound");
            }
        }
        if (c.h_growth_claimed && c.large_jump && !large_rule.points.empty()) {
            const double hp = apply_compensator_rule(
                large_rule,
                [&](double tt, double uu, const std::vector<double>& z) {
                    return std::pow(std::abs(c.h(tt, uu, z)), p);
                },
                t, u);
            const double hb = c.bound(t) * (1.0 + std::pow(std::abs(u), p));
            if (hp > hb * slack + 1e-14) fail("large-jump coefficient violates the claimed L^p growth bound");
        }
    }
    return r;
}

} // namespace fracjump
