#pragma once

#include "fracjump/coefficients.hpp"
#include "fracjump/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracjump {

/// Scale knobs applied to a named coefficient preset.
struct PresetParams {
    double f_scale = 1.0;
    double g_scale = 1.0;
    double h_scale = 1.0;
    double drift_const = 0.0; // used by the additive preset
};

struct PresetInfo {
    std::string name;
    std::string description;
    bool lipschitz;
    bool growth;
    bool h_growth;
};

inline std::vector<PresetInfo> preset_catalog() {
    return {
        {"zero", "f = 0, g = 0, h = 0 (constant paths)", true, true, true},
        {"linear", "f = -f_scale u, g = g_scale u z1 (|z|<1), h = h_scale u z1 (|z|>=1)", true, true, true},
        {"additive", "f = drift_const, g = g_scale z1, h = h_scale z1", true, true, true},
        {"pure_drift", "f = -f_scale u, g = 0, h = 0", true, true, true},
    };
}

/// Builds a preset's CoefficientSet against a concrete measure: the recorded
/// bound function L(t) is the preset's true constant computed from the
/// measure's moment integrals, so the assumption flags stay honest.
inline CoefficientSet make_preset(const std::string& name, const PresetParams& pp,
                                  const LevyMeasure& measure, double p,
                                  std::size_t quadrature_nodes = 256) {
    CoefficientSet c;
    c.p_exponent = p;
    c.preset_name = name;
    c.lipschitz_claimed = true;
    c.growth_claimed = true;
    c.h_growth_claimed = true;

    const auto small_rule = make_compensator_rule(measure, quadrature_nodes);
    const auto large_rule = make_large_jump_rule(measure, quadrature_nodes);
    auto first = [](const std::vector<double>& z) { return z[0]; };
    // measure moments entering the presets' exact L(t) and compensators
    const double m1_small = apply_compensator_rule(
        small_rule, [&](double, double, const std::vector<double>& z) { return first(z); }, 0.0, 0.0);
    const double mp_small = apply_compensator_rule(
        small_rule,
        [&](double, double, const std::vector<double>& z) { return std::pow(std::abs(first(z)), p); },
        0.0, 0.0);
    const double mp_large = apply_compensator_rule(
        large_rule,
        [&](double, double, const std::vector<double>& z) { return std::pow(std::abs(first(z)), p); },
        0.0, 0.0);

    if (name == "zero") {
        c.lipschitz_bound = [](double) { return 0.0; };
        return c;
    }
    if (name == "linear") {
        const double fs = pp.f_scale, gs = pp.g_scale, hs = pp.h_scale;
        c.drift = [fs](double, double u) { return -fs * u; };
        c.small_jump = [gs](double, double u, const std::vector<double>& z) { return gs * u * z[0]; };
        c.large_jump = [hs](double, double u, const std::vector<double>& z) { return hs * u * z[0]; };
        c.small_compensator = [gs, m1_small](double, double u) { return gs * u * m1_small; };
        const double L = std::max({fs, std::pow(gs, p) * mp_small, std::pow(hs, p) * mp_large});
        c.lipschitz_bound = [L](double) { return L; };
        return c;
    }
    if (name == "additive") {
        const double a = pp.drift_const, gs = pp.g_scale, hs = pp.h_scale;
        c.drift = [a](double, double) { return a; };
        c.small_jump = [gs](double, double, const std::vector<double>& z) { return gs * z[0]; };
        c.large_jump = [hs](double, double, const std::vector<double>& z) { return hs * z[0]; };
        c.small_compensator = [gs, m1_small](double, double) { return gs * m1_small; };
        const double L =
            std::max({std::abs(a), std::pow(gs, p) * mp_small, std::pow(hs, p) * mp_large, 1e-12});
        c.lipschitz_bound = [L](double) { return L; };
        return c;
    }
    if (name == "pure_drift") {
        const double fs = pp.f_scale;
        c.drift = [fs](double, double u) { return -fs * u; };
        const double L = std::max(fs, 1e-12);
        c.lipschitz_bound = [L](double) { return L; };
        return c;
    }
    throw std::invalid_argument("make_preset: unknown preset '" + name + "'");
}

} // namespace fracjump
