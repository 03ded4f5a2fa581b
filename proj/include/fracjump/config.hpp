#pragma once

#include "fracjump/presets.hpp"
#include "fracjump/problem.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracjump {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& why)
        : std::runtime_error(field + ": " + why), field(field) {}
    std::string field;
};

/// One experiment: the model (kernel order and lambda, coefficient preset,
/// driving measure, initial value), the numerics, and the study to run.
struct ExperimentConfig {
    // problem
    double lambda = -1.0;
    std::string alpha_form = "constant"; // constant | affine | sinusoidal | table
    double alpha_value = 0.5;            // constant
    double alpha_intercept = 0.2, alpha_slope = 0.1;             // affine
    double alpha_offset = 0.5, alpha_amplitude = 0.3, alpha_omega = 1.0; // sinusoidal
    std::vector<double> alpha_times, alpha_values;               // table
    double gamma_holder = 1.0;
    bool regularity_claimed = true;

    std::string preset = "linear";
    PresetParams preset_params;

    LevyMeasure measure;
    InitialValue initial = 1.0;

    // numerics
    double horizon = 1.0;
    std::size_t steps = 128;
    double tol = 1e-10;
    std::size_t max_iter = 50;
    std::size_t quadrature_nodes = 256;

    // study
    std::string study = "single_path";
    std::size_t paths = 1000; // M
    double p = 2.0;
    std::uint64_t master_seed = 42;
    std::string output_dir = "out";

    // per-study knobs
    double figure1_t0 = 0.5;
    double figure1_jump = 0.5;
    double figure1_threshold = 0.05; // recorded pilot value for the memory effect
    std::vector<double> holder_lags; // empty: 5 dyadic lags T/4 .. T/64
    std::size_t gronwall_instances = 100;
    std::vector<std::size_t> convergence_grids{256, 512, 1024, 2048};
    bool moment_stability_check = true;

    FractionalOrder order() const {
        FractionalOrder o = [&] {
            if (alpha_form == "constant")
                return FractionalOrder::constant(alpha_value, horizon, gamma_holder);
            if (alpha_form == "affine")
                return FractionalOrder::affine(alpha_intercept, alpha_slope, horizon, gamma_holder);
            if (alpha_form == "sinusoidal")
                return FractionalOrder::sinusoidal(alpha_offset, alpha_amplitude, alpha_omega,
                                                   horizon, gamma_holder);
            return FractionalOrder::table(alpha_times, alpha_values, gamma_holder);
        }();
        o.regularity_claimed = regularity_claimed;
        return o;
    }

    Problem problem() const {
        Problem prob{FractionalKernel{lambda, order()},
                     make_preset(preset, preset_params, measure, p, quadrature_nodes),
                     measure,
                     initial,
                     horizon,
                     steps,
                     SolveOptions{tol, max_iter}};
        return prob;
    }

    void validate() const;
};

namespace detail_config {

using nlohmann::json;

inline double need_number(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw ConfigError(path + "." + key, "expected a number");
    return j[key].get<double>();
}

inline double opt_number(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j[key].get<double>() : fallback;
}

inline std::vector<MeasureAtom> parse_atoms(const json& arr, const std::string& path) {
    if (!arr.is_array()) throw ConfigError(path, "expected an array of {z, mass}");
    std::vector<MeasureAtom> atoms;
    for (const auto& a : arr) {
        MeasureAtom atom;
        if (!a.contains("z") || !a["z"].is_array()) throw ConfigError(path, "atom needs a z array");
        atom.z = a["z"].get<std::vector<double>>();
        atom.mass = a.value("mass", 0.0);
        atoms.push_back(std::move(atom));
    }
    return atoms;
}

inline json atoms_to_json(const std::vector<MeasureAtom>& atoms) {
    json arr = json::array();
    for (const auto& a : atoms) arr.push_back({{"z", a.z}, {"mass", a.mass}});
    return arr;
}

} // namespace detail_config

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    using nlohmann::json;
    using namespace detail_config;
    ExperimentConfig c;

    if (!j.contains("problem") || !j["problem"].is_object())
        throw ConfigError("problem", "missing object");
    const json& prob = j["problem"];
    c.lambda = need_number(prob, "problem", "lambda");

    if (!prob.contains("alpha") || !prob["alpha"].is_object())
        throw ConfigError("problem.alpha", "missing object");
    const json& al = prob["alpha"];
    c.alpha_form = al.value("form", "constant");
    c.gamma_holder = opt_number(al, "gamma_holder", 1.0);
    c.regularity_claimed = al.value("regularity_claimed", true);
    if (c.alpha_form == "constant") {
        c.alpha_value = need_number(al, "problem.alpha", "value");
    } else if (c.alpha_form == "affine") {
        c.alpha_intercept = need_number(al, "problem.alpha", "intercept");
        c.alpha_slope = need_number(al, "problem.alpha", "slope");
    } else if (c.alpha_form == "sinusoidal") {
        c.alpha_offset = need_number(al, "problem.alpha", "offset");
        c.alpha_amplitude = need_number(al, "problem.alpha", "amplitude");
        c.alpha_omega = opt_number(al, "omega", 1.0);
    } else if (c.alpha_form == "table") {
        if (!al.contains("times") || !al.contains("values"))
            throw ConfigError("problem.alpha", "table form needs times and values arrays");
        c.alpha_times = al["times"].get<std::vector<double>>();
        c.alpha_values = al["values"].get<std::vector<double>>();
    } else {
        throw ConfigError("problem.alpha.form", "unknown form '" + c.alpha_form + "'");
    }

    if (prob.contains("coefficients")) {
        const json& co = prob["coefficients"];
        c.preset = co.value("preset", "linear");
        c.preset_params.f_scale = opt_number(co, "f_scale", 1.0);
        c.preset_params.g_scale = opt_number(co, "g_scale", 1.0);
        c.preset_params.h_scale = opt_number(co, "h_scale", 1.0);
        c.preset_params.drift_const = opt_number(co, "drift_const", 0.0);
        bool known = false;
        for (const auto& info : preset_catalog()) known |= (info.name == c.preset);
        if (!known)
            throw ConfigError("problem.coefficients.preset", "unknown preset '" + c.preset + "'");
    }

    if (prob.contains("levy")) {
        const json& lv = prob["levy"];
        c.measure.mark_dim = static_cast<int>(opt_number(lv, "mark_dim", 1.0));
        c.measure.epsilon = opt_number(lv, "epsilon", 1e-2);
        if (lv.contains("small")) {
            const json& sm = lv["small"];
            const std::string family = sm.value("family", "none");
            if (family == "none") {
                c.measure.small = NoSmallJumps{};
            } else if (family == "stable_like") {
                c.measure.small = StableLikeSmall{need_number(sm, "problem.levy.small", "c"),
                                                  need_number(sm, "problem.levy.small", "beta")};
            } else if (family == "annulus_uniform") {
                c.measure.small = AnnulusUniformSmall{need_number(sm, "problem.levy.small", "mass"),
                                                      opt_number(sm, "r_lo", 0.0),
                                                      opt_number(sm, "r_hi", 1.0)};
            } else if (family == "atoms") {
                c.measure.small = AtomsSmall{parse_atoms(sm["atoms"], "problem.levy.small.atoms")};
            } else {
                throw ConfigError("problem.levy.small.family", "unknown family '" + family + "'");
            }
        }
        if (lv.contains("large")) {
            const json& lg = lv["large"];
            const std::string kind = lg.value("kind", "none");
            if (kind == "none") {
                c.measure.large = NoLargeJumps{};
            } else if (kind == "pareto") {
                c.measure.large = ParetoLarge{need_number(lg, "problem.levy.large", "mass"),
                                              opt_number(lg, "tail_index", 1.5)};
            } else if (kind == "shell") {
                c.measure.large = ShellLarge{need_number(lg, "problem.levy.large", "mass"),
                                             opt_number(lg, "r_lo", 1.0), opt_number(lg, "r_hi", 2.0)};
            } else if (kind == "atoms") {
                c.measure.large = AtomsLarge{parse_atoms(lg["atoms"], "problem.levy.large.atoms")};
            } else {
                throw ConfigError("problem.levy.large.kind", "unknown kind '" + kind + "'");
            }
        }
    }

    if (prob.contains("u0")) {
        const json& u = prob["u0"];
        if (u.is_number()) {
            c.initial = u.get<double>();
        } else if (u.is_object() && u.contains("two_point")) {
            const auto v = u["two_point"].get<std::vector<double>>();
            if (v.size() != 2) throw ConfigError("problem.u0.two_point", "expected [a, b]");
            c.initial = TwoPointInitial{v[0], v[1]};
        } else if (u.is_object() && u.contains("uniform")) {
            const auto v = u["uniform"].get<std::vector<double>>();
            if (v.size() != 2) throw ConfigError("problem.u0.uniform", "expected [lo, hi]");
            c.initial = UniformInitial{v[0], v[1]};
        } else {
            throw ConfigError("problem.u0", "expected a number, {two_point}, or {uniform}");
        }
    }

    if (j.contains("numerics")) {
        const json& nu = j["numerics"];
        c.horizon = opt_number(nu, "T", 1.0);
        c.steps = static_cast<std::size_t>(opt_number(nu, "N", 128.0));
        c.tol = opt_number(nu, "tol", 1e-10);
        c.max_iter = static_cast<std::size_t>(opt_number(nu, "max_iter", 50.0));
        c.quadrature_nodes = static_cast<std::size_t>(opt_number(nu, "quadrature_nodes", 256.0));
    }

    c.study = j.value("study", "single_path");
    c.paths = static_cast<std::size_t>(j.value("M", 1000.0));
    c.p = j.value("p", 2.0);
    c.master_seed = j.value("master_seed", std::uint64_t{42});
    c.output_dir = j.value("output_dir", "out");

    if (j.contains("study_params")) {
        const json& sp = j["study_params"];
        c.figure1_t0 = opt_number(sp, "t0", c.figure1_t0);
        c.figure1_jump = opt_number(sp, "jump_size", c.figure1_jump);
        c.figure1_threshold = opt_number(sp, "threshold", c.figure1_threshold);
        if (sp.contains("lags")) c.holder_lags = sp["lags"].get<std::vector<double>>();
        c.gronwall_instances =
            static_cast<std::size_t>(opt_number(sp, "instances", static_cast<double>(c.gronwall_instances)));
        if (sp.contains("grids")) c.convergence_grids = sp["grids"].get<std::vector<std::size_t>>();
        if (sp.contains("stability_check")) c.moment_stability_check = sp["stability_check"].get<bool>();
    }

    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("<file>", std::string("JSON parse failure: ") + e.what());
    }
    return parse_config(j);
}

inline nlohmann::json serialize_config(const ExperimentConfig& c) {
    using nlohmann::json;
    using namespace detail_config;
    json al{{"form", c.alpha_form},
            {"gamma_holder", c.gamma_holder},
            {"regularity_claimed", c.regularity_claimed}};
    if (c.alpha_form == "constant") al["value"] = c.alpha_value;
    if (c.alpha_form == "affine") {
        al["intercept"] = c.alpha_intercept;
        al["slope"] = c.alpha_slope;
    }
    if (c.alpha_form == "sinusoidal") {
        al["offset"] = c.alpha_offset;
        al["amplitude"] = c.alpha_amplitude;
        al["omega"] = c.alpha_omega;
    }
    if (c.alpha_form == "table") {
        al["times"] = c.alpha_times;
        al["values"] = c.alpha_values;
    }

    json small;
    if (std::holds_alternative<NoSmallJumps>(c.measure.small)) {
        small = {{"family", "none"}};
    } else if (const auto* s = std::get_if<StableLikeSmall>(&c.measure.small)) {
        small = {{"family", "stable_like"}, {"c", s->c}, {"beta", s->beta}};
    } else if (const auto* a = std::get_if<AnnulusUniformSmall>(&c.measure.small)) {
        small = {{"family", "annulus_uniform"}, {"mass", a->mass}, {"r_lo", a->r_lo}, {"r_hi", a->r_hi}};
    } else {
        small = {{"family", "atoms"},
                 {"atoms", atoms_to_json(std::get<AtomsSmall>(c.measure.small).atoms)}};
    }
    json large;
    if (std::holds_alternative<NoLargeJumps>(c.measure.large)) {
        large = {{"kind", "none"}};
    } else if (const auto* p = std::get_if<ParetoLarge>(&c.measure.large)) {
        large = {{"kind", "pareto"}, {"mass", p->mass}, {"tail_index", p->tail_index}};
    } else if (const auto* s = std::get_if<ShellLarge>(&c.measure.large)) {
        large = {{"kind", "shell"}, {"mass", s->mass}, {"r_lo", s->r_lo}, {"r_hi", s->r_hi}};
    } else {
        large = {{"kind", "atoms"},
                 {"atoms", atoms_to_json(std::get<AtomsLarge>(c.measure.large).atoms)}};
    }

    json u0;
    if (const auto* v = std::get_if<double>(&c.initial)) {
        u0 = *v;
    } else if (const auto* tp = std::get_if<TwoPointInitial>(&c.initial)) {
        u0 = {{"two_point", {tp->a, tp->b}}};
    } else {
        const auto& un = std::get<UniformInitial>(c.initial);
        u0 = {{"uniform", {un.lo, un.hi}}};
    }

    json j{{"problem",
            {{"lambda", c.lambda},
             {"alpha", al},
             {"coefficients",
              {{"preset", c.preset},
               {"f_scale", c.preset_params.f_scale},
               {"g_scale", c.preset_params.g_scale},
               {"h_scale", c.preset_params.h_scale},
               {"drift_const", c.preset_params.drift_const}}},
             {"levy",
              {{"mark_dim", c.measure.mark_dim}, {"small", small}, {"large", large},
               {"epsilon", c.measure.epsilon}}},
             {"u0", u0}}},
           {"numerics",
            {{"T", c.horizon},
             {"N", c.steps},
             {"tol", c.tol},
             {"max_iter", c.max_iter},
             {"quadrature_nodes", c.quadrature_nodes}}},
           {"study", c.study},
           {"M", c.paths},
           {"p", c.p},
           {"master_seed", c.master_seed},
           {"output_dir", c.output_dir}};
    json sp{{"t0", c.figure1_t0},
            {"jump_size", c.figure1_jump},
            {"threshold", c.figure1_threshold},
            {"instances", c.gronwall_instances},
            {"grids", c.convergence_grids},
            {"stability_check", c.moment_stability_check}};
    if (!c.holder_lags.empty()) sp["lags"] = c.holder_lags;
    j["study_params"] = sp;
    return j;
}

inline void ExperimentConfig::validate() const {
    static const std::vector<std::string> studies{"single_path", "mc_moment", "holder",
                                                  "gronwall",    "figure1",   "convergence"};
    bool known = false;
    for (const auto& s : studies) known |= (s == study);
    if (!known) throw ConfigError("study", "unknown study '" + study + "'");
    if (!(horizon > 0.0)) throw ConfigError("numerics.T", "must be > 0");
    if (steps < 16) throw ConfigError("numerics.N", "must be >= 16");
    if (paths < 1) throw ConfigError("M", "must be >= 1");
    if (!(p >= 1.0)) throw ConfigError("p", "must be >= 1");
    if (!(tol >= 0.0)) throw ConfigError("numerics.tol", "must be >= 0");
    if (max_iter < 1) throw ConfigError("numerics.max_iter", "must be >= 1");
    if (quadrature_nodes < 2) throw ConfigError("numerics.quadrature_nodes", "must be >= 2");
    try {
        measure.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("problem.levy", e.what());
    }
    if (alpha_form == "table" && (!alpha_times.empty() && alpha_times.back() < horizon))
        throw ConfigError("problem.alpha.times", "table must cover [0, T]");
    const auto ov = order().validate();
    if (!ov.ok) throw ConfigError("problem.alpha", ov.message);
    if (!(figure1_t0 > 0.0) || !(figure1_t0 < horizon))
        throw ConfigError("study_params.t0", "must lie in (0, T)");
    for (std::size_t n : convergence_grids)
        if (n < 16) throw ConfigError("study_params.grids", "grid sizes must be >= 16");
}

} // namespace fracjump
