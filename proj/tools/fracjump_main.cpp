#include "fracjump/fracjump.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

using namespace fracjump;

ExperimentConfig base_benchmark() {
    ExperimentConfig cfg;
    cfg.lambda = -1.0;
    cfg.alpha_form = "constant";
    cfg.alpha_value = 0.5;
    cfg.preset = "linear";
    cfg.measure.small = StableLikeSmall{0.2, 0.5};
    cfg.measure.epsilon = 0.04;
    cfg.horizon = 1.0;
    cfg.steps = 128;
    return cfg;
}

/// Reduced-scale versions of the acceptance presets, one per study.
int run_builtin_checks(unsigned threads, const std::string& out_root) {
    std::vector<ExperimentConfig> configs;

    auto single = base_benchmark();
    single.study = "single_path";
    single.measure.large = ShellLarge{2.0, 1.0, 2.0};
    configs.push_back(single);

    auto moment = base_benchmark();
    moment.study = "mc_moment";
    moment.paths = 1000;
    configs.push_back(moment);

    auto holder = base_benchmark();
    holder.study = "holder";
    holder.paths = 300;
    configs.push_back(holder);

    auto gronwall = base_benchmark();
    gronwall.study = "gronwall";
    gronwall.gronwall_instances = 30;
    configs.push_back(gronwall);

    auto figure1 = base_benchmark();
    figure1.study = "figure1";
    configs.push_back(figure1);

    auto convergence = base_benchmark();
    convergence.study = "convergence";
    configs.push_back(convergence);

    bool all_ok = true;
    for (auto& cfg : configs) {
        cfg.output_dir = out_root + "/" + cfg.study;
        try {
            const auto report = run_study(cfg, threads);
            for (const auto& c : report.checks) {
                std::printf("%-4s %s/%s: %s\n", c.pass ? "PASS" : "FAIL", cfg.study.c_str(),
                            c.name.c_str(), c.detail.c_str());
                all_ok = all_ok && c.pass;
            }
        } catch (const std::exception& e) {
            std::printf("FAIL %s: %s\n", cfg.study.c_str(), e.what());
            all_ok = false;
        }
    }
    std::printf("%s\n", all_ok ? "all checks passed" : "some checks FAILED");
    return all_ok ? 0 : 1;
}

void print_presets() {
    std::printf("coefficient presets (knobs: f_scale, g_scale, h_scale, drift_const):\n");
    for (const auto& info : preset_catalog()) {
        std::printf("  %-10s  %s\n", info.name.c_str(), info.description.c_str());
        std::printf("              claims: lipschitz=%s growth=%s h_growth=%s\n",
                    info.lipschitz ? "yes" : "no", info.growth ? "yes" : "no",
                    info.h_growth ? "yes" : "no");
    }
    std::printf("\nsmall-jump families: none | stable_like(c, beta) | annulus_uniform(mass, r_lo, r_hi) | atoms\n");
    std::printf("large-jump parts:    none | pareto(mass, tail_index) | shell(mass, r_lo, r_hi) | atoms\n");
    std::printf("order forms:         constant | affine | sinusoidal | table\n");
    std::printf("studies:             single_path | mc_moment | holder | gronwall | figure1 | convergence\n");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracjump: variable-order fractional SDE simulation and verification"};
    app.require_subcommand(0, 1);

    unsigned threads = 0;
    bool check = false;
    std::string out_override;
    app.add_option("--threads", threads, "worker threads for Monte Carlo studies (0 = auto)");
    app.add_flag("--check", check, "run the built-in acceptance-style study presets");
    app.add_option("--out", out_override, "output directory override");

    std::string config_path;
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    auto* run_cmd = app.add_subcommand("run", "run one experiment from a JSON config");
    run_cmd->add_option("config", config_path, "path to the experiment config")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed_override, "master seed override");

    auto* list_cmd = app.add_subcommand("list-presets", "list coefficient and measure presets");

    CLI11_PARSE(app, argc, argv);
    seed_given = seed_opt->count() > 0;

    const char* env_out = std::getenv("FRACJUMP_OUT_DIR");

    try {
        if (check) {
            const std::string root = !out_override.empty() ? out_override
                                     : env_out ? std::string(env_out) + "/checks"
                                               : std::string("out/checks");
            return run_builtin_checks(threads, root);
        }
        if (list_cmd->parsed()) {
            print_presets();
            return 0;
        }
        if (run_cmd->parsed()) {
            auto cfg = load_config(config_path);
            if (seed_given) cfg.master_seed = seed_override;
            if (!out_override.empty()) {
                cfg.output_dir = out_override;
            } else if (env_out) {
                cfg.output_dir = std::string(env_out) + "/" + cfg.output_dir;
            }
            const auto report = run_study(cfg, threads);
            for (const auto& c : report.checks)
                std::printf("%-4s %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                            c.detail.c_str());
            std::printf("report: %s/report.json\n", cfg.output_dir.c_str());
            return report.all_passed ? 0 : 1;
        }
        std::printf("%s\n", app.help().c_str());
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error at %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
