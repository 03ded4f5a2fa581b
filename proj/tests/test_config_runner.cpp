#include <catch2/catch_amalgamated.hpp>

#include "fracjump/runner.hpp"

#include <filesystem>
#include <fstream>

using namespace fracjump;
namespace fs = std::filesystem;

namespace {

nlohmann::json benchmark_json() {
    return nlohmann::json::parse(R"({
      "problem": {
        "lambda": -1.0,
        "alpha": {"form": "constant", "value": 0.5, "gamma_holder": 1.0},
        "coefficients": {"preset": "linear"},
        "levy": {
          "mark_dim": 1,
          "small": {"family": "stable_like", "c": 0.2, "beta": 0.5},
          "large": {"kind": "none"},
          "epsilon": 0.04
        },
        "u0": 1.0
      },
      "numerics": {"T": 1.0, "N": 128, "tol": 1e-10, "max_iter": 50},
      "study": "single_path",
      "M": 100,
      "p": 2.0,
      "master_seed": 7,
      "output_dir": "out"
    })");
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("config parses and round-trips", "[config]") {
    const auto cfg = parse_config(benchmark_json());
    CHECK(cfg.lambda == -1.0);
    CHECK(cfg.steps == 128);
    CHECK(std::get<StableLikeSmall>(cfg.measure.small).c == 0.2);

    // serialize(parse(x)) is a fixed point of parse-serialize
    const auto once = serialize_config(cfg);
    const auto twice = serialize_config(parse_config(once));
    CHECK(once == twice);
}

TEST_CASE("config validation errors name the field", "[config]") {
    auto bad_preset = benchmark_json();
    bad_preset["problem"]["coefficients"]["preset"] = "cubic";
    try {
        parse_config(bad_preset);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field == "problem.coefficients.preset");
        CHECK(std::string(e.what()).find("cubic") != std::string::npos);
    }

    auto bad_n = benchmark_json();
    bad_n["numerics"]["N"] = 8;
    CHECK_THROWS_AS(parse_config(bad_n), ConfigError);

    auto bad_m = benchmark_json();
    bad_m["M"] = 0;
    CHECK_THROWS_AS(parse_config(bad_m), ConfigError);

    auto bad_alpha = benchmark_json();
    bad_alpha["problem"]["alpha"] = {{"form", "constant"}, {"value", 1.2}};
    CHECK_THROWS_AS(parse_config(bad_alpha), ConfigError);

    auto bad_study = benchmark_json();
    bad_study["study"] = "warp";
    CHECK_THROWS_AS(parse_config(bad_study), ConfigError);

    auto bad_family = benchmark_json();
    bad_family["problem"]["levy"]["small"]["family"] = "cauchy";
    CHECK_THROWS_AS(parse_config(bad_family), ConfigError);
}

TEST_CASE("single path study emits constant trajectory for zero coefficients", "[runner]") {
    auto j = benchmark_json();
    j["problem"]["coefficients"]["preset"] = "zero";
    j["problem"]["lambda"] = 0.0;
    j["problem"]["levy"]["small"]["family"] = "none";
    j["output_dir"] = "/tmp/fracjump_test/zero_path";
    auto cfg = parse_config(j);
    const auto report = run_study(cfg, 1);
    CHECK(report.all_passed);
    const auto csv = slurp("/tmp/fracjump_test/zero_path/path.csv");
    CHECK(csv.rfind("t,u,is_jump,left_limit\n", 0) == 0);
    // all values equal u0 = 1
    std::size_t lines = 0;
    for (std::size_t pos = csv.find('\n'); pos != std::string::npos; pos = csv.find('\n', pos + 1))
        ++lines;
    CHECK(lines == 130); // header + 129 nodes
    CHECK(csv.find(",1,0,") != std::string::npos);
    CHECK(fs::exists("/tmp/fracjump_test/zero_path/report.json"));
}

TEST_CASE("runs are reproducible modulo timing", "[runner]") {
    auto j = benchmark_json();
    j["problem"]["levy"]["large"] = {{"kind", "shell"}, {"mass", 2.0}, {"r_lo", 1.0}, {"r_hi", 2.0}};
    auto cfg = parse_config(j);

    cfg.output_dir = "/tmp/fracjump_test/repro_a";
    run_study(cfg, 1);
    cfg.output_dir = "/tmp/fracjump_test/repro_b";
    run_study(cfg, 2); // thread count must not matter

    auto ja = nlohmann::json::parse(slurp("/tmp/fracjump_test/repro_a/report.json"));
    auto jb = nlohmann::json::parse(slurp("/tmp/fracjump_test/repro_b/report.json"));
    ja.erase("timing");
    jb.erase("timing");
    ja["config"].erase("output_dir");
    jb["config"].erase("output_dir");
    CHECK(ja.dump() == jb.dump());

    CHECK(slurp("/tmp/fracjump_test/repro_a/path.csv") ==
          slurp("/tmp/fracjump_test/repro_b/path.csv"));
    CHECK(slurp("/tmp/fracjump_test/repro_a/realization.csv") ==
          slurp("/tmp/fracjump_test/repro_b/realization.csv"));
}

TEST_CASE("figure1 study emits both trajectories and detects the memory effect", "[runner]") {
    auto j = benchmark_json();
    j["study"] = "figure1";
    j["output_dir"] = "/tmp/fracjump_test/fig1";
    const auto report = run_study(parse_config(j), 1);
    CHECK(report.all_passed);
    const auto frac = slurp("/tmp/fracjump_test/fig1/figure1_fractional.csv");
    const auto ode = slurp("/tmp/fracjump_test/fig1/figure1_ode.csv");
    CHECK(frac.rfind("t,u,is_jump,left_limit\n", 0) == 0);
    CHECK(ode.rfind("t,u,is_jump,left_limit\n", 0) == 0);
    CHECK(frac != ode);
}

TEST_CASE("convergence study observes first order on the exponential case", "[runner]") {
    auto j = benchmark_json();
    j["study"] = "convergence";
    j["output_dir"] = "/tmp/fracjump_test/conv";
    const auto report = run_study(parse_config(j), 1);
    CHECK(report.all_passed);
    const double order = report.document["results"]["observed_order"].get<double>();
    CHECK(order >= 0.85);
    CHECK(order <= 1.15);
    CHECK(fs::exists("/tmp/fracjump_test/conv/convergence.csv"));
}

TEST_CASE("mc_moment study passes its stability check", "[runner]") {
    auto j = benchmark_json();
    j["study"] = "mc_moment";
    j["M"] = 400;
    j["output_dir"] = "/tmp/fracjump_test/mc";
    const auto report = run_study(parse_config(j), 2);
    CHECK(report.all_passed);
    CHECK(report.document["results"]["estimate"].get<double>() > 0.0);
    CHECK(report.document["results"].contains("envelope_constant"));
}
