#include "rarefan/experiment.hpp"

#include "rarefan/finite_difference.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace rarefan;
using nlohmann::json;

namespace {

json minimal_config() {
    return json::parse(R"({
      "name": "tiny",
      "fan": {"left_rho": 1.0, "left_v": [0.0], "xi_plus": -0.5},
      "grid": {"dim": 1, "nx": 64, "x_min": -3.0, "x_max": 1.0},
      "time": {"t0": 1.0, "t_end": 1.3, "observe_every": 0.1},
      "perturbation": {"kind": "gaussian_density", "amplitude": 1e-3,
                        "center": [-0.71875], "width": [0.1]},
      "output": {"directory": "out_test/tiny"}
    })");
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("load_config: defaults, validation errors, unknown keys") {
    const ExperimentConfig cfg = config_from_json(minimal_config());
    CHECK(cfg.gas.gamma == 1.4);
    CHECK(cfg.gas.A == doctest::Approx(1.0 / 1.4));
    CHECK(cfg.cfl == 0.45);
    CHECK(cfg.diagnostics.max_order == 3);

    json bad_time = minimal_config();
    bad_time["time"]["t_end"] = 0.5;
    CHECK_THROWS_WITH_AS(config_from_json(bad_time) /* named field */,
                         doctest::Contains("t_end"), std::invalid_argument);

    json unknown = minimal_config();
    unknown["viscosity"] = 0.1;
    CHECK_THROWS_WITH_AS(config_from_json(unknown), doctest::Contains("viscosity"),
                         std::invalid_argument);

    json unknown_nested = minimal_config();
    unknown_nested["solver"] = {{"cfl", 0.4}, {"entropy_fix", true}};
    CHECK_THROWS_WITH_AS(config_from_json(unknown_nested), doctest::Contains("entropy_fix"),
                         std::invalid_argument);

    json bad_t0 = minimal_config();
    bad_t0["time"]["t0"] = 0.5;
    bad_t0["time"]["t_end"] = 0.9;
    CHECK_THROWS_WITH_AS(config_from_json(bad_t0), doctest::Contains("t0"),
                         std::invalid_argument);
}

TEST_CASE("config round trip through json") {
    const ExperimentConfig cfg = config_from_json(minimal_config());
    const ExperimentConfig back = config_from_json(config_to_json(cfg));
    CHECK(config_to_json(back) == config_to_json(cfg));
}

TEST_CASE("load_config: missing file names the path") {
    CHECK_THROWS_WITH_AS(load_config("missing.json"), doctest::Contains("missing.json"),
                         std::invalid_argument);
}

TEST_CASE("build_initial_data: exact background at eps = 0, bump at center") {
    json j = minimal_config();
    j["perturbation"]["amplitude"] = 0.0;
    ExperimentConfig cfg = config_from_json(j);
    const BackgroundWave bg = cfg.make_background();
    const FieldSnapshot base = build_initial_data(cfg, bg);
    const FieldSnapshot exact = bg.evaluate_on_grid(cfg.grid, cfg.t0);
    for (std::size_t k = 0; k < base.rho.size(); ++k) CHECK(base.rho[k] == exact.rho[k]);

    ExperimentConfig cfg2 = config_from_json(minimal_config());
    const FieldSnapshot pert = build_initial_data(cfg2, bg);
    double max_d = 0.0;
    for (std::size_t k = 0; k < pert.rho.size(); ++k)
        max_d = std::max(max_d, std::abs(pert.rho[k] - exact.rho[k]));
    CHECK(max_d == doctest::Approx(1e-3).epsilon(1e-6));

    json off = minimal_config();
    off["perturbation"]["center"] = {0.9};
    CHECK_THROWS_WITH_AS(config_from_json(off) /* buffer */, doctest::Contains("buffer"),
                         std::invalid_argument);
}

TEST_CASE("build_initial_data: transverse sine is periodic across the extent") {
    json j = minimal_config();
    j["grid"] = {{"dim", 2}, {"nx", 32},     {"ny", 16},    {"x_min", -3.0},
                 {"x_max", 1.0}, {"y_min", 0.0}, {"y_max", 0.5}};
    j["perturbation"] = {{"kind", "transverse_sine"},
                         {"amplitude", 1e-3},
                         {"center", {-0.75, 0.0}},
                         {"width", {0.1, 0.1}},
                         {"transverse_wavenumber", 2}};
    ExperimentConfig cfg = config_from_json(j);
    const BackgroundWave bg = cfg.make_background();
    const FieldSnapshot snap = build_initial_data(cfg, bg);
    const Grid& g = cfg.grid;
    // wavenumber 2 over ny=16 rows: rows j and j+8 coincide
    for (int i = 0; i < g.nx; ++i)
        for (int j2 = 0; j2 < 8; ++j2)
            CHECK(snap.rho[g.index(i, j2)] ==
                  doctest::Approx(snap.rho[g.index(i, j2 + 8)]).epsilon(1e-12));
}

TEST_CASE("steepening oracle: simple-wave compression crosses at t0 + 1/max slope") {
    // w- bump on a uniform background; lambda1 follows Burgers exactly, and
    // the bump's right flank carries the compression
    json j = minimal_config();
    j["fan"] = {{"left_rho", 1.0}, {"left_v", {0.0}}, {"xi_plus", -1.0}}; // degenerate fan
    j["grid"] = {{"dim", 1}, {"nx", 400}, {"x_min", -4.0}, {"x_max", 4.0}};
    j["perturbation"] = {
        {"kind", "simple_wave"}, {"amplitude", 0.4}, {"center", {0.0}}, {"width", {0.4}}};
    ExperimentConfig cfg = config_from_json(j);
    const BackgroundWave bg = cfg.make_background();
    const FieldSnapshot snap = build_initial_data(cfg, bg);
    const double t_star = steepening_time(cfg.gas, snap);
    // analytic: d(lambda1)/dx = (gamma+1)/4 * eps * d(gaussian)/dx, extreme at x = +-sigma
    const double slope_ext =
        0.25 * (cfg.gas.gamma + 1.0) * 0.4 * std::exp(-0.5) / 0.4; // eps/sigma * e^{-1/2}
    CHECK(t_star == doctest::Approx(1.0 + 1.0 / slope_ext).epsilon(0.01));

    // the expansive background fan alone never crosses
    json je = minimal_config();
    je["perturbation"]["amplitude"] = 0.0;
    ExperimentConfig cfge = config_from_json(je);
    const FieldSnapshot snape = build_initial_data(cfge, cfge.make_background());
    CHECK(std::isinf(steepening_time(cfge.gas, snape)));
}

TEST_CASE("run_experiment: tiny run produces outputs, deterministic CSV") {
    json j = minimal_config();
    const std::string out = temp_path("rarefan_tiny_run");
    std::filesystem::remove_all(out);
    j["output"]["directory"] = out;
    j["diagnostics"] = {{"eikonal", true}, {"geometry", true}, {"energy", true},
                        {"max_order", 2},  {"mu_source", "background"}};
    ExperimentConfig cfg = config_from_json(j);
    const ExperimentReport rep = run_experiment(cfg);
    CHECK(std::filesystem::exists(rep.series_csv));
    CHECK(std::filesystem::exists(out + "/summary.json"));
    CHECK(std::filesystem::exists(out + "/metrics.csv"));
    CHECK(rep.summary.contains("config"));
    CHECK(rep.summary.contains("decay_fit"));
    CHECK(rep.summary.contains("bootstrap"));
    CHECK(rep.summary.contains("checks"));
    CHECK(rep.summary.contains("timings"));
    REQUIRE(rep.series.size() == 4); // t = 1.0, 1.1, 1.2, 1.3
    CHECK(rep.series.front().t == 1.0);
    CHECK(rep.series.back().t == doctest::Approx(1.3).epsilon(1e-12));
    // E_total equals the fixed-order sum of the E_k
    for (const auto& r : rep.series) {
        double s = 0.0;
        for (double e : r.E) s += e;
        CHECK(r.E_total == doctest::Approx(s).epsilon(1e-12));
    }

    const std::string csv1 = slurp(rep.series_csv);
    const ExperimentReport rep2 = run_experiment(cfg);
    CHECK(slurp(rep2.series_csv) == csv1);
    CHECK(!csv1.empty());

    std::ifstream is(rep.series_csv);
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,E0,E1,E2,E_total,linf,linf_grad,flux,chi_mu_ratio,ba1,ba2,ba3");
    std::filesystem::remove_all(out);
}

TEST_CASE("run_experiment: summary json echoes the config faithfully") {
    json j = minimal_config();
    const std::string out = temp_path("rarefan_echo_run");
    std::filesystem::remove_all(out);
    j["output"]["directory"] = out;
    j["time"]["t_end"] = 1.1;
    ExperimentConfig cfg = config_from_json(j);
    const ExperimentReport rep = run_experiment(cfg);
    const ExperimentConfig echoed = config_from_json(rep.summary["config"]);
    CHECK(config_to_json(echoed) == config_to_json(cfg));
    std::filesystem::remove_all(out);
}
