#ifndef RAREFAN_EXPERIMENT_HPP
#define RAREFAN_EXPERIMENT_HPP

#include "rarefan/background_wave.hpp"
#include "rarefan/energy_diagnostics.hpp"
#include "rarefan/euler_solver.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rarefan {

enum class PerturbationKind {
    None,
    GaussianDensity,
    GaussianVelocity,
    TransverseSine,
    Vortical,
    SimpleWave, // bump in the 1-family Riemann invariant v1 - 2c/(gamma-1)
};

struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::None;
    double amplitude = 0.0;
    std::array<double, 2> center{0.0, 0.0};
    std::array<double, 2> width{0.1, 0.1}; // gaussian sigmas, truncated at 6 sigma
    int transverse_wavenumber = 1;
};

enum class MuSource { Background, Measured };

struct DiagnosticsSpec {
    bool eikonal = true;
    bool geometry = true;
    bool energy = true;
    int max_order = 3;
    MuSource mu_source = MuSource::Background;
    bool background_error = false;
    std::vector<double> snapshot_times;
};

struct DecayCheckSpec {
    double max_final_ratio = 0.6;
    double alpha_min = 0.2;
    double alpha_max = 0.8;
};

struct LapseCheckSpec {
    double rel_tol = 0.05;
    double interior_margin = 0.1; // fraction of the fan width kept off the sonic edge
    double t_min = 1.5;
    double t_max = 3.0;
};

struct ChecksSpec {
    std::optional<double> energy_bound_factor;
    std::optional<DecayCheckSpec> decay;
    std::optional<double> chi_mu_factor;
    std::optional<double> gradient_growth_factor;
    std::optional<double> vorticity_envelope_slack;
    std::optional<LapseCheckSpec> lapse_match;
};

struct OutputSpec {
    std::string directory = "out";
    bool plots = false;
    bool snapshots = false;
};

struct ExperimentConfig {
    std::string name = "run";
    GasModel gas = GasModel::normalized();
    double left_rho = 1.0;
    std::array<double, 2> left_v{0.0, 0.0};
    double xi_plus = -0.5;
    Grid grid = Grid::make_1d(400, -3.0, 1.0);
    double cfl = 0.45;
    FluxScheme flux = FluxScheme::Rusanov;
    SlopeLimiter limiter = SlopeLimiter::Minmod;
    BoundaryPolicy boundary = BoundaryPolicy::Background;
    double rho_floor = 1e-10;
    std::vector<PerturbationSpec> perturbations;
    double t0 = 1.0;
    double t_end = 2.0;
    double observe_every = 0.25;
    DiagnosticsSpec diagnostics;
    ChecksSpec checks;
    OutputSpec output;
    double bootstrap_c0 = 10.0;
    long seed = 0;

    BackgroundWave make_background() const;
    void validate() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Exact background at t0 plus the configured perturbation.
FieldSnapshot build_initial_data(const ExperimentConfig& cfg, const BackgroundWave& bg);

// Characteristic-crossing time of the initial data: t0 - 1/min d1(lambda1),
// infinity when no compression is present.
double steepening_time(const GasModel& gas, const FieldSnapshot& initial);

struct CheckOutcome {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct ExperimentReport {
    nlohmann::json summary;
    std::string directory;
    std::string series_csv;
    std::vector<CheckOutcome> checks;
    DecayFit decay;
    BootstrapResult bootstrap;
    std::vector<EnergyReport> series;
    double final_l1_error = -1.0;
    bool all_pass = true;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

struct ScenarioReport {
    std::string name;
    std::vector<ExperimentReport> runs;
    std::vector<CheckOutcome> checks; // cross-run checks
    bool all_pass = true;
};

// A scenario file is either a single config object or
// {"name":..., "runs": [cfg...], "scenario_checks": {...}}.
ScenarioReport run_scenario_file(const std::string& path);

std::string resolve_output_dir(const ExperimentConfig& cfg);

} // namespace rarefan

#endif
