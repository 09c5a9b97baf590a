// rarefan: numerical laboratory for planar rarefaction waves in barotropic
// Euler flow, with acoustic-geometry and weighted-energy diagnostics.

#include "rarefan/acoustic_geometry.hpp"
#include "rarefan/background_wave.hpp"
#include "rarefan/energy_diagnostics.hpp"
#include "rarefan/experiment.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace rarefan;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct FanOptions {
    double gamma = 1.4;
    double A = -1.0; // default 1/gamma
    double left_rho = 1.0;
    double left_v = 0.0;
    double xi_plus = -0.5;

    void attach(CLI::App* cmd) {
        cmd->add_option("--gamma", gamma, "adiabatic exponent")->capture_default_str();
        cmd->add_option("--A", A, "pressure scale (default 1/gamma)");
        cmd->add_option("--left-rho", left_rho, "left-state density")->capture_default_str();
        cmd->add_option("--left-v", left_v, "left-state normal velocity")->capture_default_str();
        cmd->add_option("--xi-plus", xi_plus, "lambda1 of the right state")->capture_default_str();
    }
    BackgroundWave make(int dim = 1) const {
        GasModel gas(gamma, A > 0.0 ? A : 1.0 / gamma);
        PrimitiveState um(left_rho, left_v);
        um.dim = dim;
        return BackgroundWave::connect_right_state(gas, um, xi_plus);
    }
};

int cmd_background(const FanOptions& fan, double t, int samples, const std::string& out) {
    const BackgroundWave bg = fan.make();
    std::FILE* f = out.empty() ? stdout : std::fopen(out.c_str(), "w");
    if (!f) {
        std::cerr << "cannot open " << out << " for writing\n";
        return kExitValidation;
    }
    std::fputs("xi,rho,v1,mu\n", f);
    const double lo = bg.xi_minus();
    const double hi = bg.xi_plus();
    for (int i = 0; i < samples; ++i) {
        const double xi = samples == 1 ? lo : lo + (hi - lo) * i / (samples - 1);
        const PrimitiveState s = bg.sample(xi);
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", xi, s.rho, s.v[0], bg.lapse(t, xi));
    }
    if (f != stdout) std::fclose(f);
    return kExitOk;
}

int cmd_simulate(const std::string& path) {
    const ScenarioReport rep = run_scenario_file(path);
    int failures = 0;
    for (const auto& run : rep.runs) {
        std::cout << "run " << run.summary["config"]["name"].get<std::string>() << ": outputs in "
                  << run.directory << "\n";
        for (const auto& c : run.checks) {
            std::cout << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name
                      << "  value=" << c.value << " threshold=" << c.threshold << "\n";
            if (!c.pass) ++failures;
        }
    }
    for (const auto& c : rep.checks) {
        std::cout << "[" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << "  value=" << c.value
                  << " threshold=" << c.threshold << "\n";
        if (!c.pass) ++failures;
    }
    std::cout << (rep.all_pass ? "all checks passed" : "some checks FAILED") << "\n";
    return kExitOk; // check failures are reported in the summary, not the exit code
}

int cmd_geometry(const FanOptions& fan, const std::string& snapshot_path,
                 const std::string& eikonal_path, const std::string& out_prefix) {
    const FieldSnapshot snap = read_snapshot(snapshot_path);
    const BackgroundWave bg = fan.make(snap.grid.dim);
    const GasModel gas = bg.gas();

    EikonalField ek;
    if (!eikonal_path.empty()) {
        std::vector<std::string> names;
        const auto fields = read_field_dump(eikonal_path, names);
        bool found = false;
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == "u") {
                ek.u = fields[i];
                found = true;
            }
        if (!found) throw std::invalid_argument(eikonal_path + " has no 'u' channel");
        ek.grid = snap.grid;
        ek.time = snap.time;
    } else {
        ek = eikonal_init(snap.grid, snap.time); // planar fronts u = x1
    }

    const GeometryDiagnostics d = geometry_diagnostics(gas, snap, ek);
    std::vector<std::string> names{"u", "mu", "trchi"};
    std::vector<const ScalarField*> fields{&ek.u, &d.lapse.mu, &d.trchi};
    if (snap.grid.dim == 2) {
        names.push_back("omega");
        fields.push_back(&d.omega);
    }
    write_field_dump(snap, names, fields, out_prefix + ".rfan");

    json j;
    j["snapshot"] = snapshot_path;
    j["time"] = snap.time;
    j["mu_min"] = d.min_mu;
    j["mu_max"] = d.max_mu;
    j["max_abs_trchi"] = d.max_abs_trchi;
    j["max_abs_omega"] = d.max_abs_omega;
    j["chi_mu_ratio"] = d.chi_mu_ratio;
    std::ofstream os(out_prefix + ".summary.json");
    os << j.dump(2) << "\n";
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_energy(const FanOptions& fan, const std::string& snapshot_path, int order,
               const std::string& out) {
    const FieldSnapshot snap = read_snapshot(snapshot_path);
    const BackgroundWave bg = fan.make(snap.grid.dim);
    const WeightSchedule ws{2.0, 0.5, std::max(order, 0)};
    const PerturbationField pert = perturbation_from(snap, bg);
    ScalarField mu(snap.grid.cell_count());
    for (int i = 0; i < snap.grid.nx; ++i) {
        const double v = bg.lapse(snap.time, snap.grid.xc(i) / snap.time);
        for (int j = 0; j < snap.grid.ny; ++j) mu[snap.grid.index(i, j)] = v;
    }
    std::FILE* f = out.empty() ? stdout : std::fopen(out.c_str(), "w");
    if (!f) {
        std::cerr << "cannot open " << out << " for writing\n";
        return kExitValidation;
    }
    std::fputs("k,E_k\n", f);
    for (int k = 0; k <= order; ++k)
        std::fprintf(f, "%d,%.17g\n", k, weighted_energy(ws, pert, mu, k));
    if (f != stdout) std::fclose(f);
    return kExitOk;
}

int cmd_report(const std::vector<std::string>& paths) {
    bool all = true;
    int counted = 0;
    for (const auto& p : paths) {
        std::string file = p;
        if (std::filesystem::is_directory(p)) file = p + "/summary.json";
        std::ifstream is(file);
        if (!is) throw std::invalid_argument("cannot read summary: " + file);
        json j = json::parse(is);
        const std::string name = j["config"]["name"].get<std::string>();
        for (const auto& c : j["checks"]) {
            const bool pass = c["pass"].get<bool>();
            all = all && pass;
            ++counted;
            std::cout << "[" << (pass ? "PASS" : "FAIL") << "] " << name << "/"
                      << c["name"].get<std::string>() << "  value=" << c["value"].dump()
                      << " threshold=" << c["threshold"].dump() << "\n";
        }
    }
    std::cout << counted << " checks, " << (all ? "all passed" : "FAILURES present") << "\n";
    return all ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"planar rarefaction-wave laboratory"};
    app.require_subcommand(1);

    FanOptions bg_fan;
    double bg_t = 2.0;
    int bg_samples = 5;
    std::string bg_out;
    auto* background =
        app.add_subcommand("background", "tabulate the exact fan profile and lapse");
    bg_fan.attach(background);
    background->add_option("--t", bg_t, "time of the profile")->capture_default_str();
    background->add_option("--samples", bg_samples, "number of xi samples across the fan")
        ->capture_default_str();
    background->add_option("--out", bg_out, "CSV output path (default stdout)");

    std::string sim_path;
    auto* simulate = app.add_subcommand("simulate", "run a config or scenario file");
    simulate->add_option("config", sim_path, "JSON config path")->required();

    FanOptions geo_fan;
    std::string geo_snapshot, geo_eikonal, geo_out = "geometry";
    auto* geometry =
        app.add_subcommand("geometry", "recompute geometric diagnostics from a snapshot dump");
    geo_fan.attach(geometry);
    geometry->add_option("--snapshot", geo_snapshot, "RFAN snapshot path")->required();
    geometry->add_option("--eikonal", geo_eikonal, "field dump with a 'u' channel");
    geometry->add_option("--out", geo_out, "output prefix")->capture_default_str();

    FanOptions en_fan;
    std::string en_snapshot, en_out;
    int en_order = 0;
    auto* energy =
        app.add_subcommand("energy", "recompute weighted energies from a snapshot dump");
    en_fan.attach(energy);
    energy->add_option("--snapshot", en_snapshot, "RFAN snapshot path")->required();
    energy->add_option("--order", en_order, "maximum derivative order")->capture_default_str();
    energy->add_option("--out", en_out, "CSV output path (default stdout)");

    std::vector<std::string> report_paths;
    auto* report = app.add_subcommand("report", "aggregate pass/fail across run summaries");
    report->add_option("summaries", report_paths, "summary.json files or run directories")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (background->parsed()) return cmd_background(bg_fan, bg_t, bg_samples, bg_out);
        if (simulate->parsed()) return cmd_simulate(sim_path);
        if (geometry->parsed()) return cmd_geometry(geo_fan, geo_snapshot, geo_eikonal, geo_out);
        if (energy->parsed()) return cmd_energy(en_fan, en_snapshot, en_order, en_out);
        if (report->parsed()) return cmd_report(report_paths);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
