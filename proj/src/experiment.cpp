#include "rarefan/experiment.hpp"

#include "rarefan/acoustic_geometry.hpp"
#include "rarefan/finite_difference.hpp"
#include "rarefan/svg_plot.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace rarefan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void bad_config(const std::string& what) {
    throw std::invalid_argument("config: " + what);
}

void reject_unknown_keys(const json& j, const std::string& scope,
                         std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) bad_config("unknown key \"" + (scope.empty() ? it.key() : scope + "." + it.key()) +
                            "\"");
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

std::array<double, 2> get_vec2(const json& j, const char* key, std::array<double, 2> fallback) {
    if (!j.contains(key)) return fallback;
    const auto& a = j.at(key);
    if (!a.is_array() || a.empty() || a.size() > 2) bad_config(std::string(key) + " must be [x] or [x, y]");
    std::array<double, 2> out{a[0].get<double>(), a.size() == 2 ? a[1].get<double>() : 0.0};
    return out;
}

PerturbationKind kind_from_string(const std::string& s) {
    if (s == "none") return PerturbationKind::None;
    if (s == "gaussian_density") return PerturbationKind::GaussianDensity;
    if (s == "gaussian_velocity") return PerturbationKind::GaussianVelocity;
    if (s == "transverse_sine") return PerturbationKind::TransverseSine;
    if (s == "vortical") return PerturbationKind::Vortical;
    if (s == "simple_wave") return PerturbationKind::SimpleWave;
    bad_config("perturbation.kind \"" + s + "\" is not recognized");
}

std::string kind_to_string(PerturbationKind k) {
    switch (k) {
        case PerturbationKind::None: return "none";
        case PerturbationKind::GaussianDensity: return "gaussian_density";
        case PerturbationKind::GaussianVelocity: return "gaussian_velocity";
        case PerturbationKind::TransverseSine: return "transverse_sine";
        case PerturbationKind::Vortical: return "vortical";
        case PerturbationKind::SimpleWave: return "simple_wave";
    }
    return "none";
}

} // namespace

BackgroundWave ExperimentConfig::make_background() const {
    PrimitiveState um(left_rho, left_v[0]);
    um.dim = grid.dim;
    um.v[1] = grid.dim == 2 ? left_v[1] : 0.0;
    return BackgroundWave::connect_right_state(gas, um, xi_plus);
}

namespace {

void check_support_buffer(const Grid& g, const PerturbationSpec& p) {
    if (p.kind == PerturbationKind::None || p.amplitude == 0.0) return;
    const double lo = p.center[0] - 6.0 * p.width[0];
    const double hi = p.center[0] + 6.0 * p.width[0];
    const double buffer = 0.1 * g.x_extent();
    if (lo < g.x0 + buffer || hi > g.x0 + g.x_extent() - buffer)
        bad_config("perturbation support [" + std::to_string(lo) + ", " + std::to_string(hi) +
                   "] violates the 10% buffer from the x boundaries");
}

} // namespace

void ExperimentConfig::validate() const {
    grid.validate();
    for (const auto& p : perturbations) {
        if (!(p.amplitude >= 0.0)) bad_config("perturbation.amplitude must be >= 0");
        if (grid.dim == 1 && (p.kind == PerturbationKind::TransverseSine ||
                              p.kind == PerturbationKind::Vortical))
            bad_config("perturbation.kind requires a 2D grid");
        check_support_buffer(grid, p);
    }
    if (!(t0 >= 1.0)) bad_config("time.t0 must be >= 1");
    if (!(t_end > t0)) bad_config("time.t_end must exceed time.t0");
    if (!(observe_every > 0.0)) bad_config("time.observe_every must be > 0");
    if (diagnostics.max_order < 0 || diagnostics.max_order > 4)
        bad_config("diagnostics.max_order must be in [0, 4]");
    if (!(cfl > 0.0) || cfl > 1.0) bad_config("solver.cfl must be in (0, 1]");
    if (!(rho_floor > 0.0)) bad_config("solver.rho_floor must be > 0");
    if (!(bootstrap_c0 > 0.0)) bad_config("bootstrap.C0 must be > 0");
    for (double ts : diagnostics.snapshot_times)
        if (ts < t0 - 1e-12 || ts > t_end + 1e-12)
            bad_config("diagnostics.snapshot_times entries must lie in [t0, t_end]");
    make_background(); // validates the fan connection
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) bad_config("top level must be an object");
    reject_unknown_keys(j, "", {"name", "gas", "fan", "grid", "solver", "perturbation",
                                "perturbations", "time", "diagnostics", "checks", "output",
                                "bootstrap", "seed"});
    ExperimentConfig cfg;
    cfg.name = get_or<std::string>(j, "name", "run");

    if (j.contains("gas")) {
        const json& g = j.at("gas");
        reject_unknown_keys(g, "gas", {"gamma", "A"});
        const double gamma = get_or<double>(g, "gamma", 1.4);
        cfg.gas = GasModel(gamma, get_or<double>(g, "A", 1.0 / gamma));
    }

    if (j.contains("fan")) {
        const json& f = j.at("fan");
        reject_unknown_keys(f, "fan", {"left_rho", "left_v", "xi_plus"});
        cfg.left_rho = get_or<double>(f, "left_rho", 1.0);
        cfg.left_v = get_vec2(f, "left_v", {0.0, 0.0});
        if (!f.contains("xi_plus")) bad_config("fan.xi_plus is required");
        cfg.xi_plus = f.at("xi_plus").get<double>();
    }

    if (!j.contains("grid")) bad_config("grid is required");
    {
        const json& g = j.at("grid");
        reject_unknown_keys(g, "grid", {"dim", "nx", "ny", "x_min", "x_max", "y_min", "y_max"});
        const int dim = get_or<int>(g, "dim", 1);
        const int nx = get_or<int>(g, "nx", 400);
        const double x0 = g.at("x_min").get<double>();
        const double x1 = g.at("x_max").get<double>();
        if (!(x1 > x0)) bad_config("grid.x_max must exceed grid.x_min");
        if (dim == 1) {
            cfg.grid = Grid::make_1d(nx, x0, x1);
        } else if (dim == 2) {
            const int ny = get_or<int>(g, "ny", 100);
            const double y0 = get_or<double>(g, "y_min", 0.0);
            const double y1 = get_or<double>(g, "y_max", 1.0);
            if (!(y1 > y0)) bad_config("grid.y_max must exceed grid.y_min");
            cfg.grid = Grid::make_2d(nx, ny, x0, x1, y0, y1);
        } else {
            bad_config("grid.dim must be 1 or 2");
        }
    }

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        reject_unknown_keys(s, "solver", {"cfl", "flux", "limiter", "boundary", "rho_floor"});
        cfg.cfl = get_or<double>(s, "cfl", 0.45);
        cfg.rho_floor = get_or<double>(s, "rho_floor", 1e-10);
        const std::string flux = get_or<std::string>(s, "flux", "rusanov");
        if (flux == "rusanov")
            cfg.flux = FluxScheme::Rusanov;
        else if (flux == "hll")
            cfg.flux = FluxScheme::Hll;
        else
            bad_config("solver.flux must be rusanov or hll");
        const std::string lim = get_or<std::string>(s, "limiter", "minmod");
        if (lim == "minmod")
            cfg.limiter = SlopeLimiter::Minmod;
        else if (lim == "first_order")
            cfg.limiter = SlopeLimiter::FirstOrder;
        else if (lim == "central")
            cfg.limiter = SlopeLimiter::Central;
        else
            bad_config("solver.limiter must be minmod, first_order, or central");
        const std::string bc = get_or<std::string>(s, "boundary", "background");
        if (bc == "background")
            cfg.boundary = BoundaryPolicy::Background;
        else if (bc == "periodic")
            cfg.boundary = BoundaryPolicy::Periodic;
        else
            bad_config("solver.boundary must be background or periodic");
    }

    auto parse_perturbation = [](const json& p, const std::string& scope) {
        reject_unknown_keys(p, scope,
                            {"kind", "amplitude", "center", "width", "transverse_wavenumber"});
        PerturbationSpec spec;
        spec.kind = kind_from_string(get_or<std::string>(p, "kind", "none"));
        spec.amplitude = get_or<double>(p, "amplitude", 0.0);
        spec.center = get_vec2(p, "center", {0.0, 0.0});
        spec.width = get_vec2(p, "width", {0.1, 0.1});
        if (spec.width[1] == 0.0) spec.width[1] = spec.width[0];
        spec.transverse_wavenumber = get_or<int>(p, "transverse_wavenumber", 1);
        return spec;
    };
    if (j.contains("perturbation") && j.contains("perturbations"))
        bad_config("give either perturbation or perturbations, not both");
    if (j.contains("perturbation"))
        cfg.perturbations.push_back(parse_perturbation(j.at("perturbation"), "perturbation"));
    if (j.contains("perturbations")) {
        int idx = 0;
        for (const json& p : j.at("perturbations"))
            cfg.perturbations.push_back(
                parse_perturbation(p, "perturbations[" + std::to_string(idx++) + "]"));
    }

    if (!j.contains("time")) bad_config("time is required");
    {
        const json& t = j.at("time");
        reject_unknown_keys(t, "time", {"t0", "t_end", "observe_every"});
        cfg.t0 = get_or<double>(t, "t0", 1.0);
        if (!t.contains("t_end")) bad_config("time.t_end is required");
        cfg.t_end = t.at("t_end").get<double>();
        cfg.observe_every = get_or<double>(t, "observe_every", 0.25);
    }

    if (j.contains("diagnostics")) {
        const json& d = j.at("diagnostics");
        reject_unknown_keys(d, "diagnostics",
                            {"eikonal", "geometry", "energy", "max_order", "mu_source",
                             "background_error", "snapshot_times"});
        cfg.diagnostics.eikonal = get_or<bool>(d, "eikonal", true);
        cfg.diagnostics.geometry = get_or<bool>(d, "geometry", true);
        cfg.diagnostics.energy = get_or<bool>(d, "energy", true);
        cfg.diagnostics.max_order = get_or<int>(d, "max_order", 3);
        const std::string mu = get_or<std::string>(d, "mu_source", "background");
        if (mu == "background")
            cfg.diagnostics.mu_source = MuSource::Background;
        else if (mu == "measured")
            cfg.diagnostics.mu_source = MuSource::Measured;
        else
            bad_config("diagnostics.mu_source must be background or measured");
        cfg.diagnostics.background_error = get_or<bool>(d, "background_error", false);
        cfg.diagnostics.snapshot_times =
            get_or<std::vector<double>>(d, "snapshot_times", {});
    }

    if (j.contains("checks")) {
        const json& c = j.at("checks");
        reject_unknown_keys(c, "checks",
                            {"energy_bound_factor", "decay", "chi_mu_factor",
                             "gradient_growth_factor", "vorticity_envelope_slack", "lapse_match"});
        if (c.contains("energy_bound_factor"))
            cfg.checks.energy_bound_factor = c.at("energy_bound_factor").get<double>();
        if (c.contains("decay")) {
            const json& d = c.at("decay");
            reject_unknown_keys(d, "checks.decay", {"max_final_ratio", "alpha_min", "alpha_max"});
            DecayCheckSpec spec;
            spec.max_final_ratio = get_or<double>(d, "max_final_ratio", 0.6);
            spec.alpha_min = get_or<double>(d, "alpha_min", 0.2);
            spec.alpha_max = get_or<double>(d, "alpha_max", 0.8);
            cfg.checks.decay = spec;
        }
        if (c.contains("chi_mu_factor"))
            cfg.checks.chi_mu_factor = c.at("chi_mu_factor").get<double>();
        if (c.contains("gradient_growth_factor"))
            cfg.checks.gradient_growth_factor = c.at("gradient_growth_factor").get<double>();
        if (c.contains("vorticity_envelope_slack"))
            cfg.checks.vorticity_envelope_slack = c.at("vorticity_envelope_slack").get<double>();
        if (c.contains("lapse_match")) {
            const json& l = c.at("lapse_match");
            reject_unknown_keys(l, "checks.lapse_match",
                                {"rel_tol", "interior_margin", "t_min", "t_max"});
            LapseCheckSpec spec;
            spec.rel_tol = get_or<double>(l, "rel_tol", 0.05);
            spec.interior_margin = get_or<double>(l, "interior_margin", 0.1);
            spec.t_min = get_or<double>(l, "t_min", 1.5);
            spec.t_max = get_or<double>(l, "t_max", 3.0);
            cfg.checks.lapse_match = spec;
        }
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        reject_unknown_keys(o, "output", {"directory", "plots", "snapshots"});
        cfg.output.directory = get_or<std::string>(o, "directory", "out");
        cfg.output.plots = get_or<bool>(o, "plots", false);
        cfg.output.snapshots = get_or<bool>(o, "snapshots", false);
    }

    if (j.contains("bootstrap")) {
        const json& b = j.at("bootstrap");
        reject_unknown_keys(b, "bootstrap", {"C0"});
        cfg.bootstrap_c0 = get_or<double>(b, "C0", 10.0);
    }

    cfg.seed = get_or<long>(j, "seed", 0);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot read config file: " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["gas"] = {{"gamma", cfg.gas.gamma}, {"A", cfg.gas.A}};
    j["fan"] = {{"left_rho", cfg.left_rho},
                {"left_v", std::vector<double>{cfg.left_v[0], cfg.left_v[1]}},
                {"xi_plus", cfg.xi_plus}};
    json grid = {{"dim", cfg.grid.dim},
                 {"nx", cfg.grid.nx},
                 {"x_min", cfg.grid.x0},
                 {"x_max", cfg.grid.x0 + cfg.grid.x_extent()}};
    if (cfg.grid.dim == 2) {
        grid["ny"] = cfg.grid.ny;
        grid["y_min"] = cfg.grid.y0;
        grid["y_max"] = cfg.grid.y0 + cfg.grid.y_extent();
    }
    j["grid"] = grid;
    j["solver"] = {
        {"cfl", cfg.cfl},
        {"flux", cfg.flux == FluxScheme::Rusanov ? "rusanov" : "hll"},
        {"limiter", cfg.limiter == SlopeLimiter::Minmod
                        ? "minmod"
                        : (cfg.limiter == SlopeLimiter::Central ? "central" : "first_order")},
        {"boundary", cfg.boundary == BoundaryPolicy::Background ? "background" : "periodic"},
        {"rho_floor", cfg.rho_floor}};
    json perts = json::array();
    for (const auto& p : cfg.perturbations)
        perts.push_back({{"kind", kind_to_string(p.kind)},
                         {"amplitude", p.amplitude},
                         {"center", std::vector<double>{p.center[0], p.center[1]}},
                         {"width", std::vector<double>{p.width[0], p.width[1]}},
                         {"transverse_wavenumber", p.transverse_wavenumber}});
    j["perturbations"] = perts;
    j["time"] = {{"t0", cfg.t0}, {"t_end", cfg.t_end}, {"observe_every", cfg.observe_every}};
    json d = {{"eikonal", cfg.diagnostics.eikonal},
              {"geometry", cfg.diagnostics.geometry},
              {"energy", cfg.diagnostics.energy},
              {"max_order", cfg.diagnostics.max_order},
              {"mu_source",
               cfg.diagnostics.mu_source == MuSource::Background ? "background" : "measured"},
              {"background_error", cfg.diagnostics.background_error},
              {"snapshot_times", cfg.diagnostics.snapshot_times}};
    j["diagnostics"] = d;
    json c = json::object();
    if (cfg.checks.energy_bound_factor) c["energy_bound_factor"] = *cfg.checks.energy_bound_factor;
    if (cfg.checks.decay)
        c["decay"] = {{"max_final_ratio", cfg.checks.decay->max_final_ratio},
                      {"alpha_min", cfg.checks.decay->alpha_min},
                      {"alpha_max", cfg.checks.decay->alpha_max}};
    if (cfg.checks.chi_mu_factor) c["chi_mu_factor"] = *cfg.checks.chi_mu_factor;
    if (cfg.checks.gradient_growth_factor)
        c["gradient_growth_factor"] = *cfg.checks.gradient_growth_factor;
    if (cfg.checks.vorticity_envelope_slack)
        c["vorticity_envelope_slack"] = *cfg.checks.vorticity_envelope_slack;
    if (cfg.checks.lapse_match)
        c["lapse_match"] = {{"rel_tol", cfg.checks.lapse_match->rel_tol},
                            {"interior_margin", cfg.checks.lapse_match->interior_margin},
                            {"t_min", cfg.checks.lapse_match->t_min},
                            {"t_max", cfg.checks.lapse_match->t_max}};
    j["checks"] = c;
    j["output"] = {{"directory", cfg.output.directory},
                   {"plots", cfg.output.plots},
                   {"snapshots", cfg.output.snapshots}};
    j["bootstrap"] = {{"C0", cfg.bootstrap_c0}};
    j["seed"] = cfg.seed;
    return j;
}

namespace {

double truncated_gaussian(double x, double x0, double sigma) {
    const double z = (x - x0) / sigma;
    if (std::abs(z) > 6.0) return 0.0;
    return std::exp(-0.5 * z * z);
}

} // namespace

namespace {

void apply_perturbation(const ExperimentConfig& cfg, const PerturbationSpec& p,
                        FieldSnapshot& snap) {
    const Grid& g = cfg.grid;
    check_support_buffer(g, p);
    if (p.kind == PerturbationKind::None || p.amplitude == 0.0) return;
    if (g.dim == 1 &&
        (p.kind == PerturbationKind::TransverseSine || p.kind == PerturbationKind::Vortical))
        bad_config("perturbation.kind requires a 2D grid");

    const double eps = p.amplitude;
    const double gamma = cfg.gas.gamma;
    for (int j = 0; j < g.ny; ++j) {
        const double y = g.yc(j);
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.xc(i);
            const std::size_t k = g.index(i, j);
            PrimitiveState s = snap.primitive_at(k);
            const double gx = truncated_gaussian(x, p.center[0], p.width[0]);
            const double gy = g.dim == 2 ? truncated_gaussian(y, p.center[1], p.width[1]) : 1.0;
            switch (p.kind) {
                case PerturbationKind::None: break;
                case PerturbationKind::GaussianDensity: s.rho += eps * gx * gy; break;
                case PerturbationKind::GaussianVelocity: s.v[0] += eps * gx * gy; break;
                case PerturbationKind::TransverseSine: {
                    const double ph =
                        2.0 * M_PI * p.transverse_wavenumber * (y - g.y0) / g.y_extent();
                    s.rho += eps * std::sin(ph) * gx;
                    break;
                }
                case PerturbationKind::Vortical: {
                    // divergence-free swirl around the center
                    const double rx = (x - p.center[0]) / p.width[0];
                    const double ry = (y - p.center[1]) / p.width[1];
                    if (rx * rx + ry * ry <= 36.0) {
                        const double e = std::exp(-0.5 * (rx * rx + ry * ry));
                        s.v[0] += -eps * ry * e;
                        s.v[1] += eps * rx * e;
                    }
                    break;
                }
                case PerturbationKind::SimpleWave: {
                    // bump the 1-invariant w- = v1 - 2c/(gamma-1), hold w+
                    const double bump = eps * gx * gy;
                    const double c_old = sound_speed(cfg.gas, s.rho);
                    const double c_new = c_old - 0.25 * (gamma - 1.0) * bump;
                    if (!(c_new > 0.0)) bad_config("simple_wave perturbation reaches vacuum");
                    s.v[0] += 0.5 * bump;
                    s.rho = density_from_sound_speed(cfg.gas, c_new);
                    break;
                }
            }
            if (!(s.rho > cfg.rho_floor)) bad_config("perturbed density is not positive");
            snap.set_primitive(k, s);
        }
    }
}

} // namespace

FieldSnapshot build_initial_data(const ExperimentConfig& cfg, const BackgroundWave& bg) {
    const Grid& g = cfg.grid;
    FieldSnapshot snap = bg.evaluate_on_grid(g, cfg.t0);
    for (const auto& p : cfg.perturbations) apply_perturbation(cfg, p, snap);
    return snap;
}


double steepening_time(const GasModel& gas, const FieldSnapshot& initial) {
    const Grid& g = initial.grid;
    ScalarField lam(g.cell_count());
    for (std::size_t k = 0; k < lam.size(); ++k) {
        const PrimitiveState s = initial.primitive_at(k);
        lam[k] = s.v[0] - sound_speed(gas, s.rho);
    }
    const ScalarField dl = ddx(lam, g);
    double worst = 0.0;
    for (double v : dl) worst = std::min(worst, v);
    if (worst >= -1e-12) return std::numeric_limits<double>::infinity();
    return initial.time - 1.0 / worst;
}

namespace {

struct ObsExtras {
    double t = 0.0;
    double max_dv1dx = 0.0;
    double max_grad_v = 0.0;
    double max_abs_omega = 0.0;
    double l1_bg_error = -1.0;
    double eikonal_residual = -1.0;
    double measured_mu_min = 0.0;
    double measured_mu_max = 0.0;
    double lapse_rel_dev = -1.0; // vs the closed-form background lapse
};

ScalarField background_mu_field(const BackgroundWave& bg, const Grid& g, double t) {
    ScalarField mu(g.cell_count());
    for (int i = 0; i < g.nx; ++i) {
        const double v = bg.lapse(t, g.xc(i) / t);
        for (int j = 0; j < g.ny; ++j) mu[g.index(i, j)] = v;
    }
    return mu;
}

} // namespace

std::string resolve_output_dir(const ExperimentConfig& cfg) {
    if (const char* env = std::getenv("RAREFAN_OUT"); env && *env)
        return std::string(env) + "/" + cfg.name;
    return cfg.output.directory;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto wall0 = std::chrono::steady_clock::now();

    const BackgroundWave bg = cfg.make_background();
    const Grid& g = cfg.grid;
    ExperimentReport report;
    report.directory = resolve_output_dir(cfg);
    fs::create_directories(report.directory);

    FieldSnapshot initial = build_initial_data(cfg, bg);
    const double t_star = steepening_time(cfg.gas, initial);

    SolverConfig scfg;
    scfg.cfl = cfg.cfl;
    scfg.flux = cfg.flux;
    scfg.limiter = cfg.limiter;
    scfg.boundary = cfg.boundary;
    scfg.rho_floor = cfg.rho_floor;
    if (cfg.boundary == BoundaryPolicy::Background) {
        scfg.boundary_sampler = [&bg, dim = g.dim](double t, double x, double /*y*/) {
            PrimitiveState s = bg.sample(x / t);
            s.dim = dim;
            return s;
        };
    }

    const WeightSchedule ws{2.0, 0.5, cfg.diagnostics.max_order};
    EikonalField ek;
    EikonalField ek_prev;
    double last_dt = 0.0;
    if (cfg.diagnostics.eikonal) ek = eikonal_init(g, cfg.t0);

    std::vector<EnergyReport> series;
    std::vector<ObsExtras> extras;
    std::vector<double> pending_snapshots = cfg.diagnostics.snapshot_times;
    std::sort(pending_snapshots.begin(), pending_snapshots.end());

    double diag_seconds = 0.0;

    auto observer = [&](const FieldSnapshot& snap) {
        const auto d0 = std::chrono::steady_clock::now();
        EnergyReport row;
        row.t = snap.time;
        ObsExtras ex;
        ex.t = snap.time;

        const PerturbationField pert = perturbation_from(snap, bg);
        const auto norms = linf_norms(pert);
        row.linf = norms[0];
        row.linf_grad = norms[1];

        LapseField measured;
        bool have_measured = false;
        if (cfg.diagnostics.eikonal) {
            measured = lapse_from_eikonal(cfg.gas, snap, ek);
            have_measured = true;
            double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
            for (std::size_t k = 0; k < measured.mu.size(); ++k) {
                if (!measured.valid[k]) continue;
                mn = std::min(mn, measured.mu[k]);
                mx = std::max(mx, measured.mu[k]);
            }
            ex.measured_mu_min = std::isfinite(mn) ? mn : 0.0;
            ex.measured_mu_max = mx;
            if (ek_prev.u.size() == ek.u.size() && last_dt > 0.0)
                ex.eikonal_residual = eikonal_residual(cfg.gas, snap, ek_prev, ek, last_dt);

            // deviation from the closed-form lapse on the fan interior
            if (bg.fan_width() > 0.0) {
                const double margin =
                    cfg.checks.lapse_match ? cfg.checks.lapse_match->interior_margin : 0.1;
                double worst = -1.0;
                for (int i = 0; i < g.nx; ++i) {
                    const double xi = g.xc(i) / snap.time;
                    if (xi - bg.xi_minus() < margin * bg.fan_width()) continue;
                    if (xi > bg.xi_plus() - margin * bg.fan_width()) continue;
                    const double ref = bg.lapse(snap.time, xi);
                    if (ref <= 0.0) continue;
                    for (int j = 0; j < g.ny; ++j) {
                        const std::size_t k = g.index(i, j);
                        if (!measured.valid[k]) continue;
                        worst = std::max(worst, std::abs(measured.mu[k] - ref) / ref);
                    }
                }
                ex.lapse_rel_dev = worst;
            }
        }

        if (cfg.diagnostics.energy) {
            ScalarField mu;
            if (cfg.diagnostics.mu_source == MuSource::Background || !have_measured) {
                mu = background_mu_field(bg, g, snap.time);
            } else {
                mu = measured.mu;
                for (std::size_t k = 0; k < mu.size(); ++k)
                    if (!measured.valid[k]) mu[k] = 0.0;
            }
            row.E.resize(ws.max_order + 1);
            double bshare = 0.0;
            for (int k = 0; k <= ws.max_order; ++k) {
                double share = 0.0;
                row.E[k] = weighted_energy(ws, pert, mu, k, &share);
                bshare += share;
            }
            row.E_total = total_energy(row.E);
            row.boundary_share = bshare;
            double mu_max = 0.0;
            for (double v : mu) mu_max = std::max(mu_max, v);
            if (mu_max > 0.0) row.flux = sonic_flux_proxy(ws, pert, mu, 0, 0.05 * mu_max);
        }

        if (cfg.diagnostics.geometry && cfg.diagnostics.eikonal) {
            const ScalarField chi = tr_chi(cfg.gas, snap, ek);
            row.chi_mu_ratio = chi_mu_ratio(measured, chi);
        }

        // velocity-gradient extremes for steepening and vorticity envelopes
        {
            ScalarField v1(g.cell_count());
            for (std::size_t k = 0; k < v1.size(); ++k) v1[k] = snap.m1[k] / snap.rho[k];
            const ScalarField v1x = ddx(v1, g);
            for (double v : v1x) ex.max_dv1dx = std::max(ex.max_dv1dx, std::abs(v));
            ex.max_grad_v = ex.max_dv1dx;
            for (double v : ddy(v1, g)) ex.max_grad_v = std::max(ex.max_grad_v, std::abs(v));
            if (g.dim == 2) {
                ScalarField v2(g.cell_count());
                for (std::size_t k = 0; k < v2.size(); ++k) v2[k] = snap.m2[k] / snap.rho[k];
                for (double v : ddx(v2, g)) ex.max_grad_v = std::max(ex.max_grad_v, std::abs(v));
                for (double v : ddy(v2, g)) ex.max_grad_v = std::max(ex.max_grad_v, std::abs(v));
                const ScalarField om = vorticity(snap);
                for (double v : om) ex.max_abs_omega = std::max(ex.max_abs_omega, std::abs(v));
            }
        }

        if (cfg.diagnostics.background_error) ex.l1_bg_error = l1_error_vs_background(snap, bg);

        while (!pending_snapshots.empty() &&
               snap.time >= pending_snapshots.front() - 0.5 * cfg.observe_every) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshot_t%.6f.rfan", snap.time);
            write_snapshot(snap, report.directory + "/" + name);
            if (cfg.output.snapshots)
                write_snapshot_csv(snap, report.directory + "/" +
                                             std::string(name, std::strlen(name) - 5) + ".csv");
            pending_snapshots.erase(pending_snapshots.begin());
        }

        series.push_back(std::move(row));
        extras.push_back(ex);
        diag_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - d0).count();
    };

    std::function<void(const FieldSnapshot&, const FieldSnapshot&, double)> hook;
    if (cfg.diagnostics.eikonal) {
        hook = [&](const FieldSnapshot& before, const FieldSnapshot& /*after*/, double dt) {
            ek_prev = ek;
            ek = eikonal_step(cfg.gas, before, ek, dt);
            last_dt = dt;
        };
    }

    StepStats stats;
    std::vector<RunObserver> observers{{cfg.observe_every, observer}};
    const auto run0 = std::chrono::steady_clock::now();
    FieldSnapshot final_snap = run(cfg.gas, initial, scfg, cfg.t_end, observers, hook, &stats);
    const double run_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - run0).count() -
        diag_seconds;

    // bootstrap monitors: eps0 from the initial total energy
    const double eps0 = series.empty() || series.front().E_total <= 0.0
                            ? 0.0
                            : std::sqrt(series.front().E_total);
    report.bootstrap = bootstrap_check(series, cfg.bootstrap_c0, eps0, g.dim);

    std::vector<double> times, linfs;
    for (const auto& r : series) {
        times.push_back(r.t);
        linfs.push_back(r.linf);
    }
    report.decay = decay_fit(times, linfs);

    if (cfg.diagnostics.background_error && !extras.empty())
        report.final_l1_error = extras.back().l1_bg_error;

    // ---- checks ----
    auto add_check = [&](CheckOutcome c) {
        report.all_pass = report.all_pass && c.pass;
        report.checks.push_back(std::move(c));
    };

    if (cfg.checks.energy_bound_factor && !series.empty()) {
        const double e0 = series.front().E_total;
        double emax = 0.0;
        for (const auto& r : series) emax = std::max(emax, r.E_total);
        CheckOutcome c;
        c.name = "energy_bound";
        c.value = e0 > 0.0 ? emax / e0 : (emax > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        c.threshold = *cfg.checks.energy_bound_factor;
        c.pass = c.value <= c.threshold;
        c.detail = "max E_total over run / E_total(t0)";
        add_check(std::move(c));

        CheckOutcome b;
        b.name = "bootstrap";
        b.pass = report.bootstrap.pass;
        b.value = report.bootstrap.pass ? 0.0 : report.bootstrap.which;
        b.threshold = 0.0;
        b.detail = report.bootstrap.pass
                       ? "BA1-BA3 hold at every observation"
                       : "first violation BA" + std::to_string(report.bootstrap.which) + " at t=" +
                             std::to_string(report.bootstrap.time);
        add_check(std::move(b));
    }

    if (cfg.checks.decay && !series.empty()) {
        const DecayCheckSpec& d = *cfg.checks.decay;
        CheckOutcome c;
        c.name = "linf_decay";
        const double l0 = series.front().linf;
        c.value = l0 > 0.0 ? series.back().linf / l0 : 0.0;
        c.threshold = d.max_final_ratio;
        c.pass = c.value <= c.threshold;
        c.detail = "linf(t_end)/linf(t0)";
        add_check(std::move(c));

        CheckOutcome a;
        a.name = "decay_exponent";
        a.value = report.decay.alpha;
        a.threshold = d.alpha_max;
        a.pass = report.decay.valid && report.decay.alpha >= d.alpha_min &&
                 report.decay.alpha <= d.alpha_max;
        a.detail = "fitted alpha in [" + std::to_string(d.alpha_min) + ", " +
                   std::to_string(d.alpha_max) + "]";
        add_check(std::move(a));
    }

    if (cfg.checks.chi_mu_factor && !series.empty()) {
        const double r0 = series.front().chi_mu_ratio;
        double rmax = 0.0;
        for (const auto& r : series) rmax = std::max(rmax, r.chi_mu_ratio);
        CheckOutcome c;
        c.name = "chi_mu_bounded";
        c.threshold = *cfg.checks.chi_mu_factor;
        c.value = r0 > 0.0 ? rmax / r0 : (rmax > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        c.pass = c.value <= c.threshold;
        c.detail = "max over run of chi/mu ratio vs its t0 value";
        add_check(std::move(c));
    }

    if (cfg.checks.gradient_growth_factor && !extras.empty()) {
        const double g0 = extras.front().max_dv1dx;
        double gmax = 0.0;
        for (const auto& e : extras)
            if (e.t <= t_star) gmax = std::max(gmax, e.max_dv1dx);
        CheckOutcome c;
        c.name = "gradient_growth";
        c.threshold = *cfg.checks.gradient_growth_factor;
        c.value = g0 > 0.0 ? gmax / g0 : 0.0;
        c.pass = c.value >= c.threshold;
        c.detail = "max |d1 v1| before t* = " + std::to_string(t_star) + " vs t0";
        add_check(std::move(c));
    }

    if (cfg.checks.vorticity_envelope_slack && !extras.empty()) {
        // discrete Gronwall envelope from the measured gradient history
        const double slack = *cfg.checks.vorticity_envelope_slack;
        const double w0 = extras.front().max_abs_omega;
        double integral = 0.0;
        double worst_excess = 0.0;
        for (std::size_t i = 1; i < extras.size(); ++i) {
            integral += 0.5 * (extras[i].max_grad_v + extras[i - 1].max_grad_v) *
                        (extras[i].t - extras[i - 1].t);
            const double env = w0 * std::exp(integral);
            if (env > 0.0)
                worst_excess = std::max(worst_excess, extras[i].max_abs_omega / env);
        }
        CheckOutcome c;
        c.name = "vorticity_envelope";
        c.threshold = slack;
        c.value = worst_excess;
        c.pass = worst_excess <= slack;
        c.detail = "max over run of |omega|_inf over its Gronwall envelope";
        add_check(std::move(c));
    }

    if (cfg.checks.lapse_match) {
        const LapseCheckSpec& l = *cfg.checks.lapse_match;
        double worst = -1.0;
        for (const auto& e : extras) {
            if (e.t < l.t_min - 1e-9 || e.t > l.t_max + 1e-9) continue;
            worst = std::max(worst, e.lapse_rel_dev);
        }
        CheckOutcome c;
        c.name = "lapse_match";
        c.threshold = l.rel_tol;
        c.value = worst;
        c.pass = worst >= 0.0 && worst <= l.rel_tol;
        c.detail = "max relative deviation of measured mu from the closed-form lapse, t in [" +
                   std::to_string(l.t_min) + ", " + std::to_string(l.t_max) + "]";
        add_check(std::move(c));
    }

    // ---- outputs ----
    report.series = series;
    report.series_csv = report.directory + "/series.csv";
    write_energy_csv(series, ws.max_order, report.series_csv);

    {
        std::FILE* f = std::fopen((report.directory + "/metrics.csv").c_str(), "w");
        if (f) {
            std::fputs("t,max_dv1dx,max_grad_v,max_abs_omega,l1_bg_error,eikonal_residual,"
                       "measured_mu_min,measured_mu_max,lapse_rel_dev,boundary_share\n",
                       f);
            for (std::size_t i = 0; i < extras.size(); ++i) {
                const auto& e = extras[i];
                std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                             e.t, e.max_dv1dx, e.max_grad_v, e.max_abs_omega, e.l1_bg_error,
                             e.eikonal_residual, e.measured_mu_min, e.measured_mu_max,
                             e.lapse_rel_dev, series[i].boundary_share);
            }
            std::fclose(f);
        }
    }

    if (cfg.output.plots && series.size() >= 2) {
        std::vector<double> ts, es, ls;
        for (const auto& r : series) {
            ts.push_back(r.t);
            es.push_back(r.E_total);
            ls.push_back(r.linf);
        }
        write_svg_line_plot(report.directory + "/energy_total.svg", "E_total(t)", ts, es, true);
        write_svg_line_plot(report.directory + "/linf.svg", "linf of perturbation", ts, ls, true);
    }

    const double wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    {
        json t;
        t["wall_s"] = wall_seconds;
        t["solver_s"] = run_seconds;
        t["diagnostics_s"] = diag_seconds;
        std::ofstream os(report.directory + "/timings.json");
        os << t.dump(2) << "\n";
    }

    json summary;
    summary["config"] = config_to_json(cfg);
    json dfit;
    dfit["valid"] = report.decay.valid;
    dfit["alpha"] = report.decay.alpha;
    dfit["residual"] = report.decay.residual;
    dfit["t_first"] = report.decay.t_first;
    dfit["t_last"] = report.decay.t_last;
    dfit["samples"] = report.decay.samples;
    summary["decay_fit"] = dfit;
    json boot;
    boot["pass"] = report.bootstrap.pass;
    boot["C0"] = cfg.bootstrap_c0;
    boot["eps0"] = eps0;
    if (!report.bootstrap.pass) {
        boot["first_violation_index"] = report.bootstrap.first_violation;
        boot["which"] = report.bootstrap.which;
        boot["time"] = report.bootstrap.time;
    }
    summary["bootstrap"] = boot;
    json checks = json::array();
    for (const auto& c : report.checks) {
        json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        cj["value"] = c.value;
        cj["threshold"] = c.threshold;
        cj["detail"] = c.detail;
        checks.push_back(cj);
    }
    summary["checks"] = checks;
    summary["timings"] = {{"file", "timings.json"}};
    json metrics;
    metrics["observations"] = series.size();
    metrics["floor_hits"] = stats.floor_hits;
    metrics["t_star"] = std::isfinite(t_star) ? json(t_star) : json();
    metrics["final_l1_error"] = report.final_l1_error;
    metrics["series_csv"] = "series.csv";
    metrics["metrics_csv"] = "metrics.csv";
    if (!series.empty()) {
        metrics["E_total_t0"] = series.front().E_total;
        metrics["E_total_end"] = series.back().E_total;
        metrics["linf_t0"] = series.front().linf;
        metrics["linf_end"] = series.back().linf;
    }
    summary["metrics"] = metrics;
    report.summary = summary;
    {
        std::ofstream os(report.directory + "/summary.json");
        os << summary.dump(2) << "\n";
    }

    (void)final_snap;
    return report;
}

ScenarioReport run_scenario_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot read scenario file: " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("scenario parse error in " + path + ": " + e.what());
    }

    ScenarioReport rep;
    if (!j.contains("runs")) {
        // plain single-config file
        ExperimentConfig cfg = config_from_json(j);
        rep.name = cfg.name;
        rep.runs.push_back(run_experiment(cfg));
        rep.all_pass = rep.runs.back().all_pass;
        return rep;
    }

    reject_unknown_keys(j, "", {"name", "runs", "scenario_checks"});
    rep.name = get_or<std::string>(j, "name", "scenario");
    for (const json& rj : j.at("runs")) rep.runs.push_back(run_experiment(config_from_json(rj)));
    for (const auto& r : rep.runs) rep.all_pass = rep.all_pass && r.all_pass;

    if (j.contains("scenario_checks")) {
        const json& sc = j.at("scenario_checks");
        reject_unknown_keys(sc, "scenario_checks", {"convergence"});
        if (sc.contains("convergence")) {
            const json& cv = sc.at("convergence");
            reject_unknown_keys(cv, "scenario_checks.convergence",
                                {"min_ratio", "max_final_l1"});
            const double min_ratio = get_or<double>(cv, "min_ratio", 1.5);
            const double max_final_l1 = get_or<double>(cv, "max_final_l1", 5e-3);
            std::vector<double> errs;
            for (const auto& r : rep.runs) errs.push_back(r.final_l1_error);
            bool ratios_ok = errs.size() >= 2;
            double worst_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 1; i < errs.size(); ++i) {
                if (!(errs[i] > 0.0) || !(errs[i - 1] > 0.0)) ratios_ok = false;
                const double ratio = errs[i - 1] / errs[i];
                worst_ratio = std::min(worst_ratio, ratio);
                if (ratio < min_ratio) ratios_ok = false;
            }
            CheckOutcome c;
            c.name = "convergence_ratio";
            c.value = worst_ratio;
            c.threshold = min_ratio;
            c.pass = ratios_ok;
            c.detail = "smallest L1 reduction factor per refinement";
            rep.all_pass = rep.all_pass && c.pass;
            rep.checks.push_back(c);

            CheckOutcome a;
            a.name = "final_l1";
            a.value = errs.empty() ? -1.0 : errs.back();
            a.threshold = max_final_l1;
            a.pass = !errs.empty() && errs.back() >= 0.0 && errs.back() <= max_final_l1;
            a.detail = "L1 error at the finest resolution";
            rep.all_pass = rep.all_pass && a.pass;
            rep.checks.push_back(a);
        }
    }
    return rep;
}

} // namespace rarefan
