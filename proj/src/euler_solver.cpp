#include "rarefan/euler_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rarefan {

void SolverConfig::validate() const {
    if (!(cfl > 0.0) || cfl > 1.0) throw std::invalid_argument("SolverConfig: cfl must be in (0,1]");
    if (!(rho_floor > 0.0)) throw std::invalid_argument("SolverConfig: rho_floor must be > 0");
    if (boundary == BoundaryPolicy::Background && !boundary_sampler)
        throw std::invalid_argument("SolverConfig: Background boundary needs a sampler");
}

std::array<double, 3> physical_flux(const GasModel& gas, const ConservedState& c,
                                    const std::array<double, 2>& axis) {
    const PrimitiveState s = primitive_from_conserved(c);
    const double un = s.vdot(axis);
    const double p = pressure(gas, s.rho);
    return {c.rho * un, c.m[0] * un + p * axis[0], c.m[1] * un + p * axis[1]};
}

namespace {

struct FaceSide {
    double rho, v1, v2, un, p, c;
};

inline FaceSide make_side(const GasModel& gas, double rho, double v1, double v2, int axis) {
    FaceSide s;
    s.rho = rho;
    s.v1 = v1;
    s.v2 = v2;
    s.un = axis == 0 ? v1 : v2;
    s.p = gas.A * std::pow(rho, gas.gamma);
    s.c = std::sqrt(gas.gamma * s.p / rho);
    return s;
}

inline void side_flux(const FaceSide& s, int axis, double f[3]) {
    f[0] = s.rho * s.un;
    f[1] = s.rho * s.v1 * s.un + (axis == 0 ? s.p : 0.0);
    f[2] = s.rho * s.v2 * s.un + (axis == 1 ? s.p : 0.0);
}

inline void rusanov_kernel(const FaceSide& l, const FaceSide& r, int axis, double f[3]) {
    double fl[3], fr[3];
    side_flux(l, axis, fl);
    side_flux(r, axis, fr);
    const double a = std::max(std::abs(l.un) + l.c, std::abs(r.un) + r.c);
    const double ul[3] = {l.rho, l.rho * l.v1, l.rho * l.v2};
    const double ur[3] = {r.rho, r.rho * r.v1, r.rho * r.v2};
    for (int k = 0; k < 3; ++k) f[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * a * (ur[k] - ul[k]);
}

inline void hll_kernel(const FaceSide& l, const FaceSide& r, int axis, double f[3]) {
    const double sl = std::min(l.un - l.c, r.un - r.c);
    const double sr = std::max(l.un + l.c, r.un + r.c);
    double fl[3], fr[3];
    side_flux(l, axis, fl);
    side_flux(r, axis, fr);
    if (sl >= 0.0) {
        for (int k = 0; k < 3; ++k) f[k] = fl[k];
        return;
    }
    if (sr <= 0.0) {
        for (int k = 0; k < 3; ++k) f[k] = fr[k];
        return;
    }
    const double ul[3] = {l.rho, l.rho * l.v1, l.rho * l.v2};
    const double ur[3] = {r.rho, r.rho * r.v1, r.rho * r.v2};
    const double inv = 1.0 / (sr - sl);
    for (int k = 0; k < 3; ++k)
        f[k] = (sr * fl[k] - sl * fr[k] + sl * sr * (ur[k] - ul[k])) * inv;
}

inline double minmod2(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

inline double limited_slope(SlopeLimiter lim, double fm, double f0, double fp) {
    switch (lim) {
        case SlopeLimiter::FirstOrder: return 0.0;
        case SlopeLimiter::Minmod: return minmod2(f0 - fm, fp - f0);
        case SlopeLimiter::Central: return 0.5 * (fp - fm);
    }
    return 0.0;
}

} // namespace

std::array<double, 3> numerical_flux(const GasModel& gas, const PrimitiveState& left,
                                     const PrimitiveState& right,
                                     const std::array<double, 2>& axis, FluxScheme scheme) {
    validate_unit_axis(axis);
    validate_state(left);
    validate_state(right);
    // The sweep kernels are axis-aligned; a reversed axis uses the exact
    // conservation identity F(l, r, -n) = -F(r, l, n).
    int a;
    double sign;
    if (std::abs(axis[1]) < 1e-14) {
        a = 0;
        sign = axis[0];
    } else if (std::abs(axis[0]) < 1e-14) {
        a = 1;
        sign = axis[1];
    } else {
        throw std::invalid_argument("numerical_flux: axis must be grid-aligned");
    }
    if (sign < 0.0) {
        const std::array<double, 2> pos{-axis[0], -axis[1]};
        const auto f = numerical_flux(gas, right, left, pos, scheme);
        return {-f[0], -f[1], -f[2]};
    }
    const FaceSide L = make_side(gas, left.rho, left.v[0], left.v[1], a);
    const FaceSide R = make_side(gas, right.rho, right.v[0], right.v[1], a);
    double f[3];
    if (scheme == FluxScheme::Rusanov)
        rusanov_kernel(L, R, a, f);
    else
        hll_kernel(L, R, a, f);
    return {f[0], f[1], f[2]};
}

double cfl_dt(const GasModel& gas, const FieldSnapshot& snap, double cfl) {
    snap.check_finite();
    const Grid& g = snap.grid;
    const double cs = std::sqrt(gas.A * gas.gamma);
    const double ex = 0.5 * (gas.gamma - 1.0);
    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < g.cell_count(); ++k) {
        const double rho = snap.rho[k];
        if (!(rho > 0.0)) throw std::runtime_error("cfl_dt: nonpositive density");
        const double c = cs * std::pow(rho, ex);
        dt = std::min(dt, g.dx / (std::abs(snap.m1[k] / rho) + c));
        if (g.dim == 2) dt = std::min(dt, g.dy / (std::abs(snap.m2[k] / rho) + c));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::runtime_error("cfl_dt: degenerate time step");
    return cfl * dt;
}

namespace {

// Forward-Euler residual update out = in + dt L(in), ghost states at time t.
void stage_update(const GasModel& gas, const FieldSnapshot& in, double t, double dt,
                  const SolverConfig& cfg, FieldSnapshot& out, StepStats* stats) {
    const Grid& g = in.grid;
    const int nx = g.nx;
    const int ny = g.ny;
    const bool two_d = g.dim == 2;
    const bool use_hll = cfg.flux == FluxScheme::Hll;

    out = in;
    out.time = in.time + dt;

    auto fill_ghost_x = [&](int i, int j, double& rho, double& v1, double& v2) {
        if (cfg.boundary == BoundaryPolicy::Periodic) {
            const std::size_t k = g.index((i % nx + nx) % nx, j);
            rho = in.rho[k];
            v1 = in.m1[k] / rho;
            v2 = two_d ? in.m2[k] / rho : 0.0;
        } else {
            const PrimitiveState s = cfg.boundary_sampler(t, g.xc(i), g.yc(j));
            rho = s.rho;
            v1 = s.v[0];
            v2 = s.v[1];
        }
    };

    const double lam_x = dt / g.dx;
    std::vector<double> lr(nx + 4), lv1(nx + 4), lv2(nx + 4);
    std::vector<double> sr(nx + 4), sv1(nx + 4), sv2(nx + 4); // limited slopes per cell
    double f[3];

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = g.index(i, j);
            const double rho = in.rho[k];
            lr[i + 2] = rho;
            lv1[i + 2] = in.m1[k] / rho;
            lv2[i + 2] = two_d ? in.m2[k] / rho : 0.0;
        }
        for (int i : {-2, -1, nx, nx + 1})
            fill_ghost_x(i, j, lr[i + 2], lv1[i + 2], lv2[i + 2]);
        for (int c = -1; c <= nx; ++c) {
            sr[c + 2] = limited_slope(cfg.limiter, lr[c + 1], lr[c + 2], lr[c + 3]);
            sv1[c + 2] = limited_slope(cfg.limiter, lv1[c + 1], lv1[c + 2], lv1[c + 3]);
            if (two_d) sv2[c + 2] = limited_slope(cfg.limiter, lv2[c + 1], lv2[c + 2], lv2[c + 3]);
        }
        double fprev[3] = {0, 0, 0};
        for (int i = 0; i <= nx; ++i) {
            const int cl = i - 1 + 2, cr = i + 2;
            const double rho_l = std::max(lr[cl] + 0.5 * sr[cl], cfg.rho_floor);
            const double rho_r = std::max(lr[cr] - 0.5 * sr[cr], cfg.rho_floor);
            const FaceSide L = make_side(gas, rho_l, lv1[cl] + 0.5 * sv1[cl],
                                         two_d ? lv2[cl] + 0.5 * sv2[cl] : 0.0, 0);
            const FaceSide R = make_side(gas, rho_r, lv1[cr] - 0.5 * sv1[cr],
                                         two_d ? lv2[cr] - 0.5 * sv2[cr] : 0.0, 0);
            if (use_hll)
                hll_kernel(L, R, 0, f);
            else
                rusanov_kernel(L, R, 0, f);
            if (i > 0) {
                const std::size_t k = g.index(i - 1, j);
                out.rho[k] -= lam_x * (f[0] - fprev[0]);
                out.m1[k] -= lam_x * (f[1] - fprev[1]);
                if (two_d) out.m2[k] -= lam_x * (f[2] - fprev[2]);
            }
            fprev[0] = f[0];
            fprev[1] = f[1];
            fprev[2] = f[2];
        }
    }

    if (two_d) {
        const double lam_y = dt / g.dy;
        std::vector<double> cr_(ny + 4), cv1(ny + 4), cv2(ny + 4);
        std::vector<double> tr(ny + 4), tv1(ny + 4), tv2(ny + 4);
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < ny; ++j) {
                const std::size_t k = g.index(i, j);
                const double rho = in.rho[k];
                cr_[j + 2] = rho;
                cv1[j + 2] = in.m1[k] / rho;
                cv2[j + 2] = in.m2[k] / rho;
            }
            for (int j : {-2, -1, ny, ny + 1}) {
                const std::size_t k = g.index(i, (j % ny + ny) % ny); // transverse periodic
                const double rho = in.rho[k];
                cr_[j + 2] = rho;
                cv1[j + 2] = in.m1[k] / rho;
                cv2[j + 2] = in.m2[k] / rho;
            }
            for (int c = -1; c <= ny; ++c) {
                tr[c + 2] = limited_slope(cfg.limiter, cr_[c + 1], cr_[c + 2], cr_[c + 3]);
                tv1[c + 2] = limited_slope(cfg.limiter, cv1[c + 1], cv1[c + 2], cv1[c + 3]);
                tv2[c + 2] = limited_slope(cfg.limiter, cv2[c + 1], cv2[c + 2], cv2[c + 3]);
            }
            double fprev[3] = {0, 0, 0};
            for (int j = 0; j <= ny; ++j) {
                const int cl = j - 1 + 2, cr2 = j + 2;
                const double rho_l = std::max(cr_[cl] + 0.5 * tr[cl], cfg.rho_floor);
                const double rho_r = std::max(cr_[cr2] - 0.5 * tr[cr2], cfg.rho_floor);
                const FaceSide L =
                    make_side(gas, rho_l, cv1[cl] + 0.5 * tv1[cl], cv2[cl] + 0.5 * tv2[cl], 1);
                const FaceSide R =
                    make_side(gas, rho_r, cv1[cr2] - 0.5 * tv1[cr2], cv2[cr2] - 0.5 * tv2[cr2], 1);
                if (use_hll)
                    hll_kernel(L, R, 1, f);
                else
                    rusanov_kernel(L, R, 1, f);
                if (j > 0) {
                    const std::size_t k = g.index(i, j - 1);
                    out.rho[k] -= lam_y * (f[0] - fprev[0]);
                    out.m1[k] -= lam_y * (f[1] - fprev[1]);
                    out.m2[k] -= lam_y * (f[2] - fprev[2]);
                }
                fprev[0] = f[0];
                fprev[1] = f[1];
                fprev[2] = f[2];
            }
        }
    }

    long hits = 0;
    for (std::size_t k = 0; k < g.cell_count(); ++k) {
        if (out.rho[k] < cfg.rho_floor) {
            out.rho[k] = cfg.rho_floor;
            ++hits;
        }
    }
    if (stats) stats->floor_hits += hits;
}

} // namespace

FieldSnapshot step(const GasModel& gas, const FieldSnapshot& snap, double dt,
                   const SolverConfig& cfg, StepStats* stats) {
    cfg.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
    const double dt_max = cfl_dt(gas, snap, 1.0);
    if (dt > dt_max * (1.0 + 1e-12))
        throw std::invalid_argument("step: dt " + std::to_string(dt) + " exceeds cfl_dt " +
                                    std::to_string(dt_max));
    // Heun / SSP-RK2
    FieldSnapshot u1, u2;
    stage_update(gas, snap, snap.time, dt, cfg, u1, stats);
    stage_update(gas, u1, snap.time + dt, dt, cfg, u2, stats);
    FieldSnapshot out = snap;
    out.time = snap.time + dt;
    const bool two_d = snap.grid.dim == 2;
    for (std::size_t k = 0; k < snap.grid.cell_count(); ++k) {
        out.rho[k] = 0.5 * (snap.rho[k] + u2.rho[k]);
        out.m1[k] = 0.5 * (snap.m1[k] + u2.m1[k]);
        if (two_d) out.m2[k] = 0.5 * (snap.m2[k] + u2.m2[k]);
    }
    long hits = 0;
    for (std::size_t k = 0; k < out.rho.size(); ++k)
        if (out.rho[k] < cfg.rho_floor) {
            out.rho[k] = cfg.rho_floor;
            ++hits;
        }
    if (stats) stats->floor_hits += hits;
    return out;
}

FieldSnapshot run(const GasModel& gas, const FieldSnapshot& initial, const SolverConfig& cfg,
                  double t_end, const std::vector<RunObserver>& observers,
                  const std::function<void(const FieldSnapshot&, const FieldSnapshot&, double)>&
                      step_hook,
                  StepStats* stats) {
    cfg.validate();
    if (!(t_end >= initial.time)) throw std::invalid_argument("run: t_end must be >= start time");
    initial.check_finite();

    auto observe = [&](const FieldSnapshot& s) {
        for (const auto& ob : observers)
            if (ob.fn) ob.fn(s);
    };

    double interval = 0.0;
    for (const auto& ob : observers)
        if (ob.interval > 0.0)
            interval = interval == 0.0 ? ob.interval : std::min(interval, ob.interval);

    FieldSnapshot snap = initial;
    observe(snap);
    if (t_end == initial.time) return snap;

    const double t0 = initial.time;
    long n_obs = 1;
    const double eps = 1e-12;
    while (snap.time < t_end - eps) {
        double dt = cfl_dt(gas, snap, cfg.cfl);
        double t_next = t_end;
        if (interval > 0.0) t_next = std::min(t_end, t0 + n_obs * interval);
        if (snap.time + dt > t_next - eps) dt = t_next - snap.time;
        FieldSnapshot next = step(gas, snap, dt, cfg, stats);
        next.check_finite();
        if (step_hook) step_hook(snap, next, dt);
        snap = std::move(next);
        if (interval > 0.0 && snap.time >= t0 + n_obs * interval - eps) {
            if (snap.time < t_end - eps) observe(snap);
            ++n_obs;
        }
    }
    snap.time = t_end; // drop accumulated round-off in the final stamp
    observe(snap);
    return snap;
}

std::array<double, 3> conserved_totals(const FieldSnapshot& snap) {
    std::array<double, 3> tot{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < snap.grid.cell_count(); ++k) {
        tot[0] += snap.rho[k];
        tot[1] += snap.m1[k];
        if (snap.grid.dim == 2) tot[2] += snap.m2[k];
    }
    const double vol = snap.grid.cell_volume();
    return {tot[0] * vol, tot[1] * vol, tot[2] * vol};
}

double l1_error_vs_background(const FieldSnapshot& snap, const BackgroundWave& bg) {
    const Grid& g = snap.grid;
    double err = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        PrimitiveState s = bg.sample(g.xc(i) / snap.time);
        s.dim = g.dim;
        const ConservedState c = conserved_from_primitive(s);
        for (int j = 0; j < g.ny; ++j) {
            const std::size_t k = g.index(i, j);
            err += std::abs(snap.rho[k] - c.rho) + std::abs(snap.m1[k] - c.m[0]);
            if (g.dim == 2) err += std::abs(snap.m2[k] - c.m[1]);
        }
    }
    return err * g.cell_volume();
}

} // namespace rarefan
