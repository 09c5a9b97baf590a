#include "rarefan/acoustic_geometry.hpp"

#include "rarefan/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rarefan {

ScalarField ddx(const ScalarField& f, const Grid& g) {
    ScalarField d(f.size());
    const double inv2 = 0.5 / g.dx;
    const double inv = 1.0 / g.dx;
    for (int j = 0; j < g.ny; ++j) {
        const std::size_t row = g.index(0, j);
        if (g.nx >= 3) {
            d[row] = (-1.5 * f[row] + 2.0 * f[row + 1] - 0.5 * f[row + 2]) * inv;
            d[row + g.nx - 1] =
                (1.5 * f[row + g.nx - 1] - 2.0 * f[row + g.nx - 2] + 0.5 * f[row + g.nx - 3]) * inv;
        } else {
            d[row] = (f[row + 1] - f[row]) * inv;
            d[row + g.nx - 1] = (f[row + g.nx - 1] - f[row + g.nx - 2]) * inv;
        }
        for (int i = 1; i < g.nx - 1; ++i) d[row + i] = (f[row + i + 1] - f[row + i - 1]) * inv2;
    }
    return d;
}

ScalarField ddy(const ScalarField& f, const Grid& g) {
    ScalarField d(f.size(), 0.0);
    if (g.dim == 1) return d;
    const double inv2 = 0.5 / g.dy;
    const double inv = 1.0 / g.dy;
    const int nx = g.nx;
    for (int i = 0; i < nx; ++i) {
        d[g.index(i, 0)] =
            (-1.5 * f[g.index(i, 0)] + 2.0 * f[g.index(i, 1)] - 0.5 * f[g.index(i, 2)]) * inv;
        d[g.index(i, g.ny - 1)] = (1.5 * f[g.index(i, g.ny - 1)] - 2.0 * f[g.index(i, g.ny - 2)] +
                                   0.5 * f[g.index(i, g.ny - 3)]) *
                                  inv;
    }
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 0; i < nx; ++i)
            d[g.index(i, j)] = (f[g.index(i, j + 1)] - f[g.index(i, j - 1)]) * inv2;
    return d;
}

double AcousticalMetric::dot(const std::array<double, 3>& V, const std::array<double, 3>& W) const {
    double s = 0.0;
    for (int a = 0; a < size(); ++a)
        for (int b = 0; b < size(); ++b) s += g[a][b] * V[a] * W[b];
    return s;
}

AcousticalMetric metric_at(const GasModel& gas, const PrimitiveState& s) {
    validate_state(s);
    const double c = sound_speed(gas, s.rho);
    if (!(c > 0.0)) throw std::domain_error("metric_at: vanishing sound speed");
    const int n = s.dim;
    AcousticalMetric m;
    m.dim = n;
    double v2 = 0.0;
    for (int i = 0; i < n; ++i) v2 += s.v[i] * s.v[i];
    m.g[0][0] = -c * c + v2;
    for (int i = 0; i < n; ++i) {
        m.g[0][i + 1] = -s.v[i];
        m.g[i + 1][0] = -s.v[i];
        for (int j = 0; j < n; ++j) m.g[i + 1][j + 1] = i == j ? 1.0 : 0.0;
    }
    // Exact inverse: (1/c^2) [[-1, -v], [-v, c^2 I - v v]].
    const double ic2 = 1.0 / (c * c);
    m.inv[0][0] = -ic2;
    for (int i = 0; i < n; ++i) {
        m.inv[0][i + 1] = -s.v[i] * ic2;
        m.inv[i + 1][0] = -s.v[i] * ic2;
        for (int j = 0; j < n; ++j)
            m.inv[i + 1][j + 1] = (i == j ? 1.0 : 0.0) - s.v[i] * s.v[j] * ic2;
    }
    return m;
}

NullFrame null_frame_at(const GasModel& gas, const PrimitiveState& s,
                        const std::array<double, 2>& normal) {
    validate_state(s);
    validate_unit_axis(normal);
    const double c = sound_speed(gas, s.rho);
    if (!(c > 0.0)) throw std::domain_error("null_frame_at: vanishing sound speed");
    NullFrame f;
    f.dim = s.dim;
    f.L = {1.0, s.v[0] - c * normal[0], s.dim == 2 ? s.v[1] - c * normal[1] : 0.0};
    const double ic2 = 1.0 / (c * c);
    f.Lbar = {ic2, (s.v[0] + c * normal[0]) * ic2,
              s.dim == 2 ? (s.v[1] + c * normal[1]) * ic2 : 0.0};
    if (s.dim == 2) f.X = {0.0, -normal[1], normal[0]};
    return f;
}

EikonalField eikonal_init(const Grid& grid, double t0) {
    grid.validate();
    EikonalField ek;
    ek.grid = grid;
    ek.time = t0;
    ek.u.resize(grid.cell_count());
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) ek.u[grid.index(i, j)] = grid.xc(i);
    return ek;
}

namespace {

// u with linear extrapolation beyond x faces, periodic wrap in y.
inline double u_at(const ScalarField& u, const Grid& g, int i, int j) {
    if (g.dim == 2) j = (j % g.ny + g.ny) % g.ny;
    if (i < 0) {
        const std::size_t a = g.index(0, j), b = g.index(1, j);
        return u[a] + (u[a] - u[b]) * (-i);
    }
    if (i >= g.nx) {
        const std::size_t a = g.index(g.nx - 1, j), b = g.index(g.nx - 2, j);
        return u[a] + (u[a] - u[b]) * (i - g.nx + 1);
    }
    return u[g.index(i, j)];
}

void eikonal_substep(const ScalarField& v1, const ScalarField& v2, const ScalarField& cs,
                     const ScalarField& u, ScalarField& out, const Grid& g, double dt) {
    const double idx = 1.0 / g.dx;
    const double idy = 1.0 / g.dy;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            const double u0 = u[k];
            const double dxm = (u0 - u_at(u, g, i - 1, j)) * idx;
            const double dxp = (u_at(u, g, i + 1, j) - u0) * idx;
            double dym = 0.0, dyp = 0.0;
            if (g.dim == 2) {
                dym = (u0 - u_at(u, g, i, j - 1)) * idy;
                dyp = (u_at(u, g, i, j + 1) - u0) * idy;
            }
            // advection, component-wise upwind
            double adv = v1[k] * (v1[k] > 0.0 ? dxm : dxp);
            if (g.dim == 2) adv += v2[k] * (v2[k] > 0.0 ? dym : dyp);
            // -c |grad u|: Osher-Sethian selection for negative normal speed
            const double gx = std::max(dxp, 0.0), gx2 = std::min(dxm, 0.0);
            double a = gx * gx + gx2 * gx2;
            if (g.dim == 2) {
                const double gy = std::max(dyp, 0.0), gy2 = std::min(dym, 0.0);
                a += gy * gy + gy2 * gy2;
            }
            out[k] = u0 - dt * (adv - cs[k] * std::sqrt(a));
        }
    }
}

} // namespace

EikonalField eikonal_step(const GasModel& gas, const FieldSnapshot& fluid, const EikonalField& ek,
                          double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("eikonal_step: dt must be > 0");
    const Grid& g = ek.grid;
    if (fluid.grid.cell_count() != g.cell_count())
        throw std::invalid_argument("eikonal_step: grid mismatch with fluid field");
    const std::size_t n = g.cell_count();
    ScalarField v1(n), v2(n, 0.0), cs(n);
    const double c0 = std::sqrt(gas.A * gas.gamma);
    const double ex = 0.5 * (gas.gamma - 1.0);
    double rate = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double rho = fluid.rho[k];
        v1[k] = fluid.m1[k] / rho;
        if (g.dim == 2) v2[k] = fluid.m2[k] / rho;
        cs[k] = c0 * std::pow(rho, ex);
        double r = (std::abs(v1[k]) + cs[k]) / g.dx;
        if (g.dim == 2) r += (std::abs(v2[k]) + cs[k]) / g.dy;
        rate = std::max(rate, r);
    }
    const int nsub = std::max(1, static_cast<int>(std::ceil(dt * rate / 0.9)));
    const double h = dt / nsub;
    EikonalField next = ek;
    ScalarField tmp(next.u.size());
    for (int m = 0; m < nsub; ++m) {
        eikonal_substep(v1, v2, cs, next.u, tmp, g, h);
        next.u.swap(tmp);
    }
    next.time = ek.time + dt;
    for (double v : next.u)
        if (!std::isfinite(v))
            throw std::runtime_error("eikonal_step: non-finite u at t=" + std::to_string(next.time));
    return next;
}

LapseField lapse_from_eikonal(const GasModel& gas, const FieldSnapshot& fluid,
                              const EikonalField& ek, double g_floor) {
    const Grid& g = ek.grid;
    const ScalarField ux = ddx(ek.u, g);
    const ScalarField uy = ddy(ek.u, g);
    LapseField out;
    out.mu.assign(g.cell_count(), 0.0);
    out.valid.assign(g.cell_count(), 1);
    for (std::size_t k = 0; k < g.cell_count(); ++k) {
        const double grad = std::hypot(ux[k], uy[k]);
        if (grad < g_floor) {
            out.valid[k] = 0;
            continue;
        }
        const double c = sound_speed(gas, fluid.primitive_at(k).rho);
        out.mu[k] = 1.0 / (c * grad);
    }
    return out;
}

ScalarField tr_chi(const GasModel& gas, const FieldSnapshot& fluid, const EikonalField& ek,
                   double g_floor) {
    const Grid& g = fluid.grid;
    ScalarField chi(g.cell_count(), 0.0);
    if (g.dim == 1) return chi;
    const ScalarField ux = ddx(ek.u, g);
    const ScalarField uy = ddy(ek.u, g);
    const std::size_t n = g.cell_count();
    ScalarField w1(n), w2(n), n1(n, 0.0), n2(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const PrimitiveState s = fluid.primitive_at(k);
        const double c = sound_speed(gas, s.rho);
        const double grad = std::hypot(ux[k], uy[k]);
        if (grad >= g_floor) {
            n1[k] = ux[k] / grad;
            n2[k] = uy[k] / grad;
        }
        w1[k] = s.v[0] - c * n1[k];
        w2[k] = s.v[1] - c * n2[k];
    }
    const ScalarField w1x = ddx(w1, g), w1y = ddy(w1, g);
    const ScalarField w2x = ddx(w2, g), w2y = ddy(w2, g);
    for (std::size_t k = 0; k < n; ++k) {
        const double div = w1x[k] + w2y[k];
        const double nn = n1[k] * (n1[k] * w1x[k] + n2[k] * w2x[k]) +
                          n2[k] * (n1[k] * w1y[k] + n2[k] * w2y[k]);
        chi[k] = div - nn;
    }
    return chi;
}

ScalarField vorticity(const FieldSnapshot& fluid) {
    if (fluid.grid.dim != 2)
        throw std::invalid_argument("vorticity: requires a 2D snapshot");
    const Grid& g = fluid.grid;
    const std::size_t n = g.cell_count();
    ScalarField v1(n), v2(n);
    for (std::size_t k = 0; k < n; ++k) {
        v1[k] = fluid.m1[k] / fluid.rho[k];
        v2[k] = fluid.m2[k] / fluid.rho[k];
    }
    const ScalarField v2x = ddx(v2, g);
    const ScalarField v1y = ddy(v1, g);
    ScalarField w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = v2x[k] - v1y[k];
    return w;
}

double chi_mu_ratio(const LapseField& lapse, const ScalarField& trchi, double mu_clamp) {
    if (lapse.mu.size() != trchi.size())
        throw std::invalid_argument("chi_mu_ratio: field shape mismatch");
    double r = 0.0;
    for (std::size_t k = 0; k < trchi.size(); ++k) {
        if (!lapse.valid[k]) continue;
        r = std::max(r, std::abs(trchi[k]) / std::max(lapse.mu[k], mu_clamp));
    }
    return r;
}

GeometryDiagnostics geometry_diagnostics(const GasModel& gas, const FieldSnapshot& fluid,
                                         const EikonalField& ek, double mu_clamp) {
    GeometryDiagnostics d;
    d.lapse = lapse_from_eikonal(gas, fluid, ek);
    d.trchi = tr_chi(gas, fluid, ek);
    if (fluid.grid.dim == 2) d.omega = vorticity(fluid);
    double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
    for (std::size_t k = 0; k < d.lapse.mu.size(); ++k) {
        if (!d.lapse.valid[k]) continue;
        mn = std::min(mn, d.lapse.mu[k]);
        mx = std::max(mx, d.lapse.mu[k]);
    }
    d.min_mu = std::isfinite(mn) ? mn : 0.0;
    d.max_mu = mx;
    for (double v : d.trchi) d.max_abs_trchi = std::max(d.max_abs_trchi, std::abs(v));
    for (double v : d.omega) d.max_abs_omega = std::max(d.max_abs_omega, std::abs(v));
    d.chi_mu_ratio = chi_mu_ratio(d.lapse, d.trchi, mu_clamp);
    return d;
}

double eikonal_residual(const GasModel& gas, const FieldSnapshot& fluid, const EikonalField& before,
                        const EikonalField& after, double dt) {
    const Grid& g = fluid.grid;
    ScalarField ut(g.cell_count());
    for (std::size_t k = 0; k < ut.size(); ++k) ut[k] = (after.u[k] - before.u[k]) / dt;
    const ScalarField ux = ddx(after.u, g);
    const ScalarField uy = ddy(after.u, g);
    double worst = 0.0;
    // interior cells only; the boundary closures are lower order
    for (int j = (g.dim == 2 ? 1 : 0); j < (g.dim == 2 ? g.ny - 1 : 1); ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            const std::size_t k = g.index(i, j);
            const PrimitiveState s = fluid.primitive_at(k);
            const double c = sound_speed(gas, s.rho);
            const double adv = ut[k] + s.v[0] * ux[k] + (g.dim == 2 ? s.v[1] * uy[k] : 0.0);
            const double grad2 = ux[k] * ux[k] + uy[k] * uy[k];
            // g^{ab} d_a u d_b u = (u_t + v.grad u)^2 - c^2 |grad u|^2, up to
            // the overall -1/c^2 factor which does not move the zero
            worst = std::max(worst, std::abs(adv * adv - c * c * grad2));
        }
    }
    return worst;
}

} // namespace rarefan
