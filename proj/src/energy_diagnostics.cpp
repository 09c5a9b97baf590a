#include "rarefan/energy_diagnostics.hpp"

#include "rarefan/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace rarefan {

double WeightSchedule::exponent(int k) const {
    if (k < 0 || k > max_order)
        throw std::invalid_argument("WeightSchedule: order " + std::to_string(k) +
                                    " outside [0, " + std::to_string(max_order) + "]");
    return a0 + k * delta;
}

PerturbationField perturbation_from(const FieldSnapshot& snap, const BackgroundWave& bg) {
    const Grid& g = snap.grid;
    PerturbationField p;
    p.grid = g;
    p.time = snap.time;
    p.ncomp = 1 + g.dim;
    for (int c = 0; c < p.ncomp; ++c) p.comp[c].assign(g.cell_count(), 0.0);
    for (int i = 0; i < g.nx; ++i) {
        const PrimitiveState ref = bg.sample(g.xc(i) / snap.time);
        for (int j = 0; j < g.ny; ++j) {
            const std::size_t k = g.index(i, j);
            const double rho = snap.rho[k];
            p.comp[0][k] = rho - ref.rho;
            p.comp[1][k] = snap.m1[k] / rho - ref.v[0];
            if (g.dim == 2) p.comp[2][k] = snap.m2[k] / rho - ref.v[1];
        }
    }
    return p;
}

std::size_t DerivativeTable::slot(int ax, int ay) const {
    // triangular layout over ax + ay <= s
    const int o = ax + ay;
    return static_cast<std::size_t>(o) * (o + 1) / 2 + ay;
}

DerivativeTable::DerivativeTable(const ScalarField& f, const Grid& g, int max_order) : s_(max_order) {
    table_.resize(static_cast<std::size_t>(s_ + 1) * (s_ + 2) / 2);
    table_[slot(0, 0)] = f;
    for (int o = 1; o <= s_; ++o) {
        for (int ay = 0; ay <= o; ++ay) {
            const int ax = o - ay;
            if (ay == 0)
                table_[slot(ax, ay)] = ddx(table_[slot(ax - 1, 0)], g);
            else
                table_[slot(ax, ay)] = ddy(table_[slot(ax, ay - 1)], g);
        }
    }
}

const ScalarField& DerivativeTable::at(int ax, int ay) const {
    if (ax < 0 || ay < 0 || ax + ay > s_) throw std::invalid_argument("DerivativeTable: bad index");
    return table_[slot(ax, ay)];
}

double weighted_energy(const WeightSchedule& ws, const PerturbationField& pert,
                       const ScalarField& mu, int k, double* boundary_share) {
    const Grid& g = pert.grid;
    if (mu.size() != g.cell_count())
        throw std::invalid_argument("weighted_energy: mu grid mismatch");
    for (double m : mu)
        if (m < 0.0) throw std::domain_error("weighted_energy: negative lapse weight");
    const double ak = ws.exponent(k);
    const double vol = g.cell_volume();

    ScalarField w(g.cell_count());
    for (std::size_t c = 0; c < w.size(); ++c) w[c] = std::pow(mu[c], ak);

    auto is_boundary = [&](std::size_t idx) {
        const int i = static_cast<int>(idx % g.nx);
        const int j = static_cast<int>(idx / g.nx);
        return i == 0 || i == g.nx - 1 || (g.dim == 2 && (j == 0 || j == g.ny - 1));
    };

    double total = 0.0, boundary = 0.0;
    for (int c = 0; c < pert.ncomp; ++c) {
        DerivativeTable table(pert.comp[c], g, k);
        for (int o = 0; o <= k; ++o) {
            for (int ay = 0; ay <= (g.dim == 2 ? o : 0); ++ay) {
                const int ax = o - ay;
                const ScalarField& d = table.at(ax, ay);
                for (std::size_t idx = 0; idx < d.size(); ++idx) {
                    const double contrib = w[idx] * d[idx] * d[idx] * vol;
                    total += contrib;
                    if (boundary_share && is_boundary(idx)) boundary += contrib;
                }
            }
        }
    }
    if (boundary_share) *boundary_share = boundary;
    return total;
}

double total_energy(const std::vector<double>& orders) {
    if (orders.empty()) throw std::invalid_argument("total_energy: no orders present");
    double sum = 0.0;
    for (double e : orders) sum += e;
    return sum;
}

double sonic_flux_proxy(const WeightSchedule& ws, const PerturbationField& pert,
                        const ScalarField& mu, int k, double band) {
    if (!(band > 0.0)) throw std::invalid_argument("sonic_flux_proxy: band must be > 0");
    const Grid& g = pert.grid;
    const double ak = ws.exponent(k);
    const double vol = g.cell_volume();
    double f = 0.0;
    for (std::size_t idx = 0; idx < g.cell_count(); ++idx) {
        if (mu[idx] >= band) continue;
        double u2 = 0.0;
        for (int c = 0; c < pert.ncomp; ++c) u2 += pert.comp[c][idx] * pert.comp[c][idx];
        f += std::pow(mu[idx], ak - 1.0) * u2 * vol;
    }
    return f;
}

std::array<double, 2> linf_norms(const PerturbationField& pert) {
    double a = 0.0, b = 0.0;
    for (int c = 0; c < pert.ncomp; ++c) {
        for (double v : pert.comp[c]) {
            if (!std::isfinite(v)) throw std::runtime_error("linf_norms: non-finite perturbation");
            a = std::max(a, std::abs(v));
        }
        const ScalarField dx = ddx(pert.comp[c], pert.grid);
        for (double v : dx) b = std::max(b, std::abs(v));
        if (pert.grid.dim == 2) {
            const ScalarField dy = ddy(pert.comp[c], pert.grid);
            for (double v : dy) b = std::max(b, std::abs(v));
        }
    }
    return {a, b};
}

DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size()) throw std::invalid_argument("decay_fit: length mismatch");
    std::vector<double> lx, ly;
    DecayFit fit;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(values[i] > 0.0)) continue; // nonpositive samples excluded
        lx.push_back(std::log1p(times[i]));
        ly.push_back(std::log(values[i]));
        if (fit.samples == 0) fit.t_first = times[i];
        fit.t_last = times[i];
        ++fit.samples;
    }
    if (fit.samples < 5) return fit;
    if (!((1.0 + fit.t_last) >= 2.0 * (1.0 + fit.t_first))) return fit;
    const double n = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0) return fit;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (intercept + slope * lx[i]);
        rss += r * r;
    }
    fit.valid = true;
    fit.alpha = -slope;
    fit.residual = std::sqrt(rss / n);
    return fit;
}

BootstrapResult bootstrapcheck_impl(std::vector<EnergyReport>& series, double C0, double eps0,
                                    int n, double delta) {
    BootstrapResult res;
    const double bound = 2.0 * C0 * eps0;
    const double p2 = 0.5 * (n - 1);
    const double p3 = 1.0 + delta;
    for (std::size_t i = 0; i < series.size(); ++i) {
        EnergyReport& r = series[i];
        r.ba1 = r.E_total <= bound;
        r.ba2 = r.linf <= bound * std::pow(1.0 + r.t, -p2);
        r.ba3 = r.linf_grad <= bound * std::pow(1.0 + r.t, -p3);
        if (res.pass && !(r.ba1 && r.ba2 && r.ba3)) {
            res.pass = false;
            res.first_violation = static_cast<int>(i);
            res.which = !r.ba1 ? 1 : (!r.ba2 ? 2 : 3);
            res.time = r.t;
        }
    }
    return res;
}

BootstrapResult bootstrap_check(std::vector<EnergyReport>& series, double C0, double eps0, int n,
                                double delta) {
    if (n != 1 && n != 2) throw std::invalid_argument("bootstrap_check: n must be 1 or 2");
    return bootstrapcheck_impl(series, C0, eps0, n, delta);
}

void write_energy_csv(const std::vector<EnergyReport>& series, int max_order,
                      const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fputs("t", f);
    for (int k = 0; k <= max_order; ++k) std::fprintf(f, ",E%d", k);
    std::fputs(",E_total,linf,linf_grad,flux,chi_mu_ratio,ba1,ba2,ba3\n", f);
    for (const auto& r : series) {
        std::fprintf(f, "%.17g", r.t);
        for (int k = 0; k <= max_order; ++k)
            std::fprintf(f, ",%.17g", k < static_cast<int>(r.E.size()) ? r.E[k] : 0.0);
        std::fprintf(f, ",%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%d\n", r.E_total, r.linf, r.linf_grad,
                     r.flux, r.chi_mu_ratio, r.ba1 ? 1 : 0, r.ba2 ? 1 : 0, r.ba3 ? 1 : 0);
    }
    std::fclose(f);
}

} // namespace rarefan
