#include "rarefan/energy_diagnostics.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

using namespace rarefan;

namespace {

PerturbationField constant_pert(const Grid& g, double value) {
    PerturbationField p;
    p.grid = g;
    p.ncomp = 1 + g.dim;
    for (int c = 0; c < p.ncomp; ++c) p.comp[c].assign(g.cell_count(), 0.0);
    p.comp[0].assign(g.cell_count(), value);
    return p;
}

} // namespace

TEST_CASE("weight_exponent: a_k = 2 + k/2") {
    WeightSchedule ws{2.0, 0.5, 6};
    CHECK(ws.exponent(0) == 2.0);
    CHECK(ws.exponent(2) == 3.0);
    CHECK(ws.exponent(6) == 5.0);
    CHECK_THROWS_AS(ws.exponent(7), std::invalid_argument);
    CHECK_THROWS_AS(ws.exponent(-1), std::invalid_argument);
    for (int k = 0; k <= 6; ++k) CHECK(ws.exponent(k) > 1.0);
}

TEST_CASE("weighted_energy: zero field, constant field, negative mu") {
    const Grid g = Grid::make_2d(10, 10, 0.0, 1.0, 0.0, 1.0);
    const WeightSchedule ws{2.0, 0.5, 3};
    ScalarField mu(g.cell_count(), 1.0);

    const PerturbationField zero = constant_pert(g, 0.0);
    for (int k = 0; k <= 3; ++k) CHECK(weighted_energy(ws, zero, mu, k) == 0.0);

    // constant (0.01, 0, 0) on the unit square: E_k = 1e-4 for every k
    const PerturbationField c = constant_pert(g, 0.01);
    for (int k = 0; k <= 3; ++k)
        CHECK(weighted_energy(ws, c, mu, k) == doctest::Approx(1e-4).epsilon(1e-10));

    ScalarField bad = mu;
    bad[7] = -0.5;
    CHECK_THROWS_AS((weighted_energy(ws, c, bad, 0)), std::domain_error);
}

TEST_CASE("weighted_energy: sin^2 oracle at 0.5 with second-order convergence") {
    const WeightSchedule ws{2.0, 0.5, 0};
    double prev_err = -1.0;
    for (int nx : {32, 64, 128}) {
        const Grid g = Grid::make_1d(nx, 0.0, 1.0);
        PerturbationField p;
        p.grid = g;
        p.ncomp = 2;
        p.comp[0].resize(g.cell_count());
        p.comp[1].assign(g.cell_count(), 0.0);
        for (int i = 0; i < nx; ++i) p.comp[0][i] = std::sin(2.0 * M_PI * g.xc(i));
        ScalarField mu(g.cell_count(), 1.0);
        const double e = weighted_energy(ws, p, mu, 0);
        const double err = std::abs(e - 0.5);
        CHECK(err <= std::max(1e-12, 40.0 / (nx * nx)));
        if (prev_err > 1e-12) CHECK(err <= prev_err);
        prev_err = err;
    }
}

TEST_CASE("weighted_energy: E_k vanishes iff the field vanishes where mu > 0") {
    const Grid g = Grid::make_1d(16, 0.0, 1.0);
    const WeightSchedule ws{2.0, 0.5, 1};
    PerturbationField p = constant_pert(g, 0.0);
    ScalarField mu(g.cell_count(), 0.0);
    for (int i = 8; i < 16; ++i) mu[i] = 1.0;
    p.comp[0][2] = 5.0; // supported where mu == 0
    CHECK(weighted_energy(ws, p, mu, 0) == 0.0);
    p.comp[0][12] = 1e-3;
    CHECK(weighted_energy(ws, p, mu, 0) > 0.0);
}

TEST_CASE("total_energy: exact fixed-order sum") {
    CHECK(total_energy({0.0, 0.0}) == 0.0);
    CHECK(total_energy({1e-4, 1e-4}) == doctest::Approx(2e-4).epsilon(1e-15));
    const std::vector<double> parts{0.1, 0.2, 0.4};
    CHECK(total_energy(parts) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK_THROWS_AS(total_energy({}), std::invalid_argument);
}

TEST_CASE("sonic_flux_proxy: band behavior and single-cell value") {
    const Grid g = Grid::make_1d(100, 0.0, 1.0); // cell volume 1e-2... adjust below
    const WeightSchedule ws{2.0, 0.5, 0};
    PerturbationField zero = constant_pert(g, 0.0);
    ScalarField mu(g.cell_count(), 1.0);
    CHECK(sonic_flux_proxy(ws, zero, mu, 0, 0.05) == 0.0);

    PerturbationField p = constant_pert(g, 1.0);
    CHECK(sonic_flux_proxy(ws, p, mu, 0, 0.5) == 0.0); // empty band: mu >= band

    // single cell inside the band: mu^{a0-1} |U|^2 vol = 0.01 * 1e-4 * 1e-4
    const Grid g2 = Grid::make_2d(100, 100, 0.0, 1.0, 0.0, 1.0); // vol 1e-4
    PerturbationField q = constant_pert(g2, 0.0);
    ScalarField mu2(g2.cell_count(), 1.0);
    mu2[555] = 0.01;
    q.comp[0][555] = 0.01; // |U|^2 = 1e-4
    CHECK(sonic_flux_proxy(ws, q, mu2, 0, 0.05) == doctest::Approx(1e-10).epsilon(1e-12));
    CHECK_THROWS_AS((sonic_flux_proxy(ws, q, mu2, 0, 0.0)), std::invalid_argument);
}

TEST_CASE("linf_norms: analytic extrema and homogeneity") {
    const Grid g = Grid::make_1d(512, 0.0, 1.0);
    PerturbationField p;
    p.grid = g;
    p.ncomp = 2;
    p.comp[0].resize(g.cell_count());
    p.comp[1].assign(g.cell_count(), 0.0);
    for (int i = 0; i < g.nx; ++i) p.comp[0][i] = std::sin(2.0 * M_PI * g.xc(i));
    const auto n = linf_norms(p);
    CHECK(n[0] == doctest::Approx(1.0).epsilon(0.01));
    CHECK(n[1] == doctest::Approx(2.0 * M_PI).epsilon(0.01));

    for (double& v : p.comp[0]) v *= 3.0;
    const auto n3 = linf_norms(p);
    CHECK(n3[0] == doctest::Approx(3.0 * n[0]).epsilon(1e-12));
    CHECK(n3[1] == doctest::Approx(3.0 * n[1]).epsilon(1e-12));

    PerturbationField zero = constant_pert(g, 0.0);
    const auto nz = linf_norms(zero);
    CHECK(nz[0] == 0.0);
    CHECK(nz[1] == 0.0);
}

TEST_CASE("decay_fit: exact power law, constant series, noisy recovery") {
    std::vector<double> t, y;
    for (int i = 0; i <= 20; ++i) {
        t.push_back(1.0 + 0.45 * i);
        y.push_back(std::pow(1.0 + t.back(), -0.5));
    }
    const DecayFit f = decay_fit(t, y);
    CHECK(f.valid);
    CHECK(f.alpha == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.residual < 1e-12);

    std::vector<double> c(t.size(), 0.7);
    const DecayFit fc = decay_fit(t, c);
    CHECK(fc.valid);
    CHECK(std::abs(fc.alpha) < 1e-12);

    // y = 2 (1+t)^{-1} with 1% multiplicative noise
    std::mt19937_64 rng(20260809);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    std::vector<double> yn;
    for (double ti : t) yn.push_back(2.0 * std::pow(1.0 + ti, -1.0) * (1.0 + noise(rng)));
    const DecayFit fn = decay_fit(t, yn);
    CHECK(fn.valid);
    CHECK(fn.alpha >= 0.9);
    CHECK(fn.alpha <= 1.1);
}

TEST_CASE("decay_fit: window constraints and nonpositive samples") {
    // too few samples
    CHECK_FALSE(decay_fit({1, 2, 3, 4}, {1, 1, 1, 1}).valid);
    // span below a factor 2 in (1+t)
    CHECK_FALSE(decay_fit({1.0, 1.1, 1.2, 1.3, 1.4, 1.5},
                          {1.0, 0.9, 0.8, 0.7, 0.6, 0.5})
                    .valid);
    // nonpositive samples are dropped, leaving too few
    CHECK_FALSE(decay_fit({1, 2, 3, 4, 5, 6}, {1, 0.0, -1, 0.5, 0.0, -2}).valid);
    // planted exponents recovered within 0.02 at 1% noise
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    for (double alpha : {0.25, 0.5, 1.0, 1.5}) {
        std::vector<double> t, y;
        for (int i = 0; i <= 36; ++i) {
            t.push_back(1.0 + 0.25 * i);
            y.push_back(std::pow(1.0 + t.back(), -alpha) * (1.0 + noise(rng)));
        }
        const DecayFit f = decay_fit(t, y);
        CHECK(f.valid);
        CHECK(std::abs(f.alpha - alpha) <= 0.02);
    }
}

TEST_CASE("bootstrap_check: thresholds, boundary ties, first violation") {
    auto mk = [](double t, double E, double linf, double grad) {
        EnergyReport r;
        r.t = t;
        r.E_total = E;
        r.linf = linf;
        r.linf_grad = grad;
        return r;
    };
    const double C0 = 10.0, eps0 = 1e-3;
    const double bound = 2.0 * C0 * eps0;

    std::vector<EnergyReport> zero{mk(1, 0, 0, 0), mk(2, 0, 0, 0)};
    CHECK(bootstrap_check(zero, C0, 0.0, 2).pass);

    std::vector<EnergyReport> ba1{mk(1, bound * 1.5, 0, 0)};
    const BootstrapResult r1 = bootstrap_check(ba1, C0, eps0, 2);
    CHECK_FALSE(r1.pass);
    CHECK(r1.which == 1);
    CHECK(r1.time == 1.0);

    // ties pass (non-strict comparisons)
    std::vector<EnergyReport> tie{
        mk(1, bound, bound * std::pow(2.0, -0.5), bound * std::pow(2.0, -1.5))};
    CHECK(bootstrap_check(tie, C0, eps0, 2).pass);

    // BA2 exponent is (n-1)/2: trivial for n = 1
    std::vector<EnergyReport> flat{mk(1, 0, bound * 0.99, 0), mk(9, 0, bound * 0.99, 0)};
    CHECK(bootstrap_check(flat, C0, eps0, 1).pass);
    std::vector<EnergyReport> flat2{mk(9, 0, bound * 0.99, 0)};
    CHECK_FALSE(bootstrap_check(flat2, C0, eps0, 2).pass);
    CHECK(bootstrap_check(flat2, C0, eps0, 2).which == 2);

    CHECK_THROWS_AS((bootstrap_check(flat, C0, eps0, 3)), std::invalid_argument);
}
