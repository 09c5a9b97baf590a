#include "rarefan/background_wave.hpp"

#include "rarefan/field_snapshot.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace rarefan;

namespace {

BackgroundWave canonical_fan() {
    // rho=1, v=0, A=1/gamma => c=1, lambda1(U-)=-1; right edge at -0.5
    return BackgroundWave::connect_right_state(GasModel::normalized(), PrimitiveState(1.0, 0.0),
                                               -0.5);
}

} // namespace

TEST_CASE("connect_right_state: canonical fan") {
    const BackgroundWave bg = canonical_fan();
    CHECK(bg.xi_minus() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(bg.xi_plus() == doctest::Approx(-0.5).epsilon(1e-13));
    // closed form: c+ = 11/12, rho+ = (11/12)^5, v+ = 5/12
    CHECK(bg.right().rho == doctest::Approx(std::pow(11.0 / 12.0, 5)).epsilon(1e-12));
    CHECK(bg.right().rho == doctest::Approx(0.6472).epsilon(1e-4));
    CHECK(bg.right().v[0] == doctest::Approx(5.0 / 12.0).epsilon(1e-12));
    // the 2-invariant v1 + 2c/(gamma-1) matches on both sides
    const double K_left = bg.left().v[0] + 5.0 * sound_speed(bg.gas(), bg.left().rho);
    const double K_right = bg.right().v[0] + 5.0 * sound_speed(bg.gas(), bg.right().rho);
    CHECK(K_left == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(K_right == doctest::Approx(K_left).epsilon(1e-12));
}

TEST_CASE("connect_right_state: degenerate and invalid targets") {
    const GasModel g = GasModel::normalized();
    const BackgroundWave zero =
        BackgroundWave::connect_right_state(g, PrimitiveState(1.0, 0.0), -1.0);
    CHECK(zero.fan_width() == doctest::Approx(0.0));
    CHECK(zero.right().rho == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS((BackgroundWave::connect_right_state(g, PrimitiveState(1.0, 0.0), -1.5)),
                    std::invalid_argument);
    // vacuum boundary sits at xi = K = 5
    CHECK_THROWS_AS((BackgroundWave::connect_right_state(g, PrimitiveState(1.0, 0.0), 5.0)),
                    std::domain_error);
}

TEST_CASE("sample: fan interior and constant regions") {
    const BackgroundWave bg = canonical_fan();
    CHECK(bg.sample(bg.xi_minus() - 1.0).rho == bg.left().rho);
    CHECK(bg.sample(bg.xi_plus() + 1.0).rho == bg.right().rho);
    const PrimitiveState mid = bg.sample(-0.75);
    CHECK(mid.v[0] == doctest::Approx(5.0 / 24.0).epsilon(1e-12));
    const double c_mid = sound_speed(bg.gas(), mid.rho);
    CHECK(c_mid == doctest::Approx(23.0 / 24.0).epsilon(1e-12));
    CHECK(mid.rho == doctest::Approx(std::pow(23.0 / 24.0, 5)).epsilon(1e-12));
    CHECK(char_speeds(bg.gas(), mid, {1.0, 0.0})[0] == doctest::Approx(-0.75).epsilon(1e-13));
}

TEST_CASE("sample: lambda1 is the identity on the fan") {
    const BackgroundWave bg = canonical_fan();
    for (int i = 0; i <= 1000; ++i) {
        const double xi = bg.xi_minus() + bg.fan_width() * i / 1000.0;
        const double l1 = char_speeds(bg.gas(), bg.sample(xi), {1.0, 0.0})[0];
        CHECK(std::abs(l1 - xi) <= 1e-12);
    }
}

TEST_CASE("sample: continuity and monotonicity across the fan") {
    const BackgroundWave bg = canonical_fan();
    const double h = 1e-11;
    CHECK(std::abs(bg.sample(bg.xi_minus() - h).rho - bg.sample(bg.xi_minus() + h).rho) < 1e-10);
    CHECK(std::abs(bg.sample(bg.xi_plus() - h).rho - bg.sample(bg.xi_plus() + h).rho) < 1e-10);
    double prev_rho = bg.sample(bg.xi_minus()).rho;
    double prev_v = bg.sample(bg.xi_minus()).v[0];
    for (int i = 1; i <= 200; ++i) {
        const double xi = bg.xi_minus() + bg.fan_width() * i / 200.0;
        const PrimitiveState s = bg.sample(xi);
        CHECK(s.rho < prev_rho);
        CHECK(s.v[0] > prev_v);
        prev_rho = s.rho;
        prev_v = s.v[0];
    }
}

TEST_CASE("lapse: closed form and continuation") {
    const BackgroundWave bg = canonical_fan();
    CHECK(bg.lapse(2.0, -0.75) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(bg.lapse(1.0, bg.xi_minus()) == 0.0);
    CHECK(bg.lapse(17.3, bg.xi_minus()) == 0.0);
    CHECK(bg.lapse(4.0, -0.5) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(bg.lapse(4.0, 3.0) == doctest::Approx(0.25).epsilon(1e-14)); // frozen right value
    CHECK(bg.lapse(2.0, -1.5) == 0.0);
    CHECK_THROWS_AS((bg.lapse(0.0, -0.75)), std::domain_error);
    CHECK_THROWS_AS((bg.lapse(-1.0, -0.75)), std::domain_error);
}

TEST_CASE("lapse: pointwise bound mu <= C/(1+t) with C = 1 + 1/t0") {
    const BackgroundWave bg = canonical_fan();
    const double t0 = 1.0;
    const double C = 1.0 + 1.0 / t0;
    for (double t = t0; t <= 20.0; t += 0.37) {
        for (int i = 0; i <= 50; ++i) {
            const double xi = -1.2 + 1.0 * i / 50.0;
            const double mu = bg.lapse(t, xi);
            CHECK(mu >= 0.0);
            CHECK(mu <= C / (1.0 + t) + 1e-14);
        }
    }
}

TEST_CASE("evaluate_on_grid: pointwise sampling and planar symmetry") {
    const BackgroundWave bg = canonical_fan();
    const Grid g1 = Grid::make_1d(64, -2.5, 0.5);
    const FieldSnapshot s1 = bg.evaluate_on_grid(g1, 2.0);
    for (int i = 0; i < g1.nx; ++i) {
        const PrimitiveState ref = bg.sample(g1.xc(i) / 2.0);
        CHECK(s1.rho[i] == ref.rho);
        CHECK(s1.m1[i] == ref.rho * ref.v[0]);
    }

    const Grid g2 = Grid::make_2d(32, 8, -2.5, 0.5, 0.0, 1.0);
    const FieldSnapshot s2 = bg.evaluate_on_grid(g2, 2.0);
    for (int i = 0; i < g2.nx; ++i)
        for (int j = 1; j < g2.ny; ++j) {
            CHECK(s2.rho[g2.index(i, j)] == s2.rho[g2.index(i, 0)]);
            CHECK(s2.m1[g2.index(i, j)] == s2.m1[g2.index(i, 0)]);
        }

    CHECK_THROWS_AS((bg.evaluate_on_grid(g1, 0.0)), std::domain_error);
}

TEST_CASE("evaluate_on_grid: exact self-similarity under rescaling") {
    const BackgroundWave bg = canonical_fan();
    const double s = 3.0;
    const Grid g = Grid::make_1d(40, -2.0, 0.0);
    Grid gs = g;
    gs.x0 *= s;
    gs.dx *= s;
    const FieldSnapshot a = bg.evaluate_on_grid(g, 1.7);
    const FieldSnapshot b = bg.evaluate_on_grid(gs, 1.7 * s);
    for (std::size_t k = 0; k < a.rho.size(); ++k) {
        CHECK(a.rho[k] == doctest::Approx(b.rho[k]).epsilon(1e-14));
        CHECK(a.m1[k] == doctest::Approx(b.m1[k]).epsilon(1e-14));
    }
}

TEST_CASE("fan invariant diagnostics: which invariant is constant") {
    // The classical 1-fan holds v1 + 2c/(gamma-1) fixed; the other invariant
    // varies. Both are exposed for inspection.
    const BackgroundWave bg = canonical_fan();
    const auto at_left = bg.invariants_at(bg.xi_minus());
    const auto at_mid = bg.invariants_at(-0.75);
    const auto at_right = bg.invariants_at(bg.xi_plus());
    CHECK(at_left[1] == doctest::Approx(at_mid[1]).epsilon(1e-12));
    CHECK(at_mid[1] == doctest::Approx(at_right[1]).epsilon(1e-12));
    CHECK(at_mid[0] > at_left[0]);
    CHECK(at_right[0] > at_mid[0]);
}
