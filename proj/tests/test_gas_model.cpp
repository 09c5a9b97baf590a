#include "rarefan/gas_model.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

using namespace rarefan;

namespace {
const std::array<double, 2> e1{1.0, 0.0};
}

TEST_CASE("pressure: polytropic law") {
    CHECK(pressure(GasModel(1.4, 1.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pressure(GasModel(1.4, 1.0), 0.0) == 0.0);
    // A rho^gamma evaluated independently through exp/log
    const double expected = 0.7142857 * std::exp(1.4 * std::log(2.0));
    CHECK(pressure(GasModel(1.4, 0.7142857), 2.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(pressure(GasModel(1.4, 0.7142857), 2.0) == doctest::Approx(1.8850).epsilon(1e-4));
    CHECK_THROWS_AS((pressure(GasModel(1.4, 1.0), -1.0)), std::domain_error);
}

TEST_CASE("sound_speed: values and vacuum") {
    CHECK(sound_speed(GasModel::normalized(), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sound_speed(GasModel(1.4, 1.0), 1.0) ==
          doctest::Approx(1.1832159566199232).epsilon(1e-12));
    CHECK(sound_speed(GasModel(1.4, 1.0), 0.0) == 0.0);
    CHECK(sound_speed(GasModel(1.7, 0.3), 0.0) == 0.0);
    CHECK_THROWS_AS((sound_speed(GasModel(1.4, 1.0), -0.1)), std::domain_error);
}

TEST_CASE("sound_speed squared equals dp/drho") {
    const GasModel gases[] = {GasModel::normalized(), GasModel(1.4, 1.0), GasModel(2.0, 0.5),
                              GasModel(1.1, 3.0)};
    for (const auto& g : gases) {
        for (double rho = 0.1; rho <= 10.0; rho += 0.37) {
            const double h = 1e-6 * rho;
            const double fd = (pressure(g, rho + h) - pressure(g, rho - h)) / (2.0 * h);
            const double c2 = sound_speed(g, rho) * sound_speed(g, rho);
            CHECK(c2 == doctest::Approx(fd).epsilon(1e-8));
        }
    }
}

TEST_CASE("riemann_invariants: values and inversion") {
    const GasModel g = GasModel::normalized();
    const auto rest = riemann_invariants(g, PrimitiveState(1.0, 0.0), e1);
    CHECK(rest[0] == doctest::Approx(-5.0).epsilon(1e-14));
    CHECK(rest[1] == doctest::Approx(5.0).epsilon(1e-14));
    const auto moving = riemann_invariants(g, PrimitiveState(1.0, 1.0, 0.0), e1);
    CHECK(moving[0] == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(moving[1] == doctest::Approx(6.0).epsilon(1e-14));

    std::mt19937_64 rng(20260809);
    std::uniform_real_distribution<double> rho_d(0.1, 5.0), v_d(-2.0, 2.0);
    for (int it = 0; it < 200; ++it) {
        const PrimitiveState s(rho_d(rng), v_d(rng), v_d(rng));
        const auto w = riemann_invariants(g, s, e1);
        // odd symmetry in v.axis
        PrimitiveState neg = s;
        neg.v[0] = -neg.v[0];
        neg.v[1] = -neg.v[1];
        const auto wn = riemann_invariants(g, neg, e1);
        CHECK(w[1] == doctest::Approx(-wn[0]).epsilon(1e-13));
        // inversion: recover v.axis and c
        const double vn = 0.5 * (w[1] + w[0]);
        const double c = 0.25 * (g.gamma - 1.0) * (w[1] - w[0]);
        CHECK(vn == doctest::Approx(s.v[0]).epsilon(1e-12));
        CHECK(c == doctest::Approx(sound_speed(g, s.rho)).epsilon(1e-12));
    }
}

TEST_CASE("char_speeds: ordering and values") {
    const GasModel g = GasModel::normalized();
    const auto rest = char_speeds(g, PrimitiveState(1.0, 0.0), e1);
    CHECK(rest[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(rest[1] == doctest::Approx(1.0).epsilon(1e-14));

    // fan-interior state at xi = -0.5 re-derived from the fan formulas
    const double v = 2.0 / 2.4 * (1.0 - 0.5);
    const double c = v + 0.5;
    const PrimitiveState inside(density_from_sound_speed(g, c), v);
    const auto fan = char_speeds(g, inside, e1);
    CHECK(fan[0] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fan[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> rho_d(1e-3, 8.0), v_d(-3.0, 3.0);
    for (int it = 0; it < 500; ++it) {
        const PrimitiveState s(rho_d(rng), v_d(rng));
        const auto l = char_speeds(g, s, e1);
        CHECK(l[0] < l[1]);
        CHECK(l[1] - l[0] == doctest::Approx(2.0 * sound_speed(g, s.rho)).epsilon(1e-13));
    }

    CHECK_THROWS_AS((char_speeds(g, PrimitiveState(1.0, 0.0), {0.5, 0.0})), std::invalid_argument);
}

TEST_CASE("model invariants rejected") {
    CHECK_THROWS_AS((GasModel(1.0, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS((GasModel(1.4, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS((validate_state(PrimitiveState(0.0, 0.0))), std::domain_error);
    CHECK_THROWS_AS((validate_state(PrimitiveState(-1.0, 0.0))), std::domain_error);
}
