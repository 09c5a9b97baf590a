#ifndef RAREFAN_GAS_MODEL_HPP
#define RAREFAN_GAS_MODEL_HPP

#include <array>
#include <cstddef>

namespace rarefan {

// Barotropic polytropic gas, p = A rho^gamma.
struct GasModel {
    double gamma = 1.4;  // adiabatic exponent, > 1
    double A = 1.0 / 1.4; // pressure scale, > 0

    GasModel() = default;
    GasModel(double gamma_, double A_);

    // gamma = 1.4, A = 1/gamma, so c(rho=1) = 1.
    static GasModel normalized(double gamma_ = 1.4);
};

// Density and velocity at a point; dim is 1 or 2.
struct PrimitiveState {
    double rho = 1.0;
    std::array<double, 2> v{0.0, 0.0};
    int dim = 1;

    PrimitiveState() = default;
    PrimitiveState(double rho_, double v1);
    PrimitiveState(double rho_, double v1, double v2);

    double vdot(const std::array<double, 2>& axis) const {
        return v[0] * axis[0] + v[1] * axis[1];
    }
};

constexpr double kRhoFloor = 1e-10;

double pressure(const GasModel& g, double rho);
double sound_speed(const GasModel& g, double rho);

// Density with sound speed c, inverting c^2 = A gamma rho^(gamma-1).
double density_from_sound_speed(const GasModel& g, double c);

// w_pm = v.axis +- 2c/(gamma-1); returns {w_minus, w_plus}.
std::array<double, 2> riemann_invariants(const GasModel& g, const PrimitiveState& s,
                                         const std::array<double, 2>& axis);

// lambda_1 = v.axis - c, lambda_2 = v.axis + c.
std::array<double, 2> char_speeds(const GasModel& g, const PrimitiveState& s,
                                  const std::array<double, 2>& axis);

void validate_state(const PrimitiveState& s);
void validate_unit_axis(const std::array<double, 2>& axis);

} // namespace rarefan

#endif
