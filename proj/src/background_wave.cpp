#include "rarefan/background_wave.hpp"

#include "rarefan/field_snapshot.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rarefan {

BackgroundWave::BackgroundWave(const GasModel& gas, const PrimitiveState& um,
                               const PrimitiveState& up)
    : gas_(gas), u_minus_(um), u_plus_(up) {
    xi_minus_ = char_speeds(gas_, u_minus_, {1.0, 0.0})[0];
    xi_plus_ = char_speeds(gas_, u_plus_, {1.0, 0.0})[0];
}

BackgroundWave BackgroundWave::connect_right_state(const GasModel& gas,
                                                   const PrimitiveState& u_minus,
                                                   double xi_plus_target) {
    validate_state(u_minus);
    const double c_minus = sound_speed(gas, u_minus.rho);
    const double xi_minus = u_minus.v[0] - c_minus;
    if (xi_plus_target < xi_minus)
        throw std::invalid_argument("connect_right_state: target " +
                                    std::to_string(xi_plus_target) + " is below lambda1(U_minus) " +
                                    std::to_string(xi_minus) + "; not a rarefaction");
    // The 2-invariant v1 + 2c/(gamma-1) is constant along the 1-curve, so
    // lambda1 = K - c (gamma+1)/(gamma-1) pins c at the target speed.
    const double K = u_minus.v[0] + 2.0 * c_minus / (gas.gamma - 1.0);
    const double c_plus = (K - xi_plus_target) * (gas.gamma - 1.0) / (gas.gamma + 1.0);
    if (!(c_plus > 0.0))
        throw std::domain_error("connect_right_state: target " + std::to_string(xi_plus_target) +
                                " is at or beyond the vacuum boundary " + std::to_string(K));
    const double rho_plus = density_from_sound_speed(gas, c_plus);
    if (!(rho_plus > kRhoFloor))
        throw std::domain_error("connect_right_state: right state density underflows");
    PrimitiveState u_plus = u_minus;
    u_plus.rho = rho_plus;
    u_plus.v[0] = K - 2.0 * c_plus / (gas.gamma - 1.0);
    return BackgroundWave(gas, u_minus, u_plus);
}

PrimitiveState BackgroundWave::sample(double xi) const {
    if (!std::isfinite(xi)) throw std::domain_error("sample: xi must be finite");
    if (xi <= xi_minus_) return u_minus_;
    if (xi >= xi_plus_) return u_plus_;
    // Fan interior: v1 = 2/(gamma+1) (c_- + (gamma-1)/2 v1_- + xi), c = v1 - xi.
    const double g = gas_.gamma;
    const double c_minus = sound_speed(gas_, u_minus_.rho);
    PrimitiveState s = u_minus_;
    s.v[0] = 2.0 / (g + 1.0) * (c_minus + 0.5 * (g - 1.0) * u_minus_.v[0] + xi);
    const double c = s.v[0] - xi;
    s.rho = density_from_sound_speed(gas_, c);
    return s;
}

double BackgroundWave::lapse(double t, double xi) const {
    if (!(t > 0.0)) throw std::domain_error("lapse: t must be > 0, got " + std::to_string(t));
    if (xi <= xi_minus_) return 0.0;
    if (xi >= xi_plus_ || fan_width() <= 0.0) return 1.0 / t;
    return (xi - xi_minus_) / fan_width() / t;
}

std::array<double, 2> BackgroundWave::invariants_at(double xi) const {
    return riemann_invariants(gas_, sample(xi), {1.0, 0.0});
}

FieldSnapshot BackgroundWave::evaluate_on_grid(const Grid& grid, double t) const {
    if (!(t > 0.0))
        throw std::domain_error("evaluate_on_grid: t must be > 0, got " + std::to_string(t));
    grid.validate();
    FieldSnapshot snap = FieldSnapshot::zeros(grid, t);
    for (int i = 0; i < grid.nx; ++i) {
        PrimitiveState s = sample(grid.xc(i) / t);
        s.dim = grid.dim;
        const ConservedState c = conserved_from_primitive(s);
        for (int j = 0; j < grid.ny; ++j) snap.set(grid.index(i, j), c);
    }
    return snap;
}

} // namespace rarefan
