#include "rarefan/gas_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rarefan {

GasModel::GasModel(double gamma_, double A_) : gamma(gamma_), A(A_) {
    if (!(gamma > 1.0))
        throw std::invalid_argument("GasModel: gamma must be > 1, got " + std::to_string(gamma_));
    if (!(A > 0.0))
        throw std::invalid_argument("GasModel: A must be > 0, got " + std::to_string(A_));
}

GasModel GasModel::normalized(double gamma_) { return GasModel(gamma_, 1.0 / gamma_); }

PrimitiveState::PrimitiveState(double rho_, double v1) : rho(rho_), v{v1, 0.0}, dim(1) {}
PrimitiveState::PrimitiveState(double rho_, double v1, double v2) : rho(rho_), v{v1, v2}, dim(2) {}

void validate_state(const PrimitiveState& s) {
    if (!(s.rho > 0.0) || !std::isfinite(s.rho))
        throw std::domain_error("PrimitiveState: rho must be strictly positive, got " +
                                std::to_string(s.rho));
    if (s.dim != 1 && s.dim != 2)
        throw std::invalid_argument("PrimitiveState: dim must be 1 or 2");
    for (int i = 0; i < s.dim; ++i)
        if (!std::isfinite(s.v[i])) throw std::domain_error("PrimitiveState: non-finite velocity");
}

void validate_unit_axis(const std::array<double, 2>& axis) {
    const double n2 = axis[0] * axis[0] + axis[1] * axis[1];
    if (std::abs(n2 - 1.0) > 1e-12)
        throw std::invalid_argument("axis must be a unit vector, |axis|^2 = " + std::to_string(n2));
}

double pressure(const GasModel& g, double rho) {
    if (rho < 0.0 || !std::isfinite(rho))
        throw std::domain_error("pressure: rho must be >= 0, got " + std::to_string(rho));
    return g.A * std::pow(rho, g.gamma);
}

double sound_speed(const GasModel& g, double rho) {
    if (rho < 0.0 || !std::isfinite(rho))
        throw std::domain_error("sound_speed: rho must be >= 0, got " + std::to_string(rho));
    if (rho == 0.0) return 0.0;
    return std::sqrt(g.A * g.gamma * std::pow(rho, g.gamma - 1.0));
}

double density_from_sound_speed(const GasModel& g, double c) {
    if (c < 0.0) throw std::domain_error("density_from_sound_speed: c must be >= 0");
    if (c == 0.0) return 0.0;
    return std::pow(c * c / (g.A * g.gamma), 1.0 / (g.gamma - 1.0));
}

std::array<double, 2> riemann_invariants(const GasModel& g, const PrimitiveState& s,
                                         const std::array<double, 2>& axis) {
    validate_state(s);
    validate_unit_axis(axis);
    const double c = sound_speed(g, s.rho);
    const double un = s.vdot(axis);
    const double q = 2.0 * c / (g.gamma - 1.0);
    return {un - q, un + q};
}

std::array<double, 2> char_speeds(const GasModel& g, const PrimitiveState& s,
                                  const std::array<double, 2>& axis) {
    validate_state(s);
    validate_unit_axis(axis);
    const double c = sound_speed(g, s.rho);
    const double un = s.vdot(axis);
    return {un - c, un + c};
}

} // namespace rarefan
