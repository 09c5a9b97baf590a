#ifndef RAREFAN_BACKGROUND_WAVE_HPP
#define RAREFAN_BACKGROUND_WAVE_HPP

#include "rarefan/gas_model.hpp"

namespace rarefan {

struct Grid;
struct FieldSnapshot;

// Exact planar 1-rarefaction wave connecting U_minus (left) to U_plus (right),
// propagating along e1. Self-similar in xi = x1/t. The fan occupies
// xi in [xi_minus, xi_plus] with xi_minus = lambda1(U_minus),
// xi_plus = lambda1(U_plus); a zero-strength (degenerate) fan has
// xi_minus == xi_plus.
class BackgroundWave {
  public:
    // Connects the right state through the 1-rarefaction curve:
    // v1 + 2c/(gamma-1) is preserved and lambda1(U_plus) = xi_plus_target.
    static BackgroundWave connect_right_state(const GasModel& gas, const PrimitiveState& u_minus,
                                              double xi_plus_target);

    const GasModel& gas() const { return gas_; }
    const PrimitiveState& left() const { return u_minus_; }
    const PrimitiveState& right() const { return u_plus_; }
    double xi_minus() const { return xi_minus_; }
    double xi_plus() const { return xi_plus_; }
    double fan_width() const { return xi_plus_ - xi_minus_; }

    // State at self-similar coordinate xi; constant outside the fan,
    // lambda1(sample(xi)) = xi inside.
    PrimitiveState sample(double xi) const;

    // Closed-form background lapse: (xi - xi_minus)/(fan width) / t inside
    // the fan, 0 ahead of the sonic line, frozen right-edge value 1/t beyond.
    double lapse(double t, double xi) const;

    // Both candidate fan invariants, for diagnostics: {v1 - 2c/(gamma-1),
    // v1 + 2c/(gamma-1)} evaluated at xi.
    std::array<double, 2> invariants_at(double xi) const;

    // Cell-centered sampling of sample(x1/t); transverse-uniform in 2D.
    FieldSnapshot evaluate_on_grid(const Grid& grid, double t) const;

  private:
    BackgroundWave(const GasModel& gas, const PrimitiveState& um, const PrimitiveState& up);

    GasModel gas_;
    PrimitiveState u_minus_;
    PrimitiveState u_plus_;
    double xi_minus_ = 0.0;
    double xi_plus_ = 0.0;
};

} // namespace rarefan

#endif
