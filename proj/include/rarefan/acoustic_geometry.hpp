#ifndef RAREFAN_ACOUSTIC_GEOMETRY_HPP
#define RAREFAN_ACOUSTIC_GEOMETRY_HPP

#include "rarefan/field_snapshot.hpp"
#include "rarefan/gas_model.hpp"
#include "rarefan/grid.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace rarefan {

// Spacetime metric of sound propagation at one point, (n+1)x(n+1) with the
// time row/column first. `inv` is the exact matrix inverse (g * inv = I).
struct AcousticalMetric {
    int dim = 1; // spatial dimension n
    std::array<std::array<double, 3>, 3> g{};
    std::array<std::array<double, 3>, 3> inv{};

    int size() const { return dim + 1; }
    // g(V, W) for spacetime vectors with size() components
    double dot(const std::array<double, 3>& V, const std::array<double, 3>& W) const;
};

AcousticalMetric metric_at(const GasModel& gas, const PrimitiveState& s);

// {L, Lbar, X_A}: L and Lbar null, g(L, Lbar) = -2, X_A unit tangents of the
// front orthogonal to both.
struct NullFrame {
    int dim = 1;
    std::array<double, 3> L{};
    std::array<double, 3> Lbar{};
    std::array<double, 3> X{}; // present for dim == 2
};

NullFrame null_frame_at(const GasModel& gas, const PrimitiveState& s,
                        const std::array<double, 2>& normal);

// Eikonal value u on the fluid grid; level sets are 1-family acoustic fronts.
struct EikonalField {
    Grid grid;
    double time = 0.0;
    ScalarField u;
};

// u(t0, x) = x1 at cell centers.
EikonalField eikonal_init(const Grid& grid, double t0);

// One upwind (Godunov-Hamiltonian) step of dt for
//   du/dt + v.grad(u) - c |grad u| = 0,
// so level sets move at normal speed v.n - c. Substeps internally when the
// Hamiltonian CFL requires it.
EikonalField eikonal_step(const GasModel& gas, const FieldSnapshot& fluid, const EikonalField& ek,
                          double dt);

struct LapseField {
    ScalarField mu;
    std::vector<std::uint8_t> valid; // 0 where |grad u| fell under the gradient floor
};

constexpr double kGradFloor = 1e-6;
constexpr double kMuClamp = 1e-4;

// mu = 1/(c |grad u|), centered differences; cells with |grad u| < g_floor
// are flagged instead of reported.
LapseField lapse_from_eikonal(const GasModel& gas, const FieldSnapshot& fluid,
                              const EikonalField& ek, double g_floor = kGradFloor);

// Expansion of the level-set front congruence: tangential divergence of the
// front velocity w = v - c n, i.e. (delta_ij - n_i n_j) d_i w_j.
// Identically zero in 1D.
ScalarField tr_chi(const GasModel& gas, const FieldSnapshot& fluid, const EikonalField& ek,
                   double g_floor = kGradFloor);

// Scalar curl d1 v2 - d2 v1 (2D only).
ScalarField vorticity(const FieldSnapshot& fluid);

struct GeometryDiagnostics {
    LapseField lapse;
    ScalarField trchi;
    ScalarField omega;      // empty in 1D
    double max_abs_trchi = 0.0;
    double min_mu = 0.0;
    double max_mu = 0.0;
    double max_abs_omega = 0.0;
    double chi_mu_ratio = 0.0; // max over cells |tr chi| / max(mu, clamp)
};

GeometryDiagnostics geometry_diagnostics(const GasModel& gas, const FieldSnapshot& fluid,
                                         const EikonalField& ek, double mu_clamp = kMuClamp);

// max over valid cells of |tr chi| / max(mu, mu_clamp)
double chi_mu_ratio(const LapseField& lapse, const ScalarField& trchi, double mu_clamp = kMuClamp);

// Max |g^{ab} d_a u d_b u| over interior cells, with du/dt supplied by the
// last discrete update (u_new - u_old)/dt. Diagnostic for the transport step.
double eikonal_residual(const GasModel& gas, const FieldSnapshot& fluid, const EikonalField& before,
                        const EikonalField& after, double dt);

} // namespace rarefan

#endif
