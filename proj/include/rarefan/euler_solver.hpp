#ifndef RAREFAN_EULER_SOLVER_HPP
#define RAREFAN_EULER_SOLVER_HPP

#include "rarefan/background_wave.hpp"
#include "rarefan/field_snapshot.hpp"
#include "rarefan/gas_model.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace rarefan {

enum class FluxScheme { Rusanov, Hll };
enum class SlopeLimiter { FirstOrder, Minmod, Central };
enum class BoundaryPolicy {
    Periodic,   // both axes periodic
    Background, // x faces clamped to a time-dependent sampler, y periodic
};

// Ghost state source for Background boundaries: (t, x, y) -> state.
using BoundarySampler = std::function<PrimitiveState(double, double, double)>;

struct SolverConfig {
    double cfl = 0.45;
    SlopeLimiter limiter = SlopeLimiter::Minmod;
    BoundaryPolicy boundary = BoundaryPolicy::Periodic;
    FluxScheme flux = FluxScheme::Rusanov;
    double rho_floor = 1e-10;
    BoundarySampler boundary_sampler; // required for Background policy

    void validate() const;
};

struct StepStats {
    long floor_hits = 0; // cells clamped to the vacuum floor
};

// Analytic flux of the barotropic Euler system through a face with unit
// normal `axis`: mass rho v.n, momentum rho v (v.n) + p n.
std::array<double, 3> physical_flux(const GasModel& gas, const ConservedState& c,
                                    const std::array<double, 2>& axis);

std::array<double, 3> numerical_flux(const GasModel& gas, const PrimitiveState& left,
                                     const PrimitiveState& right,
                                     const std::array<double, 2>& axis, FluxScheme scheme);

// Largest stable dt: cfl * min over cells and axes of spacing/(|v.axis|+c).
double cfl_dt(const GasModel& gas, const FieldSnapshot& snap, double cfl);

// One conservative step of size dt (MUSCL reconstruction, two-stage
// strong-stability time advance). dt must not exceed cfl_dt(gas, snap, 1.0).
FieldSnapshot step(const GasModel& gas, const FieldSnapshot& snap, double dt,
                   const SolverConfig& cfg, StepStats* stats = nullptr);

struct RunObserver {
    double interval = 0.0; // 0 => observe only at t0 and t_end
    std::function<void(const FieldSnapshot&)> fn;
};

// CFL-limited advance from snap.time to t_end. Observers fire at t0, at
// every multiple of their interval (hit exactly), and at t_end. The
// per-step hook runs after each accepted step with the pre- and post-step
// snapshots. Aborts with context if the field goes non-finite.
FieldSnapshot run(const GasModel& gas, const FieldSnapshot& initial, const SolverConfig& cfg,
                  double t_end, const std::vector<RunObserver>& observers,
                  const std::function<void(const FieldSnapshot&, const FieldSnapshot&, double)>&
                      step_hook = nullptr,
                  StepStats* stats = nullptr);

// Fixed-order conservation sums {mass, m1, m2} over all cells, times volume.
std::array<double, 3> conserved_totals(const FieldSnapshot& snap);

// L1 distance to the exact background sampler at snap.time, summed over
// conserved components, times cell volume.
double l1_error_vs_background(const FieldSnapshot& snap, const BackgroundWave& bg);

} // namespace rarefan

#endif
