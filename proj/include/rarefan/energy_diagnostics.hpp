#ifndef RAREFAN_ENERGY_DIAGNOSTICS_HPP
#define RAREFAN_ENERGY_DIAGNOSTICS_HPP

#include "rarefan/background_wave.hpp"
#include "rarefan/field_snapshot.hpp"
#include "rarefan/grid.hpp"

#include <optional>
#include <vector>

namespace rarefan {

// Weight exponents a_k = a0 + k*delta for the lapse-weighted energies.
struct WeightSchedule {
    double a0 = 2.0;
    double delta = 0.5;
    int max_order = 3;

    double exponent(int k) const;
};

// Perturbation in primitive variables: U(t,x) - Ubar(t,x), one component
// field per variable.
struct PerturbationField {
    Grid grid;
    double time = 0.0;
    std::array<ScalarField, 3> comp; // rho~, v1~, v2~ (v2~ zero-size in 1D)
    int ncomp = 2;
};

PerturbationField perturbation_from(const FieldSnapshot& snap, const BackgroundWave& bg);

// All spatial derivatives d^a_x d^b_y f for a+b <= max_order, second-order
// centered stencils with one-sided boundary closures.
class DerivativeTable {
  public:
    DerivativeTable(const ScalarField& f, const Grid& g, int max_order);
    const ScalarField& at(int ax, int ay) const;
    int max_order() const { return s_; }

  private:
    int s_;
    std::vector<ScalarField> table_;
    std::size_t slot(int ax, int ay) const;
};

// E_k = sum_{|alpha|<=k} integral mu^{a_k} |d^alpha U~|^2 dx (midpoint
// quadrature). The boundary share, when requested, is the part of the sum
// carried by cells touching the domain boundary.
double weighted_energy(const WeightSchedule& ws, const PerturbationField& pert,
                       const ScalarField& mu, int k, double* boundary_share = nullptr);

double total_energy(const std::vector<double>& orders);

// Sonic-band flux proxy: sum over cells with mu < band of
// mu^{a_k - 1} |U~|^2 * cell volume.
double sonic_flux_proxy(const WeightSchedule& ws, const PerturbationField& pert,
                        const ScalarField& mu, int k, double band);

// {max |U~|, max |grad U~|} over all components and cells.
std::array<double, 2> linf_norms(const PerturbationField& pert);

struct DecayFit {
    bool valid = false;
    double alpha = 0.0;
    double residual = 0.0;
    double t_first = 0.0;
    double t_last = 0.0;
    int samples = 0;
};

// Least-squares slope of log y against log(1+t), negated. Requires >= 5
// positive samples spanning a factor >= 2 in (1+t).
DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& values);

struct EnergyReport {
    double t = 0.0;
    std::vector<double> E;   // orders 0..s
    double E_total = 0.0;
    double linf = 0.0;
    double linf_grad = 0.0;
    double flux = 0.0;          // order-0 sonic flux proxy
    double chi_mu_ratio = 0.0;
    double boundary_share = 0.0;
    bool ba1 = true, ba2 = true, ba3 = true;
};

struct BootstrapResult {
    bool pass = true;
    int first_violation = -1;  // sample index
    int which = 0;             // 1, 2, or 3
    double time = 0.0;
};

// (BA1) E_s <= 2 C0 eps0, (BA2) linf <= 2 C0 eps0 (1+t)^{-(n-1)/2},
// (BA3) linf_grad <= 2 C0 eps0 (1+t)^{-1-delta}; non-strict comparisons.
// Also stamps the per-report ba flags.
BootstrapResult bootstrap_check(std::vector<EnergyReport>& series, double C0, double eps0, int n,
                                double delta = 0.5);

// Time-series CSV with header
// t,E0,...,Es,E_total,linf,linf_grad,flux,chi_mu_ratio,ba1,ba2,ba3
void write_energy_csv(const std::vector<EnergyReport>& series, int max_order,
                      const std::string& path);

} // namespace rarefan

#endif
