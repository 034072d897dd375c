// Physical and higher-order energies, power balance with a wall current, and
// the stability monitors that decide which coercivity regime is active.
#pragma once

#include <string>
#include <vector>

#include "pvmhd/evolution.hpp"

namespace pvmhd {

struct PhysicalEnergy {
  double kinetic = 0.0;
  double plasma_magnetic = 0.0;
  double vacuum_magnetic = 0.0;
  double surface = 0.0;
  double total() const { return kinetic + plasma_magnetic + vacuum_magnetic + surface; }
};

PhysicalEnergy physical_energy(const MappedDomainGrid& disk, const VectorField& v,
                               const VectorField& h, double alpha,
                               const MappedDomainGrid* annulus = nullptr,
                               const VectorField* H = nullptr);
PhysicalEnergy physical_energy(Stepper& stepper, const FlowState& s);

struct DriftReport {
  double max_relative_drift = 0.0;  // max |E(t) - E(t0)| / E(t0)
  double drift_per_time = 0.0;      // the above divided by the time span
  double max_flux_mismatch = 0.0;   // max |dE/dt - flux| / max |flux|, when fluxes are given
  int samples = 0;
};
// Energies sampled at times t. With fluxes (the wall power at each sample) the
// central-difference dE/dt is compared against them at interior samples.
DriftReport conservation_check(const std::vector<double>& t, const std::vector<double>& energy,
                               const std::vector<double>* flux = nullptr);

struct ElectricField {
  Field eps;                 // on the vacuum grid
  double residual = 0.0;     // |grad^perp eps - dH/dt|_inf relative to |dH/dt|_inf
  double wall_power = 0.0;   // integral over the wall of J eps
};
// grad^perp eps = dH/dt in the vacuum, eps = -s (H . tau) on the interface, s = v . n.
ElectricField electric_field(const MappedDomainGrid& annulus, const VectorField& H,
                             const VectorField& dHdt, const Vec& normal_speed, double wall_current);
// dH/dt at fixed points from three consecutive states; the power through the
// wall at the middle state follows.
ElectricField electric_field(Stepper& stepper, const FlowState& prev, const FlowState& mid,
                             const FlowState& next);

struct HigherEnergy {
  int m = 0;
  double bdry_terms[5] = {0, 0, 0, 0, 0};  // D_t kappa, surface tension, sign, |h| kappa', |H| kappa'
  double E_bdry = 0.0;
  double E_int = 0.0;
  double E_total = 0.0;
  double M = 0.0;
};
HigherEnergy higher_energy(Stepper& stepper, const FlowState& s, int m);
// Sum over derivative orders 0..k of the squared L^2 norms of all Cartesian derivatives.
double interior_sobolev_sq(const MappedDomainGrid& grid, const Field& f, int k);

enum class Regime { SurfaceTension = 1, NonDegenerate = 2, SignCondition = 3, None = 0 };
std::string to_string(Regime r);

struct StabilityMonitors {
  double min_minus_dnp = 0.0;  // min over the interface of -n . grad p
  double min_minus_dnq = 0.0;  // min of -n . grad q
  double min_field = 0.0;      // min of |h| + |H|
  double phi_norm = 0.0;       // |phi|_{H^{s-1/2}}
  bool case_surface = false, case_field = false, case_sign = false;
  double lambda0 = 0.0, c0 = 0.0;
  Regime regime = Regime::None;  // first case that holds
};
StabilityMonitors stability_monitors(Stepper& stepper, const FlowState& s, double tol = 1e-10);

struct EnergyReport {
  double t = 0.0;
  PhysicalEnergy energy;
  std::vector<HigherEnergy> higher;
  StabilityMonitors monitors;
};
EnergyReport energy_report(Stepper& stepper, const FlowState& s, const std::vector<int>& orders);

}  // namespace pvmhd
