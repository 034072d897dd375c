// Reconstruction of divergence-controlled vector fields from curl data and
// normal traces.
#pragma once

#include "pvmhd/elliptic.hpp"

namespace pvmhd {

// (-d_y psi, d_x psi)
VectorField perp_gradient(const MappedDomainGrid& grid, const Field& psi);

struct VelocityRecovery {
  VectorField v;
  double gamma = 0.0;  // constant divergence balancing the boundary flux
  double flux = 0.0;   // boundary integral of the normal trace
  Field chi, psi;
};

// v = grad chi + perp grad psi with curl v = omega, div v = gamma and
// v . n = n . (dphi e_r) on the interface.
VelocityRecovery recover_velocity(const MappedDomainGrid& disk, const Vec& dphi,
                                  const Field& omega);
// Zero divergence and zero normal trace.
VectorField recover_magnetic(const MappedDomainGrid& disk, const Field& current);

struct VacuumField {
  VectorField H;
  Field psi;  // stream function: H = perp grad psi, psi = 0 on the interface
};
// div H = curl H = 0 in the annulus, H . n = 0 on the interface and
// N x H = J on the wall.
VacuumField recover_vacuum_field(const MappedDomainGrid& annulus, const Vec& wall_current);

}  // namespace pvmhd
