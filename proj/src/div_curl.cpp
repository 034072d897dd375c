#include "pvmhd/div_curl.hpp"

#include <cmath>

namespace pvmhd {

VectorField perp_gradient(const MappedDomainGrid& grid, const Field& psi) {
  Field px, py;
  grid.gradient(psi, px, py);
  return {-py, px};
}

VelocityRecovery recover_velocity(const MappedDomainGrid& disk, const Vec& dphi,
                                  const Field& omega) {
  const auto& geom = disk.interface();
  Vec er_n = geom.theta.array().cos() * geom.nx.array() + geom.theta.array().sin() * geom.ny.array();
  Vec flux_density = dphi.cwiseProduct(er_n);
  VelocityRecovery out;
  out.flux = flux_density.dot(geom.weights);
  out.gamma = out.flux / disk.integrate(disk.constant(1.0));
  const int nt = disk.nt();
  out.psi = solve_dirichlet(disk, omega, Vec::Zero(nt));
  if (flux_density.lpNorm<Eigen::Infinity>() > 0.0)
    out.chi = solve_neumann(disk, disk.constant(out.gamma), flux_density);
  else
    out.chi = disk.zeros();
  VectorField rot = perp_gradient(disk, out.psi);
  Field cx, cy;
  disk.gradient(out.chi, cx, cy);
  out.v.x = cx + rot.x;
  out.v.y = cy + rot.y;
  return out;
}

VectorField recover_magnetic(const MappedDomainGrid& disk, const Field& current) {
  return perp_gradient(disk, solve_dirichlet(disk, current, Vec::Zero(disk.nt())));
}

VacuumField recover_vacuum_field(const MappedDomainGrid& annulus, const Vec& wall_current) {
  if (annulus.kind() != DomainKind::VacuumAnnulus)
    throw Error("recover_vacuum_field: vacuum grid required");
  VacuumField out;
  const int nt = annulus.nt();
  if (wall_current.lpNorm<Eigen::Infinity>() == 0.0) {
    out.psi = annulus.zeros();
  } else {
    out.psi = solve_vacuum_mixed(annulus, Vec::Zero(nt), &wall_current);
  }
  out.H = perp_gradient(annulus, out.psi);
  return out;
}

}  // namespace pvmhd
