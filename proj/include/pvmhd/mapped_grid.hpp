// Pseudospectral grids on the physical plasma disk and vacuum annulus, obtained
// from reference polar grids through the harmonic extension of the interface.
#pragma once

#include <memory>

#include "pvmhd/reference_frame.hpp"

namespace pvmhd {

enum class DomainKind { PlasmaDisk, VacuumAnnulus };

struct VectorField {
  Field x, y;
};

// Radial operators on the reference grid.
// Disk: nodes are the positive half of a 2*nr point Chebyshev line through the
// origin, so r = 0 is never a node. A function's values at (-rho, theta) are
// those at (rho, theta + pi); derivatives pick up the mirrored half through B.
// Annulus: plain Chebyshev nodes on [1, R], row 0 is r = 1, the last row r = R.
struct RadialOperators {
  DomainKind kind;
  int nr = 0;
  Vec rho;
  Mat A1, B1, A2, B2;  // first and second derivative, direct and mirrored parts
  Vec quad;            // radial quadrature weights, rho factor excluded
  Vec line_x;          // full line abscissae (disk) or Chebyshev x (annulus)
  Vec bary;            // barycentric weights on line_x
  double wall_radius = 0.0;
};
std::shared_ptr<const RadialOperators> radial_operators(DomainKind kind, int nr, double R);

class MappedDomainGrid {
 public:
  static std::shared_ptr<const MappedDomainGrid> plasma(const Vec& phi_nodes, int nr);
  static std::shared_ptr<const MappedDomainGrid> vacuum(const Vec& phi_nodes, int nr, double R);

  DomainKind kind() const { return kind_; }
  int nr() const { return nr_; }
  int nt() const { return nt_; }
  int n_modes() const { return nt_ / 2; }
  double wall_radius() const { return R_; }
  const Vec& rho() const { return radial_->rho; }
  const RadialOperators& radial() const { return *radial_; }
  const CurveGeometry& interface() const { return geom_; }
  const Vec& phi() const { return phi_; }

  // Physical coordinates and map derivatives.
  const Field& X() const { return X_; }
  const Field& Y() const { return Y_; }
  const Field& jacobian() const { return det_; }
  // Jacobian determinant divided by its value for the undeformed domain.
  double min_jacobian_ratio() const { return min_ratio_; }
  const Field& weights() const { return W_; }

  Field zeros() const { return Field::Zero(nr_, nt_); }
  Field constant(double c) const { return Field::Constant(nr_, nt_, c); }
  Field evaluate(const std::function<double(double, double)>& f) const;

  Field d_rho(const Field& f) const;
  Field d_rho2(const Field& f) const;
  Field d_theta(const Field& f) const { return theta_derivative(f, 1); }
  void gradient(const Field& f, Field& fx, Field& fy) const;
  VectorField gradient(const Field& f) const;
  Field laplacian(const Field& f) const;
  Field divergence(const VectorField& v) const;
  Field curl(const VectorField& v) const;
  double integrate(const Field& f) const { return W_.cwiseProduct(f).sum(); }

  // Interface is row 0 in both domains.
  Vec interface_trace(const Field& f) const { return f.row(0).transpose(); }
  // n . grad f on the interface, n outward from the plasma.
  Vec interface_normal_derivative(const Field& f) const;
  // Wall quantities (annulus only): last row, outward normal e_r.
  Vec wall_trace(const Field& f) const { return f.row(nr_ - 1).transpose(); }
  Vec wall_normal_derivative(const Field& f) const;

  // Spectral evaluation of a nodal field at a physical point. Returns false if
  // the point cannot be located inside the domain.
  bool locate(double px, double py, double& rho, double& theta) const;
  double interpolate_reference(const Field& f, double rho, double theta) const;

  // Mesh velocity of the plasma grid: harmonic extension of dphi/dt * e_r.
  VectorField extend_radial_motion(const Vec& dphi) const;

  // Metric pieces used by the Laplacian.
  const Field& grr() const { return grr_; }
  const Field& grt() const { return grt_; }
  const Field& gtt() const { return gtt_; }

 private:
  MappedDomainGrid() = default;
  void finish_metric(const Field& Xrr, const Field& Yrr, const Field& Xrt, const Field& Yrt,
                     const Field& Xtt, const Field& Ytt);
  void map_point(double rho, double theta, double& x, double& y, double& xr, double& yr,
                 double& xt, double& yt) const;

  DomainKind kind_ = DomainKind::PlasmaDisk;
  int nr_ = 0, nt_ = 0;
  double R_ = 0.0;
  std::shared_ptr<const RadialOperators> radial_;
  Vec phi_;
  CurveGeometry geom_;
  CVec gx_, gy_;  // boundary data coefficients of the map (interface)
  CVec ax_, bx_, ay_, by_;  // annulus mode amplitudes
  Field X_, Y_, Xr_, Yr_, Xt_, Yt_, det_;
  Field rx_, ry_, tx_, ty_;
  Field grr_, grt_, gtt_, lap_r_, lap_t_;
  Field W_;
  double min_ratio_ = 1.0;
};

using GridPtr = std::shared_ptr<const MappedDomainGrid>;

}  // namespace pvmhd
