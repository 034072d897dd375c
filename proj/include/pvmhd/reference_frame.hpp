// Near-circular interfaces as height functions over the unit circle.
#pragma once

#include "pvmhd/spectral.hpp"

namespace pvmhd {

struct ReferenceFrame {
  int n_modes = 64;
  double wall_radius = 2.0;
  double delta_max = 0.5;  // height bound used for the wall-clearance check

  ReferenceFrame() = default;
  ReferenceFrame(int n_modes_, double wall_radius_, double delta_max_ = 0.5);

  int nodes() const { return 2 * n_modes; }
  double dtheta() const { return 2.0 * kPi / nodes(); }
  double theta(int j) const { return dtheta() * j; }
  Vec thetas() const;
};

// phi(theta) = sum_k c_k e^{ik theta}; only k = 0..n_modes is stored, negative
// modes follow by conjugation. The k = n_modes entry is the (real) Nyquist term.
class HeightField {
 public:
  HeightField() = default;
  explicit HeightField(int n_modes) : coeffs_(CVec::Zero(n_modes + 1)) {}
  static HeightField from_nodes(const Vec& values);
  static HeightField from_coeffs(CVec coeffs);
  static HeightField zero(int n_modes) { return HeightField(n_modes); }
  static HeightField cosine(int n_modes, int k, double amplitude);
  static HeightField constant(int n_modes, double c);

  int n_modes() const { return static_cast<int>(coeffs_.size()) - 1; }
  const CVec& coeffs() const { return coeffs_; }
  cplx coeff(int k) const;
  Vec nodes() const;  // samples on the 2*n_modes grid
  // Resample onto another truncation by zero padding or truncation.
  HeightField resized(int n_modes) const;

 private:
  CVec coeffs_;
};

struct CurveGeometry {
  Vec theta;
  Vec r, dr, ddr;  // 1 + phi and its angular derivatives
  Vec x, y;
  Vec tx, ty, nx, ny;
  Vec kappa;
  Vec jac;      // |d Phi / d theta|
  Vec weights;  // arclength quadrature weights
  double length() const { return weights.sum(); }
  int size() const { return static_cast<int>(x.size()); }
  // d/ds along the curve of node data.
  Vec d_s(const Vec& f) const;
};

CurveGeometry evaluate_geometry(const ReferenceFrame& frame, const HeightField& phi);
CurveGeometry evaluate_geometry(const Vec& phi_nodes);

// (2 pi sum_k (1+k^2)^sigma |c_k|^2)^(1/2) over all integer k.
double sobolev_norm(const Vec& node_values, double sigma);
double sobolev_norm(const HeightField& f, double sigma);

struct LambdaBall {
  double s = 3.0;
  double delta = 1.0;
};
bool in_lambda_ball(const HeightField& phi, const LambdaBall& ball);

struct AncillaryCurvature {
  Vec values;
  double a = 2.0;
};

AncillaryCurvature ancillary_curvature(const CurveGeometry& geom, const HeightField& phi,
                                       double a = 2.0);

struct NewtonOptions {
  int max_iter = 40;
  double tol = 1e-12;
};

HeightField invert_ancillary_curvature(const AncillaryCurvature& target,
                                       const ReferenceFrame& frame,
                                       const NewtonOptions& opt = {});

// Dense spectral differentiation matrix on n periodic nodes (cached).
const Mat& periodic_diff_matrix(int n, int order);

}  // namespace pvmhd
