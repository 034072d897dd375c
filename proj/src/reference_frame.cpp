#include "pvmhd/reference_frame.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace pvmhd {

ReferenceFrame::ReferenceFrame(int n_modes_, double wall_radius_, double delta_max_)
    : n_modes(n_modes_), wall_radius(wall_radius_), delta_max(delta_max_) {
  if (n_modes < 2 || n_modes % 2 != 0)
    throw Error("ReferenceFrame: n_modes must be a positive even integer");
  if (!(wall_radius > 1.0 + delta_max))
    throw Error("ReferenceFrame: wall radius must exceed 1 + delta_max");
}

Vec ReferenceFrame::thetas() const {
  Vec t(nodes());
  for (int j = 0; j < nodes(); ++j) t(j) = theta(j);
  return t;
}

HeightField HeightField::from_nodes(const Vec& values) {
  if (values.size() % 2 != 0) throw Error("HeightField: node count must be even");
  return from_coeffs(fourier_coeffs(values));
}

HeightField HeightField::from_coeffs(CVec coeffs) {
  HeightField h;
  coeffs(0) = coeffs(0).real();
  coeffs(coeffs.size() - 1) = coeffs(coeffs.size() - 1).real();
  h.coeffs_ = std::move(coeffs);
  return h;
}

HeightField HeightField::cosine(int n_modes, int k, double amplitude) {
  HeightField h(n_modes);
  k = std::abs(k);
  if (k == 0)
    h.coeffs_(0) = amplitude;
  else if (k < n_modes)
    h.coeffs_(k) = 0.5 * amplitude;
  else if (k == n_modes)
    h.coeffs_(k) = amplitude;
  return h;
}

HeightField HeightField::constant(int n_modes, double c) {
  HeightField h(n_modes);
  h.coeffs_(0) = c;
  return h;
}

cplx HeightField::coeff(int k) const {
  const int a = std::abs(k);
  if (a > n_modes()) return 0.0;
  return k >= 0 ? coeffs_(a) : std::conj(coeffs_(a));
}

Vec HeightField::nodes() const { return fourier_synth(coeffs_, 2 * n_modes()); }

HeightField HeightField::resized(int n_modes) const {
  CVec c = CVec::Zero(n_modes + 1);
  const int m = std::min(n_modes, this->n_modes());
  c.head(m) = coeffs_.head(m);
  if (this->n_modes() < n_modes) {
    // Our Nyquist term is a full cosine; spread it onto +-k of the finer grid.
    c(m) = 0.5 * coeffs_(m);
  } else {
    c(m) = m < this->n_modes() ? cplx(2.0 * coeffs_(m).real(), 0.0) : coeffs_(m);
  }
  return from_coeffs(c);
}

Vec CurveGeometry::d_s(const Vec& f) const {
  return periodic_derivative(f).cwiseQuotient(jac);
}

CurveGeometry evaluate_geometry(const Vec& phi) {
  const int n = static_cast<int>(phi.size());
  CurveGeometry g;
  g.theta.resize(n);
  for (int j = 0; j < n; ++j) g.theta(j) = 2.0 * kPi * j / n;
  g.r = phi.array() + 1.0;
  if (g.r.minCoeff() <= 0.0) throw DegenerateCurveError("interface passes through the origin");
  g.dr = periodic_derivative(phi, 1);
  g.ddr = periodic_derivative(phi, 2);
  Eigen::ArrayXd c = g.theta.array().cos(), s = g.theta.array().sin();
  g.x = g.r.array() * c;
  g.y = g.r.array() * s;
  Eigen::ArrayXd B = g.r.array().square() + g.dr.array().square();
  g.jac = B.sqrt();
  if (g.jac.minCoeff() < 1e-8) throw DegenerateCurveError("curve is not immersed");
  // Phi' = r' e_r + r e_theta.
  g.tx = (g.dr.array() * c - g.r.array() * s) / g.jac.array();
  g.ty = (g.dr.array() * s + g.r.array() * c) / g.jac.array();
  g.nx = g.ty;
  g.ny = -g.tx;
  Eigen::ArrayXd A = g.r.array().square() + 2.0 * g.dr.array().square() -
                     g.r.array() * g.ddr.array();
  g.kappa = A / B.pow(1.5);
  g.weights = g.jac * (2.0 * kPi / n);
  return g;
}

CurveGeometry evaluate_geometry(const ReferenceFrame& frame, const HeightField& phi) {
  if (phi.n_modes() != frame.n_modes) throw Error("evaluate_geometry: resolution mismatch");
  return evaluate_geometry(phi.nodes());
}

double sobolev_norm(const Vec& f, double sigma) {
  CVec c = fourier_coeffs(f);
  const int half = static_cast<int>(c.size()) - 1;
  double s = std::norm(c(0));
  for (int k = 1; k < half; ++k) s += 2.0 * std::pow(1.0 + k * k, sigma) * std::norm(c(k));
  s += 2.0 * std::pow(1.0 + double(half) * half, sigma) * std::norm(0.5 * c(half));
  return std::sqrt(2.0 * kPi * s);
}

double sobolev_norm(const HeightField& f, double sigma) { return sobolev_norm(f.nodes(), sigma); }

bool in_lambda_ball(const HeightField& phi, const LambdaBall& ball) {
  return sobolev_norm(phi, ball.s - 0.5) < ball.delta;
}

AncillaryCurvature ancillary_curvature(const CurveGeometry& geom, const HeightField& phi,
                                       double a) {
  AncillaryCurvature k;
  k.a = a;
  k.values = geom.kappa + a * a * phi.nodes();
  return k;
}

const Mat& periodic_diff_matrix(int n, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, Mat> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, order});
  if (it != cache.end()) return it->second;
  Field eye = Field::Identity(n, n);
  // Rows of the identity are unit samples; differentiating each row gives the
  // transpose of the matrix.
  Mat D = theta_derivative(eye, order).transpose();
  return cache.emplace(std::make_pair(n, order), std::move(D)).first->second;
}

HeightField invert_ancillary_curvature(const AncillaryCurvature& target,
                                       const ReferenceFrame& frame, const NewtonOptions& opt) {
  const int n = frame.nodes();
  if (target.values.size() != n) throw Error("invert_ancillary_curvature: size mismatch");
  const double a2 = target.a * target.a;
  const Mat& D1 = periodic_diff_matrix(n, 1);
  const Mat& D2 = periodic_diff_matrix(n, 2);
  // Start from the solution of the linearization about the unit circle.
  Vec phi;
  {
    CVec c = fourier_coeffs(target.values - Vec::Ones(n));
    for (int k = 0; k < c.size(); ++k) c(k) /= (a2 - 1.0 + double(k) * k);
    phi = fourier_synth(c, n);
  }
  for (int it = 0; it < opt.max_iter; ++it) {
    Vec r = phi.array() + 1.0;
    if (r.minCoeff() <= 0.0) break;
    Vec dr = D1 * phi, ddr = D2 * phi;
    Eigen::ArrayXd A = r.array().square() + 2.0 * dr.array().square() - r.array() * ddr.array();
    Eigen::ArrayXd B = r.array().square() + dr.array().square();
    Eigen::ArrayXd B15 = B.pow(1.5), B25 = B.pow(2.5);
    Vec kappa = A / B15;
    Vec F = kappa + a2 * phi - target.values;
    if (F.lpNorm<Eigen::Infinity>() < opt.tol) return HeightField::from_nodes(phi);
    Vec k_r = (2.0 * r.array() - ddr.array()) / B15 - 3.0 * A * r.array() / B25;
    Vec k_dr = 4.0 * dr.array() / B15 - 3.0 * A * dr.array() / B25;
    Vec k_ddr = -r.array() / B15;
    Mat J = k_dr.asDiagonal() * D1 + k_ddr.asDiagonal() * D2;
    J.diagonal() += k_r + Vec::Constant(n, a2);
    phi -= J.partialPivLu().solve(F);
    if (!phi.allFinite()) break;
  }
  throw OutOfBallError("ancillary curvature inversion did not converge");
}

}  // namespace pvmhd
