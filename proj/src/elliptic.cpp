#include "pvmhd/elliptic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace pvmhd {

namespace {

// Per-Fourier-mode LU factors of the polar Laplacian on the undeformed domain,
// with the boundary rows of the requested problem. Used as a right
// preconditioner for the mapped operator.
struct PolarFactor {
  std::vector<Eigen::PartialPivLU<Mat>> lu;
};

std::shared_ptr<const PolarFactor> polar_factor(DomainKind kind, int nr, int nt, double R,
                                                BoundaryKind bc) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, double, int>, std::shared_ptr<const PolarFactor>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(static_cast<int>(kind), nr, nt, R, static_cast<int>(bc));
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto ops = radial_operators(kind, nr, R);
  const Vec& rho = ops->rho;
  const int M = nt / 2;
  auto f = std::make_shared<PolarFactor>();
  f->lu.reserve(M + 1);
  Vec inv_r = rho.cwiseInverse();
  for (int m = 0; m <= M; ++m) {
    Mat D1 = ops->A1, D2 = ops->A2;
    if (kind == DomainKind::PlasmaDisk) {
      const double p = (m % 2) ? -1.0 : 1.0;
      D1 += p * ops->B1;
      D2 += p * ops->B2;
    }
    Mat P = D2 + inv_r.asDiagonal() * D1;
    P.diagonal() -= double(m) * m * inv_r.cwiseAbs2();
    if (bc == BoundaryKind::Dirichlet) {
      P.row(0).setZero();
      P(0, 0) = 1.0;
    } else {
      P.row(0) = D1.row(0);
      if (m == 0) P.row(0) += 2.0 * kPi * ops->quad.cwiseProduct(rho).transpose();
    }
    if (kind == DomainKind::VacuumAnnulus) P.row(nr - 1) = D1.row(nr - 1);
    f->lu.emplace_back(P);
  }
  cache[key] = f;
  return f;
}

Vec flatten(const Field& f) { return Eigen::Map<const Vec>(f.data(), f.size()); }
Field unflatten(const Vec& v, int nr, int nt) { return Eigen::Map<const Field>(v.data(), nr, nt); }

// e_r . grad u on the wall row of an annulus.
Eigen::RowVectorXd wall_flux_row(const MappedDomainGrid& g, const Field& u) {
  return g.wall_normal_derivative(u).transpose();
}

}  // namespace

Field apply_poisson_operator(const MappedDomainGrid& g, const Field& u, BoundaryKind bc) {
  Field out = g.laplacian(u);
  if (bc == BoundaryKind::Dirichlet) {
    out.row(0) = u.row(0);
  } else {
    out.row(0) = g.interface_normal_derivative(u).transpose();
    // Rank-one term pinning the mean of the otherwise singular Neumann problem.
    out.row(0).array() += g.integrate(u);
  }
  if (g.kind() == DomainKind::VacuumAnnulus) out.row(g.nr() - 1) = wall_flux_row(g, u);
  return out;
}

Field solve_poisson(const MappedDomainGrid& g, const Field& source, const Vec& iface,
                    BoundaryKind bc, const Vec* wall, const Field* guess, SolveReport* report,
                    const PoissonOptions& opt) {
  const int nr = g.nr(), nt = g.nt();
  if (g.kind() == DomainKind::VacuumAnnulus && bc != BoundaryKind::Dirichlet)
    throw Error("solve_poisson: the annulus takes Dirichlet data on the interface");
  Field rhs = source;
  rhs.row(0) = iface.transpose();
  if (g.kind() == DomainKind::VacuumAnnulus) {
    if (wall)
      rhs.row(nr - 1) = wall->transpose();
    else
      rhs.row(nr - 1).setZero();
  }
  auto factor = polar_factor(g.kind(), nr, nt, g.wall_radius(), bc);
  const auto& fft = row_fft(nr, nt);
  const int M = nt / 2;
  LinearMap A = [&](const Vec& x, Vec& y) {
    y = flatten(apply_poisson_operator(g, unflatten(x, nr, nt), bc));
  };
  LinearMap Minv = [&](const Vec& x, Vec& y) {
    CField c = fft.forward(unflatten(x, nr, nt));
    Mat ri(nr, 2);
    for (int m = 0; m <= M; ++m) {
      ri.col(0) = c.col(m).real();
      ri.col(1) = c.col(m).imag();
      Mat s = factor->lu[m].solve(ri);
      for (int i = 0; i < nr; ++i) c(i, m) = cplx(s(i, 0), s(i, 1));
    }
    y = flatten(fft.inverse(c));
  };
  Vec x = guess ? flatten(*guess) : Vec::Zero(nr * nt);
  Vec b = flatten(rhs);
  GmresReport rep = gmres(A, Minv, b, x, opt.tol, 80, opt.max_iter);
  if (report) {
    report->iterations = rep.iterations;
    report->residual = rep.residual;
  }
  if (!(rep.residual < 1e-8) || !x.allFinite())
    throw IllConditionedMapError("Poisson solve stagnated at relative residual " +
                                 std::to_string(rep.residual));
  Field u = unflatten(x, nr, nt);
  if (bc == BoundaryKind::Neumann) u.array() -= g.integrate(u) / g.integrate(g.constant(1.0));
  return u;
}

Field solve_dirichlet(const MappedDomainGrid& disk, const Field& source, const Vec& g,
                      SolveReport* report) {
  return solve_poisson(disk, source, g, BoundaryKind::Dirichlet, nullptr, nullptr, report);
}

Field solve_neumann(const MappedDomainGrid& disk, const Field& source, const Vec& g,
                    SolveReport* report) {
  return solve_poisson(disk, source, g, BoundaryKind::Neumann, nullptr, nullptr, report);
}

Field solve_vacuum_mixed(const MappedDomainGrid& annulus, const Vec& g, const Vec* wall_neumann,
                         const Field* source, SolveReport* report) {
  Field src = source ? *source : annulus.zeros();
  return solve_poisson(annulus, src, g, BoundaryKind::Dirichlet, wall_neumann, nullptr, report);
}

Field harmonic_extension(const MappedDomainGrid& grid, const Vec& g) {
  return solve_poisson(grid, grid.zeros(), g, BoundaryKind::Dirichlet);
}

Vec apply_dn(const MappedDomainGrid& disk, const Vec& f) {
  return disk.interface_normal_derivative(harmonic_extension(disk, f));
}

Vec apply_dn_vacuum(const MappedDomainGrid& annulus, const Vec& f) {
  return -annulus.interface_normal_derivative(harmonic_extension(annulus, f));
}

Mat BoundaryOperator::function_of(const std::function<double(double)>& g) const {
  Vec gl = eigenvalues.unaryExpr(g);
  return eigenvectors * gl.asDiagonal() * eigenvectors.transpose() * weights.asDiagonal();
}

BoundaryOperator make_boundary_operator(const Mat& matrix, const Vec& weights) {
  BoundaryOperator op;
  op.matrix = matrix;
  op.weights = weights;
  Mat WM = weights.asDiagonal() * matrix;
  op.asymmetry = (WM - WM.transpose()).norm() / std::max(WM.norm(), 1e-300);
  op.symmetric = 0.5 * (matrix + weights.cwiseInverse().asDiagonal() * matrix.transpose() *
                                     weights.asDiagonal());
  Vec sw = weights.cwiseSqrt();
  Mat B = sw.asDiagonal() * op.symmetric * sw.cwiseInverse().asDiagonal();
  B = 0.5 * (B + B.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(B);
  op.eigenvalues = es.eigenvalues();
  op.eigenvectors = sw.cwiseInverse().asDiagonal() * es.eigenvectors();
  return op;
}

namespace {
BoundaryOperator assemble_columns(const MappedDomainGrid& g, bool vacuum, Exec exec) {
  const int n = g.nt();
  Mat M(n, n);
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (int j = 0; j < n; ++j) {
    Vec e = Vec::Zero(n);
    e(j) = 1.0;
    M.col(j) = vacuum ? apply_dn_vacuum(g, e) : apply_dn(g, e);
  }
  return make_boundary_operator(M, g.interface().weights);
}
}  // namespace

BoundaryOperator dn_operator(const MappedDomainGrid& disk, Exec exec) {
  if (disk.kind() != DomainKind::PlasmaDisk) throw Error("dn_operator: plasma grid required");
  return assemble_columns(disk, false, exec);
}

BoundaryOperator dn_operator_vacuum(const MappedDomainGrid& annulus, Exec exec) {
  if (annulus.kind() != DomainKind::VacuumAnnulus)
    throw Error("dn_operator_vacuum: vacuum grid required");
  return assemble_columns(annulus, true, exec);
}

Mat tangential_derivative_matrix(const CurveGeometry& geom) {
  return geom.jac.cwiseInverse().asDiagonal() * periodic_diff_matrix(geom.size(), 1);
}

BoundaryOperator dn_fractional_power(const BoundaryOperator& op, int m, const CurveGeometry& geom) {
  if (m < 0) throw Error("dn_fractional_power: m must be nonnegative");
  Mat L = op.symmetric;
  if (m > 0) {
    // A^{m/2} N A^{m/2} with A the tangential Laplacian: same spectrum as A^m N,
    // self-adjoint and nonnegative even where A and N do not commute.
    Mat Ds = tangential_derivative_matrix(geom);
    BoundaryOperator A = make_boundary_operator(-(Ds * Ds), op.weights);
    const double half = 0.5 * m;
    Mat Ah = A.function_of([half](double l) { return std::pow(std::max(l, 0.0), half); });
    L = Ah * op.symmetric * Ah;
  }
  BoundaryOperator comp = make_boundary_operator(L, op.weights);
  const double scale = std::max(1.0, comp.eigenvalues.cwiseAbs().maxCoeff());
  if (comp.eigenvalues.minCoeff() < -1e-8 * scale)
    throw OperatorNotPsdError("composed boundary operator has a negative eigenvalue");
  Mat root = comp.function_of([](double l) { return std::sqrt(std::max(l, 0.0)); });
  return make_boundary_operator(root, op.weights);
}

Gradients gradients(const MappedDomainGrid& grid, const VectorField& u) {
  Gradients g;
  grid.gradient(u.x, g.xx, g.xy);
  grid.gradient(u.y, g.yx, g.yy);
  return g;
}

Field trace_square(const Gradients& g) {
  return g.xx.cwiseAbs2() + 2.0 * g.xy.cwiseProduct(g.yx) + g.yy.cwiseAbs2();
}

Field multiplier_pressure_q(const MappedDomainGrid& disk, const VectorField& v, const VectorField& h,
                            SolveReport* report, const Field* guess) {
  Field src = -(trace_square(gradients(disk, v)) - trace_square(gradients(disk, h)));
  return solve_poisson(disk, src, Vec::Zero(disk.nt()), BoundaryKind::Dirichlet, nullptr, guess,
                       report);
}

Field vacuum_pressure_qtilde(const MappedDomainGrid& annulus, const VectorField& H,
                             SolveReport* report) {
  Gradients g = gradients(annulus, H);
  Field src = g.xx.cwiseAbs2() + g.xy.cwiseAbs2() + g.yx.cwiseAbs2() + g.yy.cwiseAbs2();
  const int last = annulus.nr() - 1, nt = annulus.nt();
  Vec wall(nt);
  for (int j = 0; j < nt; ++j) {
    const double th = 2.0 * kPi * j / nt, c = std::cos(th), s = std::sin(th);
    const double dHx = c * g.xx(last, j) + s * g.xy(last, j);
    const double dHy = c * g.yx(last, j) + s * g.yy(last, j);
    wall(j) = H.x(last, j) * dHx + H.y(last, j) * dHy;
  }
  return solve_poisson(annulus, src, Vec::Zero(nt), BoundaryKind::Dirichlet, &wall, nullptr, report);
}

InterfaceExtensions extend_interface_data(const MappedDomainGrid& grid) {
  InterfaceExtensions e;
  const auto& geom = grid.interface();
  e.n.x = harmonic_extension(grid, geom.nx);
  e.n.y = harmonic_extension(grid, geom.ny);
  e.kappa = harmonic_extension(grid, geom.kappa);
  return e;
}

Field ancillary_varrho(const MappedDomainGrid& grid, const Field& q, const VectorField& N,
                       const Field& K) {
  Field qx, qy, qxx, qxy, qyx, qyy;
  grid.gradient(q, qx, qy);
  grid.gradient(qx, qxx, qxy);
  grid.gradient(qy, qyx, qyy);
  Field mixed = 0.5 * (qxy + qyx);
  Field hess_nn = N.x.cwiseAbs2().cwiseProduct(qxx) + 2.0 * N.x.cwiseProduct(N.y).cwiseProduct(mixed) +
                  N.y.cwiseAbs2().cwiseProduct(qyy);
  Field dNq = N.x.cwiseProduct(qx) + N.y.cwiseProduct(qy);
  return qxx + qyy - hess_nn - K.cwiseProduct(dNq);
}

LeibnizReport leibniz_correction_check(const MappedDomainGrid& disk, const Vec& f, const Vec& g) {
  LeibnizReport rep;
  Field fH = harmonic_extension(disk, f), gH = harmonic_extension(disk, g);
  Field fx, fy, gx, gy;
  disk.gradient(fH, fx, fy);
  disk.gradient(gH, gx, gy);
  Field w = solve_dirichlet(disk, fx.cwiseProduct(gx) + fy.cwiseProduct(gy), Vec::Zero(disk.nt()));
  rep.correction = -2.0 * disk.interface_normal_derivative(w);
  Vec Nf = disk.interface_normal_derivative(fH), Ng = disk.interface_normal_derivative(gH);
  Vec lhs = apply_dn(disk, f.cwiseProduct(g));
  Vec rhs = f.cwiseProduct(Ng) + g.cwiseProduct(Nf) + rep.correction;
  rep.residual = (lhs - rhs).lpNorm<Eigen::Infinity>();
  rep.scale = std::max({lhs.lpNorm<Eigen::Infinity>(), f.cwiseProduct(Ng).lpNorm<Eigen::Infinity>(),
                        g.cwiseProduct(Nf).lpNorm<Eigen::Infinity>(), 1e-300});
  return rep;
}

}  // namespace pvmhd
