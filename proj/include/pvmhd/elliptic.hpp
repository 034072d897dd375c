// Poisson solves, harmonic extensions, Dirichlet-Neumann operators and the
// multiplier pressures on the mapped plasma disk and vacuum annulus.
#pragma once

#include <functional>

#include "pvmhd/mapped_grid.hpp"

namespace pvmhd {

enum class BoundaryKind { Dirichlet, Neumann };
enum class Exec { Serial, Parallel };

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;
};

struct PoissonOptions {
  double tol = 1e-11;
  int max_iter = 300;
};

// Delta u = source on the grid.
// Disk: interface data is u (Dirichlet) or n.grad u (Neumann; the solution is
// returned with zero mean and the data must be compatible with the source).
// Annulus: interface Dirichlet data g, wall Neumann data (e_r . grad u).
Field solve_poisson(const MappedDomainGrid& grid, const Field& source, const Vec& interface_data,
                    BoundaryKind interface_bc, const Vec* wall_data = nullptr,
                    const Field* guess = nullptr, SolveReport* report = nullptr,
                    const PoissonOptions& opt = {});

// The mapped collocation operator whose inverse solve_poisson applies.
Field apply_poisson_operator(const MappedDomainGrid& grid, const Field& u, BoundaryKind interface_bc);

Field solve_dirichlet(const MappedDomainGrid& disk, const Field& source, const Vec& g,
                      SolveReport* report = nullptr);
Field solve_neumann(const MappedDomainGrid& disk, const Field& source, const Vec& g,
                    SolveReport* report = nullptr);
Field solve_vacuum_mixed(const MappedDomainGrid& annulus, const Vec& g,
                         const Vec* wall_neumann = nullptr, const Field* source = nullptr,
                         SolveReport* report = nullptr);

// Harmonic extensions and their Dirichlet-Neumann maps.
Field harmonic_extension(const MappedDomainGrid& grid, const Vec& g);
Vec apply_dn(const MappedDomainGrid& disk, const Vec& f);           // n . grad H f
Vec apply_dn_vacuum(const MappedDomainGrid& annulus, const Vec& f);  // -n . grad H~ f

struct BoundaryOperator {
  Mat matrix;     // as assembled
  Mat symmetric;  // averaged with its arclength adjoint
  Vec weights;    // arclength weights
  Vec eigenvalues;
  Mat eigenvectors;        // orthonormal in the weighted inner product
  double asymmetry = 0.0;  // relative size of the antisymmetric part

  Vec apply(const Vec& f) const { return symmetric * f; }
  int size() const { return static_cast<int>(weights.size()); }
  // Spectral calculus g(op) built from the eigendecomposition.
  Mat function_of(const std::function<double(double)>& g) const;
};

BoundaryOperator make_boundary_operator(const Mat& matrix, const Vec& weights);
BoundaryOperator dn_operator(const MappedDomainGrid& disk, Exec exec = Exec::Parallel);
BoundaryOperator dn_operator_vacuum(const MappedDomainGrid& annulus, Exec exec = Exec::Parallel);
// (A^{m/2} N A^{m/2})^(1/2) with A = -(tangential Laplacian); symbol (k^{2m}|k|)^(1/2) on the circle.
BoundaryOperator dn_fractional_power(const BoundaryOperator& op, int m, const CurveGeometry& geom);
// Tangential derivative matrix d/ds on the curve.
Mat tangential_derivative_matrix(const CurveGeometry& geom);

// -Delta q = tr((grad v)^2 - (grad h)^2) in the plasma, q = 0 on the interface.
Field multiplier_pressure_q(const MappedDomainGrid& disk, const VectorField& v,
                            const VectorField& h, SolveReport* report = nullptr,
                            const Field* guess = nullptr);
// Delta q~ = |grad H|^2 in the vacuum, q~ = 0 on the interface, e_r.grad q~ = H . d_r H on the wall.
Field vacuum_pressure_qtilde(const MappedDomainGrid& annulus, const VectorField& H,
                             SolveReport* report = nullptr);
// Delta q - grad^2 q(N, N) - K N.grad q with N, K harmonic extensions of n, kappa.
Field ancillary_varrho(const MappedDomainGrid& grid, const Field& q, const VectorField& N,
                       const Field& K);

// Extensions of the interface normal and curvature into either domain.
struct InterfaceExtensions {
  VectorField n;
  Field kappa;
};
InterfaceExtensions extend_interface_data(const MappedDomainGrid& grid);

// tr(A B) for gradient pairs, |grad H|^2 and friends.
struct Gradients {
  Field xx, xy, yx, yy;  // d_x u_x, d_y u_x, d_x u_y, d_y u_y
};
Gradients gradients(const MappedDomainGrid& grid, const VectorField& u);
Field trace_square(const Gradients& g);

// Residual of N(fg) = f N g + g N f - 2 d_n Delta^{-1}(grad f_H . grad g_H), sup norm.
struct LeibnizReport {
  double residual = 0.0;
  double scale = 0.0;
  Vec correction;  // -2 d_n Delta^{-1}(...)
};
LeibnizReport leibniz_correction_check(const MappedDomainGrid& disk, const Vec& f, const Vec& g);

}  // namespace pvmhd
