// Pointwise and per-marker kernels of the time stepper. Each kernel has a
// serial reference path and an OpenMP path selected by Exec; both produce
// bitwise identical results.
#pragma once

#include <vector>

#include "pvmhd/elliptic.hpp"

namespace pvmhd {

// dv = -((v - W).grad) v - grad p + (h.grad) h
VectorField momentum_rhs(const VectorField& v, const VectorField& W, const VectorField& h,
                         const Gradients& gv, const Gradients& gh, const VectorField& gp,
                         Exec exec = Exec::Parallel);
// dh = -((v - W).grad) h + (h.grad) v
VectorField induction_rhs(const VectorField& v, const VectorField& W, const VectorField& h,
                          const Gradients& gv, const Gradients& gh, Exec exec = Exec::Parallel);

// Spectral sampling of several nodal fields at many reference points.
class FieldSampler {
 public:
  FieldSampler(const MappedDomainGrid& grid, const std::vector<const Field*>& fields);
  int n_fields() const { return static_cast<int>(coeffs_.size()); }
  // out[f] = value of field f at (rho, theta).
  void sample(double rho, double theta, double* out) const;

 private:
  const MappedDomainGrid* grid_;
  std::vector<CField> coeffs_;
};

struct MarkerSample {
  std::vector<double> values;  // n_points * n_fields, point-major
  int misses = 0;              // points that could not be located
};
// Locate each physical point and sample the fields there. Points outside the
// domain are clamped to the nearest interface point.
MarkerSample sample_at_points(const MappedDomainGrid& grid, const std::vector<const Field*>& fields,
                              const std::vector<double>& px, const std::vector<double>& py,
                              Exec exec = Exec::Parallel);

}  // namespace pvmhd
