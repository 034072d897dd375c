#include "pvmhd/kernels.hpp"

#include <cmath>

namespace pvmhd {

VectorField momentum_rhs(const VectorField& v, const VectorField& W, const VectorField& h,
                         const Gradients& gv, const Gradients& gh, const VectorField& gp,
                         Exec exec) {
  const Eigen::Index n = v.x.size();
  VectorField out{Field(v.x.rows(), v.x.cols()), Field(v.x.rows(), v.x.cols())};
  const double *vx = v.x.data(), *vy = v.y.data(), *wx = W.x.data(), *wy = W.y.data();
  const double *hx = h.x.data(), *hy = h.y.data();
  const double *vxx = gv.xx.data(), *vxy = gv.xy.data(), *vyx = gv.yx.data(), *vyy = gv.yy.data();
  const double *hxx = gh.xx.data(), *hxy = gh.xy.data(), *hyx = gh.yx.data(), *hyy = gh.yy.data();
  const double *px = gp.x.data(), *py = gp.y.data();
  double *ox = out.x.data(), *oy = out.y.data();
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for if (par)
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ax = vx[i] - wx[i], ay = vy[i] - wy[i];
    ox[i] = -(ax * vxx[i] + ay * vxy[i]) - px[i] + hx[i] * hxx[i] + hy[i] * hxy[i];
    oy[i] = -(ax * vyx[i] + ay * vyy[i]) - py[i] + hx[i] * hyx[i] + hy[i] * hyy[i];
  }
  return out;
}

VectorField induction_rhs(const VectorField& v, const VectorField& W, const VectorField& h,
                          const Gradients& gv, const Gradients& gh, Exec exec) {
  const Eigen::Index n = v.x.size();
  VectorField out{Field(v.x.rows(), v.x.cols()), Field(v.x.rows(), v.x.cols())};
  const double *vx = v.x.data(), *vy = v.y.data(), *wx = W.x.data(), *wy = W.y.data();
  const double *hx = h.x.data(), *hy = h.y.data();
  const double *vxx = gv.xx.data(), *vxy = gv.xy.data(), *vyx = gv.yx.data(), *vyy = gv.yy.data();
  const double *hxx = gh.xx.data(), *hxy = gh.xy.data(), *hyx = gh.yx.data(), *hyy = gh.yy.data();
  double *ox = out.x.data(), *oy = out.y.data();
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for if (par)
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ax = vx[i] - wx[i], ay = vy[i] - wy[i];
    ox[i] = -(ax * hxx[i] + ay * hxy[i]) + hx[i] * vxx[i] + hy[i] * vxy[i];
    oy[i] = -(ax * hyx[i] + ay * hyy[i]) + hx[i] * vyx[i] + hy[i] * vyy[i];
  }
  return out;
}

FieldSampler::FieldSampler(const MappedDomainGrid& grid, const std::vector<const Field*>& fields)
    : grid_(&grid) {
  const auto& fft = row_fft(grid.nr(), grid.nt());
  for (const Field* f : fields) coeffs_.push_back(fft.forward(*f));
}

void FieldSampler::sample(double rho, double theta, double* out) const {
  const int nr = grid_->nr(), M = grid_->nt() / 2;
  const auto& ops = grid_->radial();
  const bool disk = grid_->kind() == DomainKind::PlasmaDisk;
  const int nangles = disk ? 2 : 1;
  CVec e[2];
  double nyq[2];
  for (int a = 0; a < nangles; ++a) {
    const double ang = theta + a * kPi;
    e[a].resize(M + 1);
    for (int k = 0; k <= M; ++k) e[a](k) = std::polar(2.0, double(k) * ang);
    nyq[a] = std::cos(M * ang);
  }
  const double xi = disk ? rho : 1.0 - 2.0 * (rho - 1.0) / (grid_->wall_radius() - 1.0);
  Vec line(ops.line_x.size());
  for (size_t f = 0; f < coeffs_.size(); ++f) {
    const CField& c = coeffs_[f];
    for (int a = 0; a < nangles; ++a) {
      for (int i = 0; i < nr; ++i) {
        double s = c(i, 0).real() + c(i, M).real() * nyq[a];
        for (int k = 1; k < M; ++k) s += (c(i, k) * e[a](k)).real();
        if (a == 0)
          line(i) = s;
        else
          line(line.size() - 1 - i) = s;
      }
    }
    out[f] = cheb_bary_eval(ops.line_x, ops.bary, line, xi);
  }
}

MarkerSample sample_at_points(const MappedDomainGrid& grid, const std::vector<const Field*>& fields,
                              const std::vector<double>& px, const std::vector<double>& py,
                              Exec exec) {
  FieldSampler sampler(grid, fields);
  const int nf = sampler.n_fields();
  const int np = static_cast<int>(px.size());
  MarkerSample out;
  out.values.assign(static_cast<size_t>(np) * nf, 0.0);
  int misses = 0;
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for reduction(+ : misses) schedule(dynamic, 8) if (par)
  for (int i = 0; i < np; ++i) {
    double r, th;
    if (!grid.locate(px[i], py[i], r, th)) {
      ++misses;
      // Clamp onto the interface along the ray through the point.
      th = std::atan2(py[i], px[i]);
      r = 1.0;
    }
    sampler.sample(r, th, &out.values[static_cast<size_t>(i) * nf]);
  }
  out.misses = misses;
  return out;
}

}  // namespace pvmhd
