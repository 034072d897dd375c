#include "pvmhd/mapped_grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace pvmhd {

std::shared_ptr<const RadialOperators> radial_operators(DomainKind kind, int nr, double R) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const RadialOperators>> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (kind == DomainKind::PlasmaDisk) R = 0.0;
  auto key = std::make_tuple(static_cast<int>(kind), nr, R);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  auto ops = std::make_shared<RadialOperators>();
  ops->kind = kind;
  ops->nr = nr;
  ops->wall_radius = R;
  if (kind == DomainKind::PlasmaDisk) {
    const int N = 2 * nr - 1;
    Vec x = cheb_points(N);
    Mat D = cheb_diff(N);
    Mat D2 = D * D;
    ops->rho = x.head(nr);
    ops->A1 = D.topLeftCorner(nr, nr);
    ops->A2 = D2.topLeftCorner(nr, nr);
    ops->B1.resize(nr, nr);
    ops->B2.resize(nr, nr);
    for (int i = 0; i < nr; ++i)
      for (int k = 0; k < nr; ++k) {
        ops->B1(i, k) = D(i, N - k);
        ops->B2(i, k) = D2(i, N - k);
      }
    Vec w = cheb_cardinal_integrals(N, 0.0, 1.0);
    ops->quad.resize(nr);
    for (int i = 0; i < nr; ++i) ops->quad(i) = w(i) - w(N - i);
    ops->line_x = x;
    ops->bary = cheb_bary_weights(N);
  } else {
    const int N = nr - 1;
    Vec x = cheb_points(N);
    Mat D = cheb_diff(N) * (-2.0 / (R - 1.0));
    ops->rho = (1.0 + (R - 1.0) * (1.0 - x.array()) / 2.0).matrix();
    ops->A1 = D;
    ops->A2 = D * D;
    ops->quad = cheb_cardinal_integrals(N, -1.0, 1.0) * ((R - 1.0) / 2.0);
    ops->line_x = x;
    ops->bary = cheb_bary_weights(N);
  }
  cache[key] = ops;
  return ops;
}

namespace {

// Column rotation by half a turn: values at theta + pi.
Field half_turn(const Field& f) {
  const int m = static_cast<int>(f.cols()) / 2;
  Field s(f.rows(), f.cols());
  s.leftCols(m) = f.rightCols(m);
  s.rightCols(m) = f.leftCols(m);
  return s;
}

}  // namespace

Field MappedDomainGrid::d_rho(const Field& f) const {
  Field out = radial_->A1 * f;
  if (kind_ == DomainKind::PlasmaDisk) out.noalias() += radial_->B1 * half_turn(f);
  return out;
}

Field MappedDomainGrid::d_rho2(const Field& f) const {
  Field out = radial_->A2 * f;
  if (kind_ == DomainKind::PlasmaDisk) out.noalias() += radial_->B2 * half_turn(f);
  return out;
}

std::shared_ptr<const MappedDomainGrid> MappedDomainGrid::plasma(const Vec& phi, int nr) {
  auto g = std::shared_ptr<MappedDomainGrid>(new MappedDomainGrid());
  g->kind_ = DomainKind::PlasmaDisk;
  g->nr_ = nr;
  g->nt_ = static_cast<int>(phi.size());
  g->radial_ = radial_operators(DomainKind::PlasmaDisk, nr, 0.0);
  g->phi_ = phi;
  g->geom_ = evaluate_geometry(phi);
  g->gx_ = fourier_coeffs(g->geom_.x);
  g->gy_ = fourier_coeffs(g->geom_.y);

  const int M = g->nt_ / 2;
  const Vec& rho = g->rho();
  const auto& fft = row_fft(nr, g->nt_);
  CField cx(nr, M + 1), cy(nr, M + 1);
  Field* outs[2][6] = {{&g->X_, &g->Xr_, &g->Xt_, nullptr, nullptr, nullptr},
                       {&g->Y_, &g->Yr_, &g->Yt_, nullptr, nullptr, nullptr}};
  Field Xrr, Yrr, Xrt, Yrt, Xtt, Ytt;
  outs[0][3] = &Xrr;
  outs[0][4] = &Xrt;
  outs[0][5] = &Xtt;
  outs[1][3] = &Yrr;
  outs[1][4] = &Yrt;
  outs[1][5] = &Ytt;
  const CVec* coeffs[2] = {&g->gx_, &g->gy_};
  for (int comp = 0; comp < 2; ++comp) {
    for (int which = 0; which < 6; ++which) {
      CField c(nr, M + 1);
      for (int i = 0; i < nr; ++i) {
        const double r = rho(i);
        for (int k = 0; k <= M; ++k) {
          const double kk = k;
          const double pk = std::pow(r, kk);
          const double pk1 = k >= 1 ? std::pow(r, kk - 1) : 0.0;
          const double pk2 = k >= 2 ? std::pow(r, kk - 2) : 0.0;
          const bool nyq = (k == M);
          cplx val;
          switch (which) {
            case 0: val = pk; break;
            case 1: val = kk * pk1; break;
            case 2: val = nyq ? 0.0 : cplx(0, kk) * pk; break;
            case 3: val = kk * (kk - 1) * pk2; break;
            case 4: val = nyq ? 0.0 : cplx(0, kk) * kk * pk1; break;
            default: val = -kk * kk * pk; break;
          }
          c(i, k) = (*coeffs[comp])(k) * val;
        }
      }
      *outs[comp][which] = fft.inverse(c);
    }
  }
  g->finish_metric(Xrr, Yrr, Xrt, Yrt, Xtt, Ytt);
  return g;
}

std::shared_ptr<const MappedDomainGrid> MappedDomainGrid::vacuum(const Vec& phi, int nr, double R) {
  auto g = std::shared_ptr<MappedDomainGrid>(new MappedDomainGrid());
  g->kind_ = DomainKind::VacuumAnnulus;
  g->nr_ = nr;
  g->nt_ = static_cast<int>(phi.size());
  g->R_ = R;
  g->radial_ = radial_operators(DomainKind::VacuumAnnulus, nr, R);
  g->phi_ = phi;
  g->geom_ = evaluate_geometry(phi);
  if (g->geom_.r.maxCoeff() >= R) throw IllConditionedMapError("interface touches the wall");
  g->gx_ = fourier_coeffs(g->geom_.x);
  g->gy_ = fourier_coeffs(g->geom_.y);

  const int M = g->nt_ / 2;
  const Vec& rho = g->rho();
  // Wall data: the identity map R e_r.
  CVec Gx = CVec::Zero(M + 1), Gy = CVec::Zero(M + 1);
  Gx(1) = 0.5 * R;
  Gy(1) = cplx(0.0, -0.5 * R);
  // Mode k: a rho^-k + b (rho/R)^k; mode 0: a + b log rho.
  auto solve_mode = [&](cplx gin, cplx gout, int k, cplx& a, cplx& b) {
    if (k == 0) {
      a = gin;
      b = (gout - gin) / std::log(R);
      return;
    }
    const double q = std::pow(R, -double(k));
    const double d = 1.0 - q * q;
    a = (gin - q * gout) / d;
    b = (gout - q * gin) / d;
  };
  g->ax_.resize(M + 1);
  g->bx_.resize(M + 1);
  g->ay_.resize(M + 1);
  g->by_.resize(M + 1);
  for (int k = 0; k <= M; ++k) {
    solve_mode(g->gx_(k), Gx(k), k, g->ax_(k), g->bx_(k));
    solve_mode(g->gy_(k), Gy(k), k, g->ay_(k), g->by_(k));
  }
  const auto& fft = row_fft(nr, g->nt_);
  Field Xrr, Yrr, Xrt, Yrt, Xtt, Ytt;
  Field* outs[2][6] = {{&g->X_, &g->Xr_, &g->Xt_, &Xrr, &Xrt, &Xtt},
                       {&g->Y_, &g->Yr_, &g->Yt_, &Yrr, &Yrt, &Ytt}};
  for (int comp = 0; comp < 2; ++comp) {
    const CVec& A = comp == 0 ? g->ax_ : g->ay_;
    const CVec& B = comp == 0 ? g->bx_ : g->by_;
    for (int which = 0; which < 6; ++which) {
      CField c(nr, M + 1);
      for (int i = 0; i < nr; ++i) {
        const double r = rho(i);
        for (int k = 0; k <= M; ++k) {
          const double kk = k;
          cplx v0, v1, v2;
          if (k == 0) {
            v0 = A(0) + B(0) * std::log(r);
            v1 = B(0) / r;
            v2 = -B(0) / (r * r);
          } else {
            const double e1 = std::pow(r, -kk), e2 = std::pow(r / R, kk);
            v0 = A(k) * e1 + B(k) * e2;
            v1 = A(k) * (-kk * e1 / r) + B(k) * (kk * e2 / r);
            v2 = A(k) * (kk * (kk + 1) * e1 / (r * r)) + B(k) * (kk * (kk - 1) * e2 / (r * r));
          }
          const bool nyq = (k == M);
          cplx ik = nyq ? 0.0 : cplx(0.0, kk);
          cplx val;
          switch (which) {
            case 0: val = v0; break;
            case 1: val = v1; break;
            case 2: val = ik * v0; break;
            case 3: val = v2; break;
            case 4: val = ik * v1; break;
            default: val = -kk * kk * v0; break;
          }
          c(i, k) = val;
        }
      }
      *outs[comp][which] = fft.inverse(c);
    }
  }
  g->finish_metric(Xrr, Yrr, Xrt, Yrt, Xtt, Ytt);
  return g;
}

void MappedDomainGrid::finish_metric(const Field& Xrr, const Field& Yrr, const Field& Xrt,
                                     const Field& Yrt, const Field& Xtt, const Field& Ytt) {
  det_ = Xr_.cwiseProduct(Yt_) - Xt_.cwiseProduct(Yr_);
  Field ratio = det_;
  for (int i = 0; i < nr_; ++i) ratio.row(i) /= rho()(i);
  min_ratio_ = ratio.minCoeff();
  if (!(min_ratio_ > 0.0)) throw IllConditionedMapError("coordinate map is not a diffeomorphism");
  Field inv = det_.cwiseInverse();
  rx_ = Yt_.cwiseProduct(inv);
  ry_ = -Xt_.cwiseProduct(inv);
  tx_ = -Yr_.cwiseProduct(inv);
  ty_ = Xr_.cwiseProduct(inv);
  grr_ = rx_.cwiseAbs2() + ry_.cwiseAbs2();
  grt_ = rx_.cwiseProduct(tx_) + ry_.cwiseProduct(ty_);
  gtt_ = tx_.cwiseAbs2() + ty_.cwiseAbs2();
  auto contract = [&](const Field& ax, const Field& ay) {
    Field s_rr = ax.cwiseProduct(Xrr) + ay.cwiseProduct(Yrr);
    Field s_rt = ax.cwiseProduct(Xrt) + ay.cwiseProduct(Yrt);
    Field s_tt = ax.cwiseProduct(Xtt) + ay.cwiseProduct(Ytt);
    return Field(-(grr_.cwiseProduct(s_rr) + 2.0 * grt_.cwiseProduct(s_rt) +
                   gtt_.cwiseProduct(s_tt)));
  };
  lap_r_ = contract(rx_, ry_);
  lap_t_ = contract(tx_, ty_);
  W_.resize(nr_, nt_);
  const double dth = 2.0 * kPi / nt_;
  for (int i = 0; i < nr_; ++i) W_.row(i) = det_.row(i) * (dth * radial_->quad(i));
}

Field MappedDomainGrid::evaluate(const std::function<double(double, double)>& f) const {
  Field out(nr_, nt_);
  for (int i = 0; i < nr_; ++i)
    for (int j = 0; j < nt_; ++j) out(i, j) = f(X_(i, j), Y_(i, j));
  return out;
}

void MappedDomainGrid::gradient(const Field& f, Field& fx, Field& fy) const {
  Field fr = d_rho(f);
  Field ft = d_theta(f);
  fx = rx_.cwiseProduct(fr) + tx_.cwiseProduct(ft);
  fy = ry_.cwiseProduct(fr) + ty_.cwiseProduct(ft);
}

VectorField MappedDomainGrid::gradient(const Field& f) const {
  VectorField g;
  gradient(f, g.x, g.y);
  return g;
}

Field MappedDomainGrid::laplacian(const Field& f) const {
  Field fr = d_rho(f);
  Field frr = d_rho2(f);
  Field ft = theta_derivative(f, 1);
  Field ftt = theta_derivative(f, 2);
  Field frt = theta_derivative(fr, 1);
  return grr_.cwiseProduct(frr) + 2.0 * grt_.cwiseProduct(frt) + gtt_.cwiseProduct(ftt) +
         lap_r_.cwiseProduct(fr) + lap_t_.cwiseProduct(ft);
}

Field MappedDomainGrid::divergence(const VectorField& v) const {
  Field ax, ay, bx, by;
  gradient(v.x, ax, ay);
  gradient(v.y, bx, by);
  return ax + by;
}

Field MappedDomainGrid::curl(const VectorField& v) const {
  Field ax, ay, bx, by;
  gradient(v.x, ax, ay);
  gradient(v.y, bx, by);
  return bx - ay;
}

Vec MappedDomainGrid::interface_normal_derivative(const Field& f) const {
  // Only row 0 is needed: radial derivative from the first operator row.
  Eigen::RowVectorXd fr = radial_->A1.row(0) * f;
  if (kind_ == DomainKind::PlasmaDisk) fr += radial_->B1.row(0) * half_turn(f);
  Vec ft = periodic_derivative(f.row(0).transpose());
  Vec fx = rx_.row(0).transpose().cwiseProduct(fr.transpose()) +
           tx_.row(0).transpose().cwiseProduct(ft);
  Vec fy = ry_.row(0).transpose().cwiseProduct(fr.transpose()) +
           ty_.row(0).transpose().cwiseProduct(ft);
  return geom_.nx.cwiseProduct(fx) + geom_.ny.cwiseProduct(fy);
}

Vec MappedDomainGrid::wall_normal_derivative(const Field& f) const {
  if (kind_ != DomainKind::VacuumAnnulus) throw Error("wall_normal_derivative: not an annulus");
  const int last = nr_ - 1;
  Eigen::RowVectorXd fr = radial_->A1.row(last) * f;
  Vec ft = periodic_derivative(f.row(last).transpose());
  Vec out(nt_);
  for (int j = 0; j < nt_; ++j) {
    const double th = 2.0 * kPi * j / nt_;
    double fx = rx_(last, j) * fr(j) + tx_(last, j) * ft(j);
    double fy = ry_(last, j) * fr(j) + ty_(last, j) * ft(j);
    out(j) = std::cos(th) * fx + std::sin(th) * fy;
  }
  return out;
}

void MappedDomainGrid::map_point(double r, double th, double& x, double& y, double& xr, double& yr,
                                 double& xt, double& yt) const {
  const int M = nt_ / 2;
  x = y = xr = yr = xt = yt = 0.0;
  for (int k = 0; k <= M; ++k) {
    const double kk = k;
    const double wgt = (k == 0 || k == M) ? 1.0 : 2.0;
    cplx e = std::polar(1.0, kk * th);
    cplx v0x, v1x, v0y, v1y;
    if (kind_ == DomainKind::PlasmaDisk) {
      const double pk = std::pow(r, kk), pk1 = k >= 1 ? kk * std::pow(r, kk - 1) : 0.0;
      v0x = gx_(k) * pk;
      v1x = gx_(k) * pk1;
      v0y = gy_(k) * pk;
      v1y = gy_(k) * pk1;
    } else if (k == 0) {
      v0x = ax_(0) + bx_(0) * std::log(r);
      v1x = bx_(0) / r;
      v0y = ay_(0) + by_(0) * std::log(r);
      v1y = by_(0) / r;
    } else {
      const double e1 = std::pow(r, -kk), e2 = std::pow(r / R_, kk);
      v0x = ax_(k) * e1 + bx_(k) * e2;
      v1x = (-ax_(k) * e1 + bx_(k) * e2) * (kk / r);
      v0y = ay_(k) * e1 + by_(k) * e2;
      v1y = (-ay_(k) * e1 + by_(k) * e2) * (kk / r);
    }
    if (k == M) {
      // Nyquist term acts as a real cosine.
      const double c = std::cos(kk * th), s = std::sin(kk * th);
      x += v0x.real() * c;
      y += v0y.real() * c;
      xr += v1x.real() * c;
      yr += v1y.real() * c;
      xt += -kk * v0x.real() * s;
      yt += -kk * v0y.real() * s;
      continue;
    }
    cplx ik(0.0, kk);
    x += wgt * (v0x * e).real();
    y += wgt * (v0y * e).real();
    xr += wgt * (v1x * e).real();
    yr += wgt * (v1y * e).real();
    xt += wgt * (ik * v0x * e).real();
    yt += wgt * (ik * v0y * e).real();
  }
}

bool MappedDomainGrid::locate(double px, double py, double& r, double& th) const {
  th = std::atan2(py, px);
  const double pr = std::hypot(px, py);
  if (kind_ == DomainKind::PlasmaDisk) {
    CVec c = fourier_coeffs(geom_.r);
    r = pr / fourier_eval(c, th);
  } else {
    r = pr;
  }
  for (int it = 0; it < 60; ++it) {
    double x, y, xr, yr, xt, yt;
    map_point(r, th, x, y, xr, yr, xt, yt);
    const double ex = x - px, ey = y - py;
    if (std::hypot(ex, ey) < 1e-14) break;
    const double det = xr * yt - xt * yr;
    if (std::abs(det) < 1e-300) return false;
    double dr = (yt * ex - xt * ey) / det;
    double dt = (-yr * ex + xr * ey) / det;
    // Damp large steps near the center where the polar chart degenerates.
    const double lim = 0.25;
    const double scale = std::max(1.0, std::max(std::abs(dr), std::abs(dt)) / lim);
    r -= dr / scale;
    th -= dt / scale;
    if (kind_ == DomainKind::PlasmaDisk && r < 0.0) {
      r = -r;
      th += kPi;
    }
  }
  double x, y, xr, yr, xt, yt;
  map_point(r, th, x, y, xr, yr, xt, yt);
  if (std::hypot(x - px, y - py) > 1e-10) return false;
  if (kind_ == DomainKind::PlasmaDisk) return r <= 1.0 + 1e-12;
  return r >= 1.0 - 1e-12 && r <= R_ + 1e-12;
}

double MappedDomainGrid::interpolate_reference(const Field& f, double r, double th) const {
  const auto& fft = row_fft(nr_, nt_);
  CField c = fft.forward(f);
  const int M = nt_ / 2;
  auto eval_rows = [&](double angle) {
    Vec out(nr_);
    CVec e(M + 1);
    for (int k = 0; k <= M; ++k) e(k) = std::polar(1.0, double(k) * angle);
    for (int i = 0; i < nr_; ++i) {
      double s = c(i, 0).real() + c(i, M).real() * std::cos(M * angle);
      for (int k = 1; k < M; ++k) s += 2.0 * (c(i, k) * e(k)).real();
      out(i) = s;
    }
    return out;
  };
  const auto& ops = *radial_;
  if (kind_ == DomainKind::PlasmaDisk) {
    Vec a = eval_rows(th), b = eval_rows(th + kPi);
    const int N = 2 * nr_ - 1;
    Vec line(N + 1);
    for (int k = 0; k < nr_; ++k) {
      line(k) = a(k);
      line(N - k) = b(k);
    }
    return cheb_bary_eval(ops.line_x, ops.bary, line, r);
  }
  Vec a = eval_rows(th);
  const double xi = 1.0 - 2.0 * (r - 1.0) / (R_ - 1.0);
  return cheb_bary_eval(ops.line_x, ops.bary, a, xi);
}

VectorField MappedDomainGrid::extend_radial_motion(const Vec& dphi) const {
  const int M = nt_ / 2;
  const Vec& th = geom_.theta;
  Vec bx = dphi.cwiseProduct(th.array().cos().matrix());
  Vec by = dphi.cwiseProduct(th.array().sin().matrix());
  CVec cx = fourier_coeffs(bx), cy = fourier_coeffs(by);
  const auto& fft = row_fft(nr_, nt_);
  CField ex(nr_, M + 1), ey(nr_, M + 1);
  for (int i = 0; i < nr_; ++i) {
    const double r = rho()(i);
    for (int k = 0; k <= M; ++k) {
      double prof;
      if (kind_ == DomainKind::PlasmaDisk) {
        prof = std::pow(r, double(k));
      } else if (k == 0) {
        prof = 1.0 - std::log(r) / std::log(R_);
      } else {
        const double q = std::pow(R_, -double(k));
        const double e1 = std::pow(r, -double(k)), e2 = std::pow(r / R_, double(k));
        prof = (e1 - q * e2) / (1.0 - q * q);
      }
      ex(i, k) = cx(k) * prof;
      ey(i, k) = cy(k) * prof;
    }
  }
  VectorField w;
  w.x = fft.inverse(ex);
  w.y = fft.inverse(ey);
  return w;
}

}  // namespace pvmhd
