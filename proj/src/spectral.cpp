#include "pvmhd/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace pvmhd {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RowFFT::RowFFT(int rows, int n) : rows_(rows), n_(n) {
  if (n < 2 || n % 2 != 0) throw Error("RowFFT: length must be even and >= 2");
  std::lock_guard<std::mutex> lock(plan_mutex());
  const int nc = n / 2 + 1;
  double* in = fftw_alloc_real(static_cast<size_t>(rows) * n);
  fftw_complex* out = fftw_alloc_complex(static_cast<size_t>(rows) * nc);
  int len[1] = {n};
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fwd_ = fftw_plan_many_dft_r2c(1, len, rows, in, nullptr, 1, n, out, nullptr, 1, nc, flags);
  inv_ = fftw_plan_many_dft_c2r(1, len, rows, out, nullptr, 1, nc, in, nullptr, 1, n,
                                flags | FFTW_DESTROY_INPUT);
  fftw_free(in);
  fftw_free(out);
  if (!fwd_ || !inv_) throw Error("RowFFT: plan creation failed");
}

RowFFT::~RowFFT() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (inv_) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

CField RowFFT::forward(const Field& f) const {
  const int nc = n_ / 2 + 1;
  Field in = f;  // FFTW may not modify r2c input, but keep our own buffer anyway
  CField out(rows_, nc);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  out /= static_cast<double>(n_);
  return out;
}

Field RowFFT::inverse(const CField& c) const {
  CField buf = c;  // c2r destroys its input
  Field out(rows_, n_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inv_), reinterpret_cast<fftw_complex*>(buf.data()),
                       out.data());
  return out;
}

const RowFFT& row_fft(int rows, int n) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<RowFFT>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& slot = cache[{rows, n}];
  if (!slot) slot = std::make_unique<RowFFT>(rows, n);
  return *slot;
}

CVec fourier_coeffs(const Vec& f) {
  Field row = f.transpose();
  CField c = row_fft(1, static_cast<int>(f.size())).forward(row);
  return c.row(0).transpose();
}

Vec fourier_synth(const CVec& c, int n) {
  CField row = CField::Zero(1, n / 2 + 1);
  const int m = std::min<int>(static_cast<int>(c.size()), n / 2 + 1);
  row.leftCols(m) = c.head(m).transpose();
  row(0, 0) = row(0, 0).real();
  row(0, n / 2) = row(0, n / 2).real();
  return row_fft(1, n).inverse(row).row(0).transpose();
}

Field theta_derivative(const Field& f, int order) {
  const int n = static_cast<int>(f.cols());
  const auto& fft = row_fft(static_cast<int>(f.rows()), n);
  CField c = fft.forward(f);
  const int half = n / 2;
  for (int k = 0; k <= half; ++k) {
    cplx mult = std::pow(cplx(0.0, static_cast<double>(k)), order);
    // Odd derivatives of the Nyquist mode are not representable on the grid.
    if (k == half && order % 2 == 1) mult = 0.0;
    c.col(k) *= mult;
  }
  return fft.inverse(c);
}

Vec periodic_derivative(const Vec& f, int order) {
  Field row = f.transpose();
  return theta_derivative(row, order).row(0).transpose();
}

double fourier_eval(const CVec& c, double theta) {
  const int half = static_cast<int>(c.size()) - 1;
  double s = c(0).real();
  for (int k = 1; k < half; ++k) s += 2.0 * (c(k) * std::polar(1.0, k * theta)).real();
  s += c(half).real() * std::cos(half * theta);
  return s;
}

Field fourier_truncate_rows(const Field& f, int keep) {
  const int n = static_cast<int>(f.cols());
  const auto& fft = row_fft(static_cast<int>(f.rows()), n);
  CField c = fft.forward(f);
  for (int k = keep + 1; k <= n / 2; ++k) c.col(k).setZero();
  return fft.inverse(c);
}

Vec fourier_truncate(const Vec& f, int keep) {
  Field row = f.transpose();
  return fourier_truncate_rows(row, keep).row(0).transpose();
}

Vec cheb_points(int N) {
  Vec x(N + 1);
  for (int k = 0; k <= N; ++k) x(k) = std::cos(kPi * k / N);
  return x;
}

Mat cheb_diff(int N) {
  Vec x = cheb_points(N);
  Vec c(N + 1);
  for (int k = 0; k <= N; ++k) c(k) = ((k == 0 || k == N) ? 2.0 : 1.0) * ((k % 2) ? -1.0 : 1.0);
  Mat D = Mat::Zero(N + 1, N + 1);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j)
      if (i != j) D(i, j) = c(i) / c(j) / (x(i) - x(j));
  // Negative-sum trick for the diagonal keeps constants in the kernel exactly.
  for (int i = 0; i <= N; ++i) D(i, i) = -D.row(i).sum();
  return D;
}

Vec cheb_cardinal_integrals(int N, double a, double b) {
  // Values -> Chebyshev coefficients (DCT-I), then integrate each T_n over [a, b].
  Vec x = cheb_points(N);
  Mat C(N + 1, N + 1);
  for (int n = 0; n <= N; ++n)
    for (int k = 0; k <= N; ++k) {
      double wk = (k == 0 || k == N) ? 0.5 : 1.0;
      double sn = (n == 0 || n == N) ? 0.5 : 1.0;
      C(n, k) = 2.0 / N * sn * wk * std::cos(kPi * n * k / N);
    }
  auto prim = [](int n, double t) {
    if (n == 0) return t;
    if (n == 1) return 0.5 * t * t;
    double th = std::acos(std::clamp(t, -1.0, 1.0));
    return 0.5 * (std::cos((n + 1) * th) / (n + 1) - std::cos((n - 1) * th) / (n - 1));
  };
  Vec I(N + 1);
  for (int n = 0; n <= N; ++n) I(n) = prim(n, b) - prim(n, a);
  return C.transpose() * I;
}

Vec cheb_bary_weights(int N) {
  Vec w(N + 1);
  for (int k = 0; k <= N; ++k) w(k) = ((k % 2) ? -1.0 : 1.0) * ((k == 0 || k == N) ? 0.5 : 1.0);
  return w;
}

double cheb_bary_eval(const Vec& x, const Vec& w, const Vec& f, double xi) {
  double num = 0.0, den = 0.0;
  for (int k = 0; k < x.size(); ++k) {
    double d = xi - x(k);
    if (std::abs(d) < 1e-15) return f(k);
    double t = w(k) / d;
    num += t * f(k);
    den += t;
  }
  return num / den;
}

GmresReport gmres(const LinearMap& A, const LinearMap& Minv, const Vec& b, Vec& x, double tol,
                  int restart, int max_iter) {
  GmresReport rep;
  const int n = static_cast<int>(b.size());
  if (x.size() != n) x = Vec::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero();
    rep.converged = true;
    return rep;
  }
  Vec Ax(n), w(n), z(n);
  while (rep.iterations < max_iter) {
    A(x, Ax);
    Vec r = b - Ax;
    double beta = r.norm();
    rep.residual = beta / bnorm;
    if (rep.residual <= tol) {
      rep.converged = true;
      return rep;
    }
    const int m = restart;
    Mat V(n, m + 1);
    Mat H = Mat::Zero(m + 1, m);
    Vec cs(m), sn(m), g = Vec::Zero(m + 1);
    V.col(0) = r / beta;
    g(0) = beta;
    int j = 0;
    for (; j < m && rep.iterations < max_iter; ++j) {
      ++rep.iterations;
      Minv(V.col(j), z);
      A(z, w);
      for (int i = 0; i <= j; ++i) {
        H(i, j) = V.col(i).dot(w);
        w -= H(i, j) * V.col(i);
      }
      // One reorthogonalization pass; the operators here are far from normal.
      for (int i = 0; i <= j; ++i) {
        double h = V.col(i).dot(w);
        H(i, j) += h;
        w -= h * V.col(i);
      }
      H(j + 1, j) = w.norm();
      if (H(j + 1, j) > 0) V.col(j + 1) = w / H(j + 1, j);
      for (int i = 0; i < j; ++i) {
        double t = cs(i) * H(i, j) + sn(i) * H(i + 1, j);
        H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
        H(i, j) = t;
      }
      double d = std::hypot(H(j, j), H(j + 1, j));
      cs(j) = H(j, j) / d;
      sn(j) = H(j + 1, j) / d;
      H(j, j) = d;
      H(j + 1, j) = 0.0;
      g(j + 1) = -sn(j) * g(j);
      g(j) = cs(j) * g(j);
      rep.residual = std::abs(g(j + 1)) / bnorm;
      if (rep.residual <= tol || H(j, j) == 0.0) {
        ++j;
        break;
      }
    }
    Vec y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    Vec upd = V.leftCols(j) * y;
    Minv(upd, z);
    x += z;
    if (rep.residual <= tol) {
      // Confirm with the true residual; restarts continue if roundoff drifted.
      A(x, Ax);
      rep.residual = (b - Ax).norm() / bnorm;
      if (rep.residual <= 10 * tol) {
        rep.converged = true;
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace pvmhd
