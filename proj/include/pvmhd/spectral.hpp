// Fourier and Chebyshev building blocks shared by the interface and domain code.
#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pvmhd {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
// Nodal data on a polar-type grid: rows are radial nodes, columns angular nodes.
using Field = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CField = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kPi = 3.14159265358979323846;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateCurveError : Error {
  using Error::Error;
};
struct IllConditionedMapError : Error {
  using Error::Error;
};
struct OutOfBallError : Error {
  using Error::Error;
};
struct OperatorNotPsdError : Error {
  using Error::Error;
};
struct InvalidWavenumberError : Error {
  using Error::Error;
};
struct DegenerateModeError : Error {
  using Error::Error;
};
struct UnsupportedProfileError : Error {
  using Error::Error;
};

// Real <-> half-complex transforms of length n (n even) applied to every row of a
// Field. Coefficients are normalized so f(theta_j) = sum_k c_k e^{ik theta_j}
// with c_{-k} = conj(c_k); column k of the output holds c_k for k = 0..n/2.
class RowFFT {
 public:
  RowFFT(int rows, int n);
  ~RowFFT();
  RowFFT(const RowFFT&) = delete;
  RowFFT& operator=(const RowFFT&) = delete;

  int rows() const { return rows_; }
  int n() const { return n_; }
  CField forward(const Field& f) const;
  Field inverse(const CField& c) const;

 private:
  int rows_;
  int n_;
  void* fwd_ = nullptr;
  void* inv_ = nullptr;
};

// Shared plan cache keyed by (rows, n); plans are created under a lock and are
// safe to execute concurrently afterwards.
const RowFFT& row_fft(int rows, int n);

// 1D helpers on a single periodic sample vector of even length.
CVec fourier_coeffs(const Vec& f);
Vec fourier_synth(const CVec& c, int n);
Vec periodic_derivative(const Vec& f, int order = 1);
Field theta_derivative(const Field& f, int order = 1);
// Evaluate the trigonometric interpolant of f at an arbitrary angle.
double fourier_eval(const CVec& c, double theta);
// Zero all modes above keep (inclusive bound); keep < n/2 also zeroes Nyquist.
Vec fourier_truncate(const Vec& f, int keep);
Field fourier_truncate_rows(const Field& f, int keep);

// Chebyshev extreme points x_k = cos(k pi / N), k = 0..N, and the standard
// collocation differentiation matrix.
Vec cheb_points(int N);
Mat cheb_diff(int N);
// Weights w_k = integral over [a, b] of the k-th Lagrange cardinal function.
Vec cheb_cardinal_integrals(int N, double a, double b);
// Barycentric weights for the extreme points.
Vec cheb_bary_weights(int N);
double cheb_bary_eval(const Vec& x, const Vec& w, const Vec& f, double xi);

// Restarted right-preconditioned GMRES on a matrix-free operator.
struct GmresReport {
  int iterations = 0;
  double residual = 0.0;  // final relative residual
  bool converged = false;
};
using LinearMap = std::function<void(const Vec&, Vec&)>;
GmresReport gmres(const LinearMap& A, const LinearMap& Minv, const Vec& b, Vec& x,
                  double tol = 1e-13, int restart = 60, int max_iter = 400);

}  // namespace pvmhd
