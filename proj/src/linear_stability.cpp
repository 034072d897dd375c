#include "pvmhd/linear_stability.hpp"

#include <cmath>

namespace pvmhd {

CircularBackground reduce_profiles(const CircularBackground& bg) {
  CircularBackground out = bg;
  auto reduce = [](const std::function<double(double)>& f, const char* name) {
    // Vorticity of the rotation f(r) r e_theta is 2 f + r f'.
    const int n = 64;
    double lo = 1e300, hi = -1e300, f1 = f(1.0);
    for (int i = 1; i <= n; ++i) {
      const double r = double(i) / n, d = 1e-5 * r;
      const double w = 2.0 * f(r) + r * (f(r + d) - f(r - d)) / (2.0 * d);
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    if (hi - lo > 1e-6 * (1.0 + std::abs(f1)))
      throw UnsupportedProfileError(std::string(name) +
                                    " profile has non-constant vorticity; no reduced mode equation");
    return 0.5 * (hi + lo) / 2.0;
  };
  if (bg.V_profile) out.V = reduce(bg.V_profile, "velocity");
  if (bg.h_profile) out.h = reduce(bg.h_profile, "magnetic");
  out.V_profile = nullptr;
  out.h_profile = nullptr;
  return out;
}

std::string to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::Stable: return "stable";
    case StabilityClass::Neutral: return "neutral";
    default: return "unstable";
  }
}

DispersionResult dispersion_roots(int k, const CircularBackground& bg_in) {
  if (k == 0) throw InvalidWavenumberError("dispersion relation needs k != 0");
  CircularBackground bg = reduce_profiles(bg_in);
  if (bg.J0 != 0.0) throw Error("dispersion relation assumes no vacuum field (J0 = 0)");
  const double ak = std::abs(k);
  const double shift = (ak - 1.0) * bg.V / ak;
  const double rhs = (ak - 1.0) * (bg.alpha * (ak + 1.0) + bg.h * bg.h - bg.V * bg.V / ak);
  const double disc = rhs / ak;
  const cplx root = std::sqrt(cplx(disc, 0.0));
  DispersionResult res;
  res.k = k;
  res.c_plus = shift + root;
  res.c_minus = shift - root;
  const double im = std::max(res.c_plus.imag(), res.c_minus.imag());
  res.sigma = ak * std::max(im, 0.0);
  const double scale = 1.0 + std::abs(res.c_plus) + std::abs(res.c_minus);
  const double tol = 1e-10 * scale;
  if (std::abs(disc) <= tol * tol || std::abs(root) <= tol)
    res.cls = StabilityClass::Neutral;
  else if (im > tol)
    res.cls = StabilityClass::Unstable;
  else
    res.cls = StabilityClass::Stable;
  double resid = 0.0;
  for (cplx c : {res.c_plus, res.c_minus}) {
    cplx lhs = ak * (c - shift) * (c - shift);
    resid = std::max(resid, std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-300));
  }
  res.residual = (std::abs(rhs) == 0.0) ? 0.0 : resid;
  return res;
}

double stability_threshold(int k, double alpha, double V) {
  const double ak = std::abs(k);
  if (ak <= 1.0) return 0.0;
  return std::max(0.0, V * V / ak - alpha * (ak + 1.0));
}

std::vector<DispersionResult> growth_rate_curve(const CircularBackground& bg,
                                                const std::vector<int>& ks) {
  std::vector<DispersionResult> out(ks.size());
#pragma omp parallel for
  for (size_t i = 0; i < ks.size(); ++i) out[i] = dispersion_roots(ks[i], bg);
  return out;
}

ModeProfile mode_profile(int k, cplx c, double V, double h, int samples, double s_min) {
  if (k == 0) throw InvalidWavenumberError("mode profile needs k != 0");
  if (std::abs(c - V) <= 1e-14 * (1.0 + std::abs(c)))
    throw DegenerateModeError("phase velocity equals the rotation rate");
  const double ak = std::abs(k);
  if (!(s_min < 0.0)) s_min = -36.0 / ak;
  ModeProfile p;
  const int N = samples - 1;
  Vec x = cheb_points(N);
  // s in [s_min, 0]; x = 1 maps to s = 0.
  p.s = (0.5 * s_min * (1.0 - x.array())).matrix();
  p.z.resize(samples);
  for (int i = 0; i < samples; ++i) p.z(i) = (V - c) * std::exp(ak * p.s(i));
  // ds/dx = -s_min/2.
  Mat D = cheb_diff(N) * (-2.0 / s_min);
  CVec zss = (D * D).cast<cplx>() * p.z;
  p.ode_residual = (zss - ak * ak * p.z).cwiseAbs().maxCoeff() / p.z.cwiseAbs().maxCoeff();
  p.z0 = p.z(0);
  p.z_far = p.z(samples - 1);
  p.vr.resize(samples);
  p.hr.resize(samples);
  for (int i = 0; i < samples; ++i) {
    const double r = std::exp(p.s(i));
    p.vr(i) = p.z(i) / r;
    p.hr(i) = h * p.vr(i) / (V - c);
  }
  return p;
}

}  // namespace pvmhd
