// Linear modes of circular rotating backgrounds.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pvmhd/spectral.hpp"

namespace pvmhd {

struct CircularBackground {
  double V = 0.0;      // angular velocity: v = V r e_theta
  double h = 0.0;      // plasma field rate: h = h r e_theta
  double alpha = 0.0;  // surface tension
  double R = 2.0;      // wall radius
  double J0 = 0.0;     // uniform wall current
  // Optional radial profiles V(r), h(r). Only profiles with constant vorticity
  // and current are admissible; they reduce to the constants above.
  std::function<double(double)> V_profile, h_profile;

  double vorticity() const { return 2.0 * V; }
  double current() const { return 2.0 * h; }
};

// Replaces admissible profiles by their constants; throws UnsupportedProfileError otherwise.
CircularBackground reduce_profiles(const CircularBackground& bg);

enum class StabilityClass { Stable, Neutral, Unstable };
std::string to_string(StabilityClass c);

struct DispersionResult {
  int k = 0;
  cplx c_plus, c_minus;
  double sigma = 0.0;  // |k| max Im c
  StabilityClass cls = StabilityClass::Stable;
  // Relative residual of both roots in the quadratic.
  double residual = 0.0;
};

// |k| (c - (|k|-1) V/|k|)^2 = (|k|-1)(alpha(|k|+1) + h^2 - V^2/|k|)
DispersionResult dispersion_roots(int k, const CircularBackground& bg);
double stability_threshold(int k, double alpha, double V);
std::vector<DispersionResult> growth_rate_curve(const CircularBackground& bg,
                                                const std::vector<int>& ks);

struct ModeProfile {
  Vec s;              // s = log r samples, s <= 0
  CVec z;             // (V - c) e^{|k| s}
  double ode_residual = 0.0;  // max |z'' - k^2 z| / max |z| from Chebyshev differentiation
  cplx z0;            // z(0)
  cplx z_far;         // z at the most negative sample
  CVec vr, hr;        // radial velocity and field amplitudes at r = e^s
};
// A non-negative s_min picks a window where e^{|k| s_min} is below roundoff.
ModeProfile mode_profile(int k, cplx c, double V, double h = 0.0, int samples = 65,
                         double s_min = 0.0);

}  // namespace pvmhd
