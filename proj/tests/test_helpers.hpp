// Shared generators for the unit and property tests.
#pragma once

#include <random>

#include "pvmhd/scenario.hpp"

namespace pvmhd::testing {

inline double inf_norm(const Vec& v) { return v.lpNorm<Eigen::Infinity>(); }
inline double inf_norm(const Field& f) { return f.lpNorm<Eigen::Infinity>(); }

inline Vec cos_mode(const Vec& th, double k, double phase = 0.0) {
  return (k * th.array() + phase).cos().matrix();
}

// Trigonometric polynomial with modes 0..kmax and uniform random coefficients.
inline Vec random_trig(std::mt19937_64& rng, const Vec& th, int kmax) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec f = Vec::Zero(th.size());
  for (int k = 0; k <= kmax; ++k)
    f += (u(rng) * (k * th.array()).cos() + u(rng) * (k * th.array()).sin()).matrix();
  return f;
}

// Height with |c_k| ~ k^-4 for k = 1..kmax, scaled to the given H^{5/2} norm.
inline Vec random_height(std::mt19937_64& rng, int n_modes, int kmax, double target) {
  std::normal_distribution<double> nd;
  CVec c = CVec::Zero(n_modes + 1);
  for (int k = 1; k <= kmax; ++k) c(k) = cplx(nd(rng), nd(rng)) / std::pow(double(k), 4.0);
  Vec phi = fourier_synth(c, 2 * n_modes);
  return phi * (target / sobolev_norm(phi, 2.5));
}

}  // namespace pvmhd::testing
