// Nonlinear free-boundary time stepping: interface height, velocity and
// magnetic field advanced in arbitrary-Lagrangian-Eulerian form on the mapped
// disk grid, pressure recovered by an elliptic solve per stage.
#pragma once

#include <array>
#include <vector>

#include "pvmhd/div_curl.hpp"
#include "pvmhd/kernels.hpp"
#include "pvmhd/linear_stability.hpp"

namespace pvmhd {

// Uniform wall current J(t) = J0 + rate * t.
struct WallCurrentSchedule {
  double J0 = 0.0;
  double rate = 0.0;
  double value(double t) const { return J0 + rate * t; }
  double derivative(double) const { return rate; }
  bool active() const { return J0 != 0.0 || rate != 0.0; }
};

struct EvolutionParams {
  double alpha = 0.0;
  double wall_radius = 2.0;
  WallCurrentSchedule wall;
  int nr = 24;      // radial nodes of the plasma grid
  int nr_vac = 24;  // radial nodes of the vacuum grid
  bool dealias = true;
  int project_every = 1;  // 0 disables the div/curl re-projection
  double cfl = 0.25;
  LambdaBall ball{3.0, 1.0};
  double min_jacobian = 0.2;
  Exec exec = Exec::Parallel;
};

struct FlowState {
  double t = 0.0;
  Vec phi;  // interface height at the 2*n_modes nodes
  VectorField v, h;
  int n_modes() const { return static_cast<int>(phi.size()) / 2; }
};

struct Rates {
  Vec dphi;
  VectorField dv, dh;
  VectorField mesh_velocity;
};

// Geometry, fields and pressures belonging to one state.
struct ResolvedState {
  GridPtr disk, vac;  // vac is null when no wall current is active
  VacuumField vacuum;
  Gradients gv, gh;
  Field p;
  Rates rates;
};

class BreakdownError : public Error {
 public:
  BreakdownError(const std::string& what, FlowState last) : Error(what), state_(std::move(last)) {}
  const FlowState& state() const { return state_; }

 private:
  FlowState state_;
};

struct FlowMapTracker;

class Stepper {
 public:
  explicit Stepper(EvolutionParams params);
  const EvolutionParams& params() const { return p_; }

  GridPtr plasma_grid(const Vec& phi) const;
  GridPtr vacuum_grid(const Vec& phi) const;
  // Vacuum field of the current geometry at time t (zero without wall current).
  VacuumField vacuum_field(const MappedDomainGrid& annulus, double t) const;

  // Delta p = -tr((grad v)^2 - (grad h)^2), p = alpha kappa + |H|^2 / 2 on the interface.
  Field total_pressure(const MappedDomainGrid& disk, const Gradients& gv, const Gradients& gh,
                       const Vec& H2_trace, SolveReport* report = nullptr);

  ResolvedState resolve(const FlowState& s);
  Rates rhs(const FlowState& s) { return resolve(s).rates; }
  // One RK4 step followed by de-aliasing, optional projection and breakdown checks.
  // Markers, when given, are advanced with the same stage velocities.
  FlowState step(const FlowState& s, double dt, FlowMapTracker* markers = nullptr);
  double stable_dt(const FlowState& s) const;
  // Rebuild v from its curl and interface flux, h from its curl.
  FlowState project(const FlowState& s);
  void check_breakdown(const FlowState& s, const MappedDomainGrid& disk) const;
  int steps_taken() const { return steps_; }

 private:
  FlowState axpy(const FlowState& s, double a, const Rates& r) const;
  EvolutionParams p_;
  Field p_guess_;
  int steps_ = 0;
};

// Initial data.
FlowState rotating_state(int n_modes, int nr, const Vec& phi, const CircularBackground& bg);
// Linear eigenmode with phi = eps cos(k theta); the root with the larger
// imaginary part (or c_plus when both are real) is used.
FlowState eigenmode_seed(int n_modes, int nr, const CircularBackground& bg, int k, double eps,
                         cplx* root = nullptr);
// Rotating background plus amp * V exp(-n^(1/4)) w_n with w_n = (r^n cos n theta, -r^n sin n theta).
FlowState flow_map_seed(int n_modes, int nr, const CircularBackground& bg, int n, double amp);
double flow_map_seed_amplitude(const CircularBackground& bg, int n, double amp);
// Rotation plus the strain beta (x, -y) on phi = eps cos(k theta); h = 0.
FlowState strain_seed(int n_modes, int nr, double V, double beta, int k, double eps);

// Lagrangian markers on a square lattice inside the disk.
struct FlowMapTracker {
  int side = 0;          // lattice is side x side
  double spacing = 0.0;  // lattice spacing
  std::vector<int> index;  // lattice slot of each marker
  std::vector<double> x, y;
  std::vector<double> times;
  std::vector<std::array<double, 4>> norms;  // H^0..H^3 of the map at each record
  int clipped = 0;

  static FlowMapTracker lattice(double radius, int side);
  int size() const { return static_cast<int>(x.size()); }
  // Finite-difference Sobolev norms of the current map, cumulative in k.
  std::array<double, 4> sobolev_norms() const;
  void record(double t) {
    times.push_back(t);
    norms.push_back(sobolev_norms());
  }
};
FlowState track_flow_map(FlowMapTracker& tracker, Stepper& stepper, const FlowState& s, double dt);

// Transport of the Elsasser vorticities curl(v -+ h) along v +- h.
struct ElsasserReport {
  double residual_plus = 0.0;   // D^+ w^- + B[d(v+h), d(v-h)]
  double residual_minus = 0.0;  // D^- w^+ + B[d(v-h), d(v+h)]
  double scale = 0.0;
  double relative() const { return std::max(residual_plus, residual_minus) / std::max(scale, 1e-300); }
};
// Central difference over three consecutive states with a common step.
ElsasserReport elsasser_transport_check(Stepper& stepper, const FlowState& prev,
                                        const FlowState& mid, const FlowState& next);
// sum_j (d_x a_j d_j b_y - d_y a_j d_j b_x)
Field elsasser_bilinear(const Gradients& a, const Gradients& b);

// Second material derivative of the interface curvature.
struct CurvatureIdentityReport {
  Vec lhs_direct;   // second-order law with D_t v from the momentum equation
  Vec lhs_fd;       // time differences at fixed nodes plus tangential slip (empty if unavailable)
  Vec rhs;          // surface-tension, field and sign terms plus remainders
  Vec rhs_printed;  // same with the printed multiplier-pressure remainder terms
  Vec st, mf, rt, remainder;
  double residual = 0.0;          // |lhs_direct - rhs|_inf
  double fd_residual = 0.0;       // |lhs_fd - rhs|_inf
  double printed_residual = 0.0;  // |lhs_direct - rhs_printed|_inf
  double scale = 0.0;             // max of the individual term sizes
};
// Instantaneous terms of one state.
CurvatureIdentityReport curvature_identity(Stepper& stepper, const FlowState& s);
// Adds time-differenced lhs; states are consecutive with a common step and
// the identity is evaluated at the middle one (3 or 5 states).
CurvatureIdentityReport curvature_identity_residual(Stepper& stepper,
                                                    const std::vector<FlowState>& states);
// First-order curvature law: -n . d_s^2 v - 2 kappa tau . d_s v.
Vec curvature_rate(const CurveGeometry& geom, const Vec& vx, const Vec& vy);

}  // namespace pvmhd
