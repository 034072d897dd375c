// Scenario configuration and the experiment drivers behind the command line.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pvmhd/io.hpp"

namespace pvmhd {

inline constexpr int kScenarioSchemaVersion = 1;

struct ScenarioSpec {
  int schema_version = kScenarioSchemaVersion;
  std::string name = "scenario";
  // background
  double V = 1.0, h = 0.0, alpha = 0.0, wall_radius = 2.0, J0 = 0.0, J_rate = 0.0;
  // perturbation: none | eigenmode | cosine | flow_map | strain | random
  std::string perturbation = "eigenmode";
  int mode = 4;
  double amplitude = 1e-5;
  int seed_index = 8;        // flow_map: n of w_n
  double seed_scale = 1e-2;  // flow_map: multiplies V exp(-n^(1/4)) w_n
  double strain = 0.0;       // strain: beta of beta (x, -y)
  // resolution and time
  int n_modes = 64, nr = 24, nr_vac = 24;
  double dt = 0.01, t_end = 1.0;
  int sample_every = 10, snapshot_every = 0;
  int project_every = 1;
  bool dealias = true;
  double cfl = 0.25;
  double lambda_s = 3.0, lambda_delta = 1.0, min_jacobian = 0.2;
  // tolerances checked after a run
  double energy_drift_tol = 1e-6;  // relative drift per unit time, only without wall current
  double divergence_tol = 1e-6;
  // flow map
  bool track_flow_map = false;
  int marker_side = 21;
  double marker_radius = 0.9;
  // dispersion sweep: sweep is "h2" or "alpha"
  int k_min = 2, k_max = 32;
  std::string sweep = "h2";
  double sweep_min = 0.0, sweep_max = 1.0;
  int sweep_points = 41;
  // alpha sweep
  std::vector<double> alphas;
  double deviation_sigma = 0.0;
  std::uint64_t seed = 0;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Field-level problems; empty when the scenario is valid.
std::vector<std::string> validate(const ScenarioSpec& spec);
ScenarioSpec spec_from_json(const json& j);  // throws ValidationError
json to_json(const ScenarioSpec& spec);

EvolutionParams evolution_params(const ScenarioSpec& spec);
CircularBackground background(const ScenarioSpec& spec);
FlowState initial_state(const ScenarioSpec& spec);

enum class RunStatus { Clean = 0, Breakdown = 3, ToleranceBreach = 4 };
std::string to_string(RunStatus s);

struct SimulationOutcome {
  RunStatus status = RunStatus::Clean;
  std::string message;
  FlowState final_state;
  std::vector<double> times;
  std::vector<std::vector<double>> amplitudes;  // cosine amplitudes k = 1..16 per sample
  std::vector<double> energy;
  double max_amplitude = 0.0;           // max over samples and k of the amplitudes
  double growth_rate = 0.0;             // least-squares slope of log amp(mode)
  double energy_drift_per_time = 0.0;
  double max_divergence = 0.0;          // max |div v|, |div h| relative to field scale
  std::optional<FlowMapTracker> flow_map;
  EnergyReport final_report;
};
// out_dir empty: nothing is written.
SimulationOutcome run_simulation(const ScenarioSpec& spec, const std::string& out_dir = "");

struct DispersionSweep {
  std::vector<DispersionRow> rows;
  std::vector<std::pair<double, double>> boundary;  // (k, critical parameter)
};
DispersionSweep run_dispersion(const ScenarioSpec& spec, const std::string& out_dir = "");

struct AlphaSweepReport {
  std::vector<double> alphas;          // sorted descending, reference alpha = 0 excluded
  std::vector<double> final_deviation; // |phi_alpha - phi_0|_{H^sigma} at t_end
  std::vector<double> times;
  std::vector<std::vector<double>> curves;  // per alpha, deviation at each sample
  std::vector<double> orders;          // log ratios between consecutive alphas
  bool monotone = false;
  bool partial = false;
  std::vector<std::string> failures;
};
AlphaSweepReport run_alpha_sweep(const ScenarioSpec& spec, int jobs = 1, const std::string& out_dir = "");

struct OracleCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};
// Quick closed-form oracle suite.
std::vector<OracleCheck> selftest_oracles();

// Least-squares slope of log(y) against t.
double log_slope(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace pvmhd
