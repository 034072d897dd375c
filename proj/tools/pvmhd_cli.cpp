// pvmhd: dispersion maps, nonlinear runs, alpha sweeps and snapshot diagnostics.
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "pvmhd/scenario.hpp"

namespace fs = std::filesystem;
using namespace pvmhd;

namespace {

constexpr int kExitValidation = 2;

struct CommonOpts {
  std::string config;
  std::string out = "out";
  int modes = 0;
  long long seed = -1;
  int jobs = 1;
};

ScenarioSpec load_spec(const CommonOpts& o) {
  ScenarioSpec s;
  if (!o.config.empty()) {
    json j;
    try {
      j = read_json(o.config);
    } catch (const std::exception& e) {
      throw ValidationError({"config: " + std::string(e.what())});
    }
    s = spec_from_json(j);
  }
  if (o.modes > 0) s.n_modes = o.modes;
  if (o.seed >= 0) s.seed = static_cast<std::uint64_t>(o.seed);
  if (auto errs = validate(s); !errs.empty()) throw ValidationError(errs);
  return s;
}

void add_common(CLI::App* app, CommonOpts& o, bool with_jobs) {
  app->add_option("--config", o.config, "scenario JSON file");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--modes", o.modes, "override resolution.n_modes")->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "override the random seed")->check(CLI::NonNegativeNumber);
  if (with_jobs) app->add_option("--jobs", o.jobs, "parallel sweep members")->check(CLI::PositiveNumber);
}

int cmd_dispersion(const CommonOpts& o) {
  ScenarioSpec s = load_spec(o);
  DispersionSweep sw = run_dispersion(s, o.out);
  std::printf("%zu rows written to %s\n", sw.rows.size(), o.out.c_str());
  return 0;
}

int cmd_simulate(const CommonOpts& o) {
  ScenarioSpec s = load_spec(o);
  fs::create_directories(o.out);
  write_json((fs::path(o.out) / "spec.json").string(), to_json(s));
  SimulationOutcome r = run_simulation(s, o.out);
  std::printf("status=%s t=%.6g max_amp=%.6e growth=%.6g drift/t=%.3e div=%.3e\n",
              to_string(r.status).c_str(), r.final_state.t, r.max_amplitude, r.growth_rate,
              r.energy_drift_per_time, r.max_divergence);
  if (!r.message.empty()) std::printf("%s\n", r.message.c_str());
  return static_cast<int>(r.status);
}

int cmd_sweep(const CommonOpts& o, std::vector<double> alphas) {
  ScenarioSpec s = load_spec(o);
  if (!alphas.empty()) s.alphas = std::move(alphas);
  AlphaSweepReport r = run_alpha_sweep(s, o.jobs, o.out);
  for (size_t i = 0; i < r.alphas.size(); ++i)
    std::printf("alpha=%-10.6g deviation=%.6e\n", r.alphas[i], r.final_deviation[i]);
  for (double p : r.orders) std::printf("order=%.3f\n", p);
  std::printf("monotone=%s partial=%s\n", r.monotone ? "yes" : "no", r.partial ? "yes" : "no");
  for (const auto& f : r.failures) std::printf("failed: %s\n", f.c_str());
  return r.partial ? static_cast<int>(RunStatus::Breakdown) : 0;
}

int cmd_diagnose(const std::string& snapshot, const std::string& out, int order) {
  json j;
  FlowState s;
  EvolutionParams p;
  try {
    j = read_json(snapshot);
    s = snapshot_state(j);
    p = snapshot_params(j);
  } catch (const std::exception& e) {
    throw ValidationError({"snapshot: " + std::string(e.what())});
  }
  Stepper stepper(p);
  std::vector<int> orders{0};
  if (order > 0) orders.push_back(order);
  EnergyReport rep = energy_report(stepper, s, orders);
  CurvatureIdentityReport ci = curvature_identity(stepper, s);
  GridPtr disk = stepper.plasma_grid(s.phi);
  json res{{"report", to_json(rep)},
           {"curvature_identity",
            {{"residual", ci.residual}, {"scale", ci.scale}, {"printed_residual", ci.printed_residual}}},
           {"divergence_v", disk->divergence(s.v).lpNorm<Eigen::Infinity>()},
           {"divergence_h", disk->divergence(s.h).lpNorm<Eigen::Infinity>()},
           {"modal_amplitudes", modal_amplitudes(s.phi, 16)}};
  if (!out.empty()) {
    fs::create_directories(out);
    write_json((fs::path(out) / "diagnostics.json").string(), res);
  }
  std::cout << res.dump(2) << "\n";
  return 0;
}

int cmd_selftest() {
  int failed = 0;
  for (const auto& c : selftest_oracles()) {
    std::printf("%s  %-55s %.3e (tol %.1e)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.tolerance);
    failed += !c.pass;
  }
  return failed ? static_cast<int>(RunStatus::ToleranceBreach) : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plasma-vacuum interface solver"};
  app.require_subcommand(1);

  CommonOpts disp_o, sim_o, sweep_o;
  auto* disp = app.add_subcommand("dispersion", "linear dispersion sweep, CSV and SVG stability map");
  add_common(disp, disp_o, false);
  auto* sim = app.add_subcommand("simulate", "nonlinear run with trajectory, snapshots and final report");
  add_common(sim, sim_o, false);
  auto* sweep = app.add_subcommand("sweep-alpha", "vanishing surface tension comparison");
  add_common(sweep, sweep_o, true);
  std::vector<double> alphas;
  sweep->add_option("--alpha", alphas, "surface tension values (overrides the config list)");

  std::string snapshot, diag_out;
  int order = 0;
  auto* diag = app.add_subcommand("diagnose", "energy, monitors and curvature identity of a stored snapshot");
  diag->add_option("snapshot", snapshot, "snapshot JSON")->required()->check(CLI::ExistingFile);
  diag->add_option("--out", diag_out, "directory for diagnostics.json");
  diag->add_option("--order", order, "also evaluate the higher energy of this order")->check(CLI::NonNegativeNumber);

  auto* self = app.add_subcommand("selftest", "closed-form oracle suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*disp) return cmd_dispersion(disp_o);
    if (*sim) return cmd_simulate(sim_o);
    if (*sweep) return cmd_sweep(sweep_o, alphas);
    if (*diag) return cmd_diagnose(snapshot, diag_out, order);
    if (*self) return cmd_selftest();
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation failed:\n");
    for (const auto& p : e.problems()) std::fprintf(stderr, "  %s\n", p.c_str());
    return kExitValidation;
  } catch (const BreakdownError& e) {
    std::fprintf(stderr, "breakdown: %s\n", e.what());
    return static_cast<int>(RunStatus::Breakdown);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(RunStatus::Breakdown);
  }
  return 0;
}
