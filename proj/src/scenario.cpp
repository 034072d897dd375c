#include "pvmhd/scenario.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace pvmhd {

namespace fs = std::filesystem;

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& p : v) s += (s.empty() ? "" : "; ") + p;
  return s;
}

class SectionReader {
 public:
  SectionReader(const json& j, std::string prefix, std::vector<std::string>& errs)
      : j_(j), prefix_(std::move(prefix)), errs_(errs) {
    if (!j_.is_object()) errs_.push_back(prefix_ + ": expected an object");
  }
  template <class T>
  void get(const char* key, T& dst) {
    known_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return;
    try {
      dst = j_.at(key).get<T>();
    } catch (const json::exception&) {
      errs_.push_back(prefix_ + key + ": wrong type");
    }
  }
  const json* section(const char* key) {
    known_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return nullptr;
    return &j_.at(key);
  }
  ~SectionReader() {
    if (!j_.is_object()) return;
    for (const auto& item : j_.items())
      if (!known_.count(item.key())) errs_.push_back(prefix_ + item.key() + ": unknown field");
  }

 private:
  const json& j_;
  std::string prefix_;
  std::vector<std::string>& errs_;
  std::set<std::string> known_;
};

double capillary_dt(double cfl, int n_modes, double alpha) {
  const double dth = kPi / n_modes;
  return alpha > 0.0 ? 2.0 * cfl * std::pow(dth, 1.5) / std::sqrt(alpha) : 1e300;
}

double field_divergence(const MappedDomainGrid& disk, const FlowState& s) {
  const double scale = std::max({1.0, s.v.x.lpNorm<Eigen::Infinity>(), s.v.y.lpNorm<Eigen::Infinity>(),
                                 s.h.x.lpNorm<Eigen::Infinity>(), s.h.y.lpNorm<Eigen::Infinity>()});
  const double dv = disk.divergence(s.v).lpNorm<Eigen::Infinity>();
  const double dh = disk.divergence(s.h).lpNorm<Eigen::Infinity>();
  return std::max(dv, dh) / scale;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : Error("invalid scenario: " + join(problems)), problems_(std::move(problems)) {}

std::vector<std::string> validate(const ScenarioSpec& s) {
  std::vector<std::string> e;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) e.push_back(msg);
  };
  need(s.schema_version == kScenarioSchemaVersion,
       "schema_version: expected " + std::to_string(kScenarioSchemaVersion));
  need(std::isfinite(s.V) && std::isfinite(s.h), "background: V and h must be finite");
  need(s.alpha >= 0.0, "background.alpha: must be >= 0");
  need(s.wall_radius > 1.5, "background.wall_radius: must exceed 1 + 0.5 (interface clearance)");
  need(std::isfinite(s.J0) && std::isfinite(s.J_rate), "background: J0 and J_rate must be finite");
  static const std::set<std::string> kinds{"none", "eigenmode", "cosine", "flow_map", "strain", "random"};
  need(kinds.count(s.perturbation) > 0, "perturbation.type: unknown kind '" + s.perturbation + "'");
  need(s.mode >= 1 && s.mode < s.n_modes, "perturbation.mode: must be in [1, n_modes)");
  need(s.amplitude >= 0.0 && s.amplitude < 0.5, "perturbation.amplitude: must be in [0, 0.5)");
  need(s.seed_index >= 1, "perturbation.seed_index: must be >= 1");
  if (s.perturbation == "eigenmode")
    need(s.J0 == 0.0 && s.J_rate == 0.0, "perturbation.type: eigenmode seeds need a zero wall current");
  need(s.n_modes >= 4 && s.n_modes % 2 == 0, "resolution.n_modes: must be even and >= 4");
  need(s.nr >= 4 && s.nr <= 128, "resolution.nr: must be in [4, 128]");
  need(s.nr_vac >= 4 && s.nr_vac <= 128, "resolution.nr_vac: must be in [4, 128]");
  need(s.dt > 0.0, "time.dt: must be > 0");
  need(s.t_end >= 0.0, "time.t_end: must be >= 0");
  need(s.sample_every >= 1, "time.sample_every: must be >= 1");
  need(s.snapshot_every >= 0, "time.snapshot_every: must be >= 0");
  need(s.project_every >= 0, "numerics.project_every: must be >= 0");
  need(s.cfl > 0.0 && s.cfl <= 1.0, "numerics.cfl: must be in (0, 1]");
  need(s.lambda_s > 0.5 && s.lambda_delta > 0.0, "numerics: lambda_s > 0.5 and lambda_delta > 0 required");
  need(s.min_jacobian > 0.0 && s.min_jacobian < 1.0, "numerics.min_jacobian: must be in (0, 1)");
  if (s.dt > 0.0 && s.alpha > 0.0 && s.n_modes >= 4)
    need(s.dt <= capillary_dt(s.cfl, s.n_modes, s.alpha),
         "time.dt: exceeds the capillary limit 2 cfl dtheta^1.5 / sqrt(alpha) = " +
             fmt_double(capillary_dt(s.cfl, s.n_modes, s.alpha)));
  need(s.energy_drift_tol > 0.0 && s.divergence_tol > 0.0, "tolerances: must be > 0");
  need(s.marker_side >= 5, "flow_map.marker_side: must be >= 5");
  need(s.marker_radius > 0.0 && s.marker_radius < 1.0, "flow_map.marker_radius: must be in (0, 1)");
  need(s.k_min >= 1 && s.k_max >= s.k_min, "dispersion: need 1 <= k_min <= k_max");
  need(s.sweep == "h2" || s.sweep == "alpha", "dispersion.sweep: must be 'h2' or 'alpha'");
  need(s.sweep_points >= 2 && s.sweep_max >= s.sweep_min && s.sweep_min >= 0.0,
       "dispersion: need points >= 2 and 0 <= min <= max");
  for (double a : s.alphas) need(a >= 0.0 && std::isfinite(a), "alpha_sweep.alphas: entries must be >= 0");
  need(s.deviation_sigma >= 0.0, "alpha_sweep.sigma: must be >= 0");
  return e;
}

ScenarioSpec spec_from_json(const json& j) {
  ScenarioSpec s;
  std::vector<std::string> errs;
  {
    SectionReader top(j, "", errs);
    top.get("schema_version", s.schema_version);
    top.get("name", s.name);
    top.get("seed", s.seed);
    if (auto* b = top.section("background")) {
      SectionReader r(*b, "background.", errs);
      r.get("V", s.V);
      r.get("h", s.h);
      r.get("alpha", s.alpha);
      r.get("wall_radius", s.wall_radius);
      r.get("J0", s.J0);
      r.get("J_rate", s.J_rate);
    }
    if (auto* p = top.section("perturbation")) {
      SectionReader r(*p, "perturbation.", errs);
      r.get("type", s.perturbation);
      r.get("mode", s.mode);
      r.get("amplitude", s.amplitude);
      r.get("seed_index", s.seed_index);
      r.get("seed_scale", s.seed_scale);
      r.get("strain", s.strain);
    }
    if (auto* p = top.section("resolution")) {
      SectionReader r(*p, "resolution.", errs);
      r.get("n_modes", s.n_modes);
      r.get("nr", s.nr);
      r.get("nr_vac", s.nr_vac);
    }
    if (auto* p = top.section("time")) {
      SectionReader r(*p, "time.", errs);
      r.get("dt", s.dt);
      r.get("t_end", s.t_end);
      r.get("sample_every", s.sample_every);
      r.get("snapshot_every", s.snapshot_every);
    }
    if (auto* p = top.section("numerics")) {
      SectionReader r(*p, "numerics.", errs);
      r.get("project_every", s.project_every);
      r.get("dealias", s.dealias);
      r.get("cfl", s.cfl);
      r.get("lambda_s", s.lambda_s);
      r.get("lambda_delta", s.lambda_delta);
      r.get("min_jacobian", s.min_jacobian);
    }
    if (auto* p = top.section("tolerances")) {
      SectionReader r(*p, "tolerances.", errs);
      r.get("energy_drift", s.energy_drift_tol);
      r.get("divergence", s.divergence_tol);
    }
    if (auto* p = top.section("flow_map")) {
      SectionReader r(*p, "flow_map.", errs);
      r.get("enabled", s.track_flow_map);
      r.get("marker_side", s.marker_side);
      r.get("marker_radius", s.marker_radius);
    }
    if (auto* p = top.section("dispersion")) {
      SectionReader r(*p, "dispersion.", errs);
      r.get("k_min", s.k_min);
      r.get("k_max", s.k_max);
      r.get("sweep", s.sweep);
      r.get("min", s.sweep_min);
      r.get("max", s.sweep_max);
      r.get("points", s.sweep_points);
    }
    if (auto* p = top.section("alpha_sweep")) {
      SectionReader r(*p, "alpha_sweep.", errs);
      r.get("alphas", s.alphas);
      r.get("sigma", s.deviation_sigma);
    }
  }
  for (auto& e : validate(s)) errs.push_back(std::move(e));
  if (!errs.empty()) throw ValidationError(errs);
  return s;
}

json to_json(const ScenarioSpec& s) {
  return json{
      {"schema_version", s.schema_version},
      {"name", s.name},
      {"seed", s.seed},
      {"background",
       {{"V", s.V}, {"h", s.h}, {"alpha", s.alpha}, {"wall_radius", s.wall_radius}, {"J0", s.J0},
        {"J_rate", s.J_rate}}},
      {"perturbation",
       {{"type", s.perturbation}, {"mode", s.mode}, {"amplitude", s.amplitude},
        {"seed_index", s.seed_index}, {"seed_scale", s.seed_scale}, {"strain", s.strain}}},
      {"resolution", {{"n_modes", s.n_modes}, {"nr", s.nr}, {"nr_vac", s.nr_vac}}},
      {"time",
       {{"dt", s.dt}, {"t_end", s.t_end}, {"sample_every", s.sample_every},
        {"snapshot_every", s.snapshot_every}}},
      {"numerics",
       {{"project_every", s.project_every}, {"dealias", s.dealias}, {"cfl", s.cfl},
        {"lambda_s", s.lambda_s}, {"lambda_delta", s.lambda_delta}, {"min_jacobian", s.min_jacobian}}},
      {"tolerances", {{"energy_drift", s.energy_drift_tol}, {"divergence", s.divergence_tol}}},
      {"flow_map",
       {{"enabled", s.track_flow_map}, {"marker_side", s.marker_side},
        {"marker_radius", s.marker_radius}}},
      {"dispersion",
       {{"k_min", s.k_min}, {"k_max", s.k_max}, {"sweep", s.sweep}, {"min", s.sweep_min},
        {"max", s.sweep_max}, {"points", s.sweep_points}}},
      {"alpha_sweep", {{"alphas", s.alphas}, {"sigma", s.deviation_sigma}}}};
}

EvolutionParams evolution_params(const ScenarioSpec& s) {
  EvolutionParams p;
  p.alpha = s.alpha;
  p.wall_radius = s.wall_radius;
  p.wall.J0 = s.J0;
  p.wall.rate = s.J_rate;
  p.nr = s.nr;
  p.nr_vac = s.nr_vac;
  p.dealias = s.dealias;
  p.project_every = s.project_every;
  p.cfl = s.cfl;
  p.ball = {s.lambda_s, s.lambda_delta};
  p.min_jacobian = s.min_jacobian;
  return p;
}

CircularBackground background(const ScenarioSpec& s) {
  CircularBackground bg;
  bg.V = s.V;
  bg.h = s.h;
  bg.alpha = s.alpha;
  bg.R = s.wall_radius;
  bg.J0 = s.J0;
  return bg;
}

FlowState initial_state(const ScenarioSpec& s) {
  const int M = s.n_modes;
  CircularBackground bg = background(s);
  ReferenceFrame frame(M, s.wall_radius);
  const Vec th = frame.thetas();
  if (s.perturbation == "eigenmode") {
    bg.J0 = 0.0;
    return eigenmode_seed(M, s.nr, bg, s.mode, s.amplitude);
  }
  if (s.perturbation == "flow_map") return flow_map_seed(M, s.nr, bg, s.seed_index, s.seed_scale);
  if (s.perturbation == "strain") {
    FlowState st = strain_seed(M, s.nr, s.V, s.strain, s.mode, s.amplitude);
    if (s.h != 0.0) {
      GridPtr disk = MappedDomainGrid::plasma(st.phi, s.nr);
      st.h = recover_magnetic(*disk, disk->constant(2.0 * s.h));
    }
    return st;
  }
  Vec phi = Vec::Zero(2 * M);
  if (s.perturbation == "cosine") phi = s.amplitude * (double(s.mode) * th.array()).cos().matrix();
  if (s.perturbation == "random") {
    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int k = 2; k <= std::min(8, M / 3); ++k) {
      const double a = nd(rng) * s.amplitude / (k * k), b = nd(rng) * s.amplitude / (k * k);
      phi += (a * (double(k) * th.array()).cos() + b * (double(k) * th.array()).sin()).matrix();
    }
  }
  return rotating_state(M, s.nr, phi, bg);
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Clean: return "clean";
    case RunStatus::Breakdown: return "breakdown";
    default: return "tolerance-breach";
  }
}

double log_slope(const std::vector<double>& t, const std::vector<double>& y) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  int n = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    const double ly = std::log(y[i]);
    st += t[i];
    sy += ly;
    stt += t[i] * t[i];
    sty += t[i] * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  const double den = n * stt - st * st;
  return den != 0.0 ? (n * sty - st * sy) / den : 0.0;
}

SimulationOutcome run_simulation(const ScenarioSpec& spec, const std::string& out_dir) {
  if (auto errs = validate(spec); !errs.empty()) throw ValidationError(errs);
  const bool write = !out_dir.empty();
  if (write) fs::create_directories(out_dir);
  Stepper stepper(evolution_params(spec));
  SimulationOutcome out;
  FlowState s = initial_state(spec);
  const int kmax = std::max(16, spec.mode);
  std::optional<TrajectoryWriter> traj;
  if (write) traj.emplace((fs::path(out_dir) / "trajectory.csv").string(), kmax);
  if (spec.track_flow_map) out.flow_map = FlowMapTracker::lattice(spec.marker_radius, spec.marker_side);

  std::vector<double> mode_amp;
  auto sample = [&](const FlowState& st) {
    out.times.push_back(st.t);
    auto amps = modal_amplitudes(st.phi, kmax);
    for (double a : amps) out.max_amplitude = std::max(out.max_amplitude, a);
    mode_amp.push_back(amps[spec.mode - 1]);
    out.amplitudes.push_back(amps);
    PhysicalEnergy e = physical_energy(stepper, st);
    out.energy.push_back(e.total());
    if (traj) traj->append(st.t, st.phi, e, stability_monitors(stepper, st));
  };

  const long nsteps = std::lround(spec.t_end / spec.dt);
  sample(s);
  try {
    for (long n = 1; n <= nsteps; ++n) {
      s = out.flow_map ? track_flow_map(*out.flow_map, stepper, s, spec.dt) : stepper.step(s, spec.dt);
      if (n % spec.sample_every == 0 || n == nsteps) sample(s);
      if (write && spec.snapshot_every > 0 && n % spec.snapshot_every == 0) {
        std::ostringstream name;
        name << "snapshot_" << n << ".json";
        write_json((fs::path(out_dir) / name.str()).string(), snapshot_json(s, stepper.params()));
      }
    }
  } catch (const BreakdownError& e) {
    out.status = RunStatus::Breakdown;
    out.message = e.what();
    s = e.state();
  }
  out.final_state = s;
  out.growth_rate = log_slope(out.times, mode_amp);
  if (out.times.size() >= 2) {
    DriftReport d = conservation_check(out.times, out.energy);
    out.energy_drift_per_time = d.drift_per_time;
  }
  GridPtr disk = stepper.plasma_grid(s.phi);
  out.max_divergence = field_divergence(*disk, s);
  if (out.status == RunStatus::Clean) {
    std::vector<std::string> breaches;
    if (!stepper.params().wall.active() && out.energy_drift_per_time > spec.energy_drift_tol)
      breaches.push_back("energy drift " + fmt_double(out.energy_drift_per_time) + " per unit time");
    if (out.max_divergence > spec.divergence_tol)
      breaches.push_back("divergence " + fmt_double(out.max_divergence));
    if (!breaches.empty()) {
      out.status = RunStatus::ToleranceBreach;
      out.message = join(breaches);
    }
  }
  out.final_report = energy_report(stepper, s, {0});
  if (write) {
    write_json((fs::path(out_dir) / "final_state.json").string(), snapshot_json(s, stepper.params()));
    json summary{{"status", to_string(out.status)},
                 {"message", out.message},
                 {"t_final", s.t},
                 {"max_amplitude", out.max_amplitude},
                 {"growth_rate", out.growth_rate},
                 {"energy_drift_per_time", out.energy_drift_per_time},
                 {"max_divergence", out.max_divergence},
                 {"report", to_json(out.final_report)},
                 {"spec", to_json(spec)}};
    if (out.flow_map) {
      json norms = json::array();
      for (size_t i = 0; i < out.flow_map->times.size(); ++i)
        norms.push_back({{"t", out.flow_map->times[i]}, {"H", out.flow_map->norms[i]}});
      summary["flow_map"] = {{"norms", norms}, {"clipped", out.flow_map->clipped}};
    }
    write_json((fs::path(out_dir) / "report.json").string(), summary);
  }
  return out;
}

DispersionSweep run_dispersion(const ScenarioSpec& spec, const std::string& out_dir) {
  if (auto errs = validate(spec); !errs.empty()) throw ValidationError(errs);
  DispersionSweep sw;
  CircularBackground bg = background(spec);
  bg.J0 = 0.0;
  for (int i = 0; i < spec.sweep_points; ++i) {
    const double val = spec.sweep_min + (spec.sweep_max - spec.sweep_min) * i / (spec.sweep_points - 1);
    CircularBackground b = bg;
    if (spec.sweep == "h2")
      b.h = std::sqrt(val);
    else
      b.alpha = val;
    for (int k = spec.k_min; k <= spec.k_max; ++k) sw.rows.push_back({k, val, dispersion_roots(k, b)});
  }
  for (int k = spec.k_min; k <= spec.k_max; ++k) {
    // Unstable iff alpha (k + 1) + h^2 < V^2 / k for k >= 2.
    double crit = 0.0;
    if (k >= 2) {
      if (spec.sweep == "h2")
        crit = stability_threshold(k, spec.alpha, spec.V);
      else
        crit = std::max(0.0, (spec.V * spec.V / k - spec.h * spec.h) / (k + 1.0));
    }
    sw.boundary.push_back({double(k), crit});
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const std::string pname = spec.sweep == "h2" ? "h2" : "alpha";
    write_dispersion_csv((fs::path(out_dir) / "dispersion.csv").string(), pname, sw.rows);
    std::ofstream b((fs::path(out_dir) / "boundary.csv").string());
    b << "k,critical_" << pname << "\n";
    for (const auto& p : sw.boundary) b << int(p.first) << "," << fmt_double(p.second) << "\n";
    std::ofstream svg((fs::path(out_dir) / "stability_map.svg").string());
    svg << stability_map_svg(pname, sw.rows, sw.boundary);
  }
  return sw;
}

AlphaSweepReport run_alpha_sweep(const ScenarioSpec& spec, int jobs, const std::string& out_dir) {
  if (auto errs = validate(spec); !errs.empty()) throw ValidationError(errs);
  if (spec.alphas.empty()) throw ValidationError({"alpha_sweep.alphas: must not be empty"});
  AlphaSweepReport rep;
  std::vector<double> members;
  for (double a : spec.alphas)
    if (a > 0.0) members.push_back(a);
  std::sort(members.rbegin(), members.rend());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  rep.alphas = members;
  if (members.empty()) {
    // Only the reference: it is compared with itself.
    rep.alphas = {0.0};
    rep.final_deviation = {0.0};
    rep.times = {0.0, spec.t_end};
    rep.curves = {{0.0, 0.0}};
    rep.monotone = true;
    return rep;
  }
  members.push_back(0.0);  // reference run, last
  const double amax = members.front();
  const double dt = std::min(spec.dt, capillary_dt(spec.cfl, spec.n_modes, amax));
  const long nsteps = std::lround(spec.t_end / dt);
  const long every = std::max<long>(1, std::lround(spec.sample_every * spec.dt / dt));
  const FlowState init = initial_state(spec);

  std::vector<std::vector<Vec>> phis(members.size());
  std::vector<std::string> errors(members.size());
  std::vector<double> times;
  for (long n = 0; n <= nsteps; ++n)
    if (n % every == 0 || n == nsteps) times.push_back(n * dt);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < members.size(); i = next++) {
      ScenarioSpec ms = spec;
      ms.alpha = members[i];
      Stepper st(evolution_params(ms));
      FlowState s = init;
      try {
        phis[i].push_back(s.phi);
        for (long n = 1; n <= nsteps; ++n) {
          s = st.step(s, dt);
          if (n % every == 0 || n == nsteps) phis[i].push_back(s.phi);
        }
      } catch (const Error& e) {
        errors[i] = "alpha=" + fmt_double(members[i]) + ": " + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(members.size())));
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& e : errors)
    if (!e.empty()) rep.failures.push_back(e);
  rep.partial = !rep.failures.empty();
  rep.times = times;
  const auto& ref = phis.back();
  for (size_t i = 0; i + 1 < members.size(); ++i) {
    std::vector<double> curve;
    for (size_t n = 0; n < std::min(ref.size(), phis[i].size()); ++n)
      curve.push_back(sobolev_norm(Vec(phis[i][n] - ref[n]), spec.deviation_sigma));
    rep.final_deviation.push_back(curve.size() == times.size() ? curve.back()
                                                               : std::numeric_limits<double>::quiet_NaN());
    rep.curves.push_back(curve);
  }
  rep.monotone = !rep.partial;
  for (size_t i = 0; i + 1 < rep.final_deviation.size(); ++i) {
    const double d0 = rep.final_deviation[i], d1 = rep.final_deviation[i + 1];
    if (!(d1 < d0)) rep.monotone = false;
    rep.orders.push_back(std::log(d0 / d1) / std::log(rep.alphas[i] / rep.alphas[i + 1]));
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream csv((fs::path(out_dir) / "alpha_sweep.csv").string());
    csv << "alpha,t,deviation\n";
    for (size_t i = 0; i < rep.curves.size(); ++i)
      for (size_t n = 0; n < rep.curves[i].size(); ++n)
        csv << fmt_double(rep.alphas[i]) << "," << fmt_double(times[n]) << ","
            << fmt_double(rep.curves[i][n]) << "\n";
    write_json((fs::path(out_dir) / "alpha_sweep.json").string(),
               json{{"alphas", rep.alphas},
                    {"final_deviation", rep.final_deviation},
                    {"orders", rep.orders},
                    {"monotone", rep.monotone},
                    {"partial", rep.partial},
                    {"failures", rep.failures},
                    {"dt", dt},
                    {"spec", to_json(spec)}});
  }
  return rep;
}

std::vector<OracleCheck> selftest_oracles() {
  std::vector<OracleCheck> out;
  auto add = [&](std::string name, double value, double tol) {
    out.push_back({std::move(name), value, tol, value <= tol});
  };
  const int M = 16, nr = 16;
  const Vec zero = Vec::Zero(2 * M);
  GridPtr disk = MappedDomainGrid::plasma(zero, nr);
  ReferenceFrame frame(M, 2.0);
  const Vec th = frame.thetas();
  {
    double err = 0.0;
    for (int k = 1; k <= 8; ++k) {
      Vec f = (double(k) * th.array()).cos().matrix();
      err = std::max(err, (apply_dn(*disk, f) - double(k) * f).lpNorm<Eigen::Infinity>());
    }
    add("dirichlet-neumann symbol |k| on the unit circle", err, 1e-10);
  }
  {
    double err = 0.0;
    CircularBackground bg;
    bg.V = 1.0;
    for (int k = 2; k <= 8; ++k) err = std::max(err, std::abs(dispersion_roots(k, bg).sigma - std::sqrt(k - 1.0)));
    add("growth rate sqrt(k - 1) for unit rotation", err, 1e-12);
  }
  {
    CircularBackground bg;
    bg.V = 1.0;
    bg.h = 0.5;
    FlowState s = rotating_state(M, nr, zero, bg);
    EvolutionParams p;
    p.nr = nr;
    p.alpha = 1.0;
    p.wall.J0 = 1.0;
    Stepper st(p);
    Rates r = st.rhs(s);
    const double err = std::max({r.dphi.lpNorm<Eigen::Infinity>(), r.dv.x.lpNorm<Eigen::Infinity>(),
                                 r.dv.y.lpNorm<Eigen::Infinity>(), r.dh.x.lpNorm<Eigen::Infinity>(),
                                 r.dh.y.lpNorm<Eigen::Infinity>()});
    add("rotating circle is a fixed point of the right-hand side", err, 1e-9);
    const double E = physical_energy(st, s).total();
    const double exact = 0.25 * kPi * (1.0 + 0.25) + kPi * 4.0 * std::log(2.0) + 2.0 * kPi;
    add("physical energy of the rotating circle", std::abs(E - exact), 1e-10);
    Field q = multiplier_pressure_q(*disk, s.v, s.h);
    Field qe = disk->evaluate([](double x, double y) { return 0.75 * (x * x + y * y - 1.0) / 2.0; });
    add("multiplier pressure closed form", (q - qe).lpNorm<Eigen::Infinity>(), 1e-9);
  }
  {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CVec c = CVec::Zero(M + 1);
    for (int k = 1; k <= 6; ++k) c(k) = cplx(u(rng), u(rng)) * (0.02 / (k * k));
    HeightField phi = HeightField::from_coeffs(c);
    CurveGeometry g = evaluate_geometry(frame, phi);
    HeightField back = invert_ancillary_curvature(ancillary_curvature(g, phi), frame);
    add("ancillary curvature round trip", (back.nodes() - phi.nodes()).lpNorm<Eigen::Infinity>(), 1e-10);
  }
  return out;
}

}  // namespace pvmhd
