#include "pvmhd/io.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace pvmhd {

namespace {

json field_json(const Field& f) {
  return json{{"rows", f.rows()}, {"cols", f.cols()},
              {"data", std::vector<double>(f.data(), f.data() + f.size())}};
}

Field field_from_json(const json& j) {
  const int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
  auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<int>(data.size()) != rows * cols) throw Error("snapshot field has wrong size");
  Field f(rows, cols);
  std::copy(data.begin(), data.end(), f.data());
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

}  // namespace

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json to_json(const HeightField& f) {
  std::vector<double> re, im;
  for (int k = 0; k <= f.n_modes(); ++k) {
    re.push_back(f.coeff(k).real());
    im.push_back(f.coeff(k).imag());
  }
  return json{{"n_modes", f.n_modes()}, {"re", re}, {"im", im}};
}

HeightField height_field_from_json(const json& j) {
  auto re = j.at("re").get<std::vector<double>>();
  auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != im.size() || re.size() < 2) throw Error("height field: bad coefficient arrays");
  CVec c(re.size());
  for (size_t k = 0; k < re.size(); ++k) c(k) = cplx(re[k], im[k]);
  return HeightField::from_coeffs(c);
}

json to_json(const PhysicalEnergy& e) {
  return json{{"kinetic", e.kinetic},
              {"plasma_magnetic", e.plasma_magnetic},
              {"vacuum_magnetic", e.vacuum_magnetic},
              {"surface", e.surface},
              {"total", e.total()}};
}

json to_json(const HigherEnergy& e) {
  return json{{"m", e.m},
              {"bdry_terms", std::vector<double>(e.bdry_terms, e.bdry_terms + 5)},
              {"E_bdry", e.E_bdry},
              {"E_int", e.E_int},
              {"E_total", e.E_total},
              {"M", e.M}};
}

json to_json(const StabilityMonitors& m) {
  return json{{"min_minus_dnp", m.min_minus_dnp},
              {"min_minus_dnq", m.min_minus_dnq},
              {"min_field", m.min_field},
              {"phi_norm", m.phi_norm},
              {"case_surface_tension", m.case_surface},
              {"case_non_degenerate", m.case_field},
              {"case_sign_condition", m.case_sign},
              {"lambda0", m.lambda0},
              {"c0", m.c0},
              {"regime", to_string(m.regime)}};
}

json to_json(const EnergyReport& r) {
  json higher = json::array();
  for (const auto& h : r.higher) higher.push_back(to_json(h));
  return json{{"t", r.t}, {"energy", to_json(r.energy)}, {"higher", higher},
              {"monitors", to_json(r.monitors)}};
}

json snapshot_json(const FlowState& s, const EvolutionParams& p) {
  return json{{"schema", kSnapshotSchema},
              {"t", s.t},
              {"phi", std::vector<double>(s.phi.data(), s.phi.data() + s.phi.size())},
              {"v", {{"x", field_json(s.v.x)}, {"y", field_json(s.v.y)}}},
              {"h", {{"x", field_json(s.h.x)}, {"y", field_json(s.h.y)}}},
              {"params",
               {{"alpha", p.alpha},
                {"wall_radius", p.wall_radius},
                {"J0", p.wall.J0},
                {"J_rate", p.wall.rate},
                {"nr", p.nr},
                {"nr_vac", p.nr_vac}}}};
}

FlowState snapshot_state(const json& j) {
  if (j.value("schema", "") != kSnapshotSchema) throw Error("not a snapshot (schema mismatch)");
  FlowState s;
  s.t = j.at("t").get<double>();
  auto phi = j.at("phi").get<std::vector<double>>();
  s.phi = Eigen::Map<const Vec>(phi.data(), phi.size());
  s.v = {field_from_json(j.at("v").at("x")), field_from_json(j.at("v").at("y"))};
  s.h = {field_from_json(j.at("h").at("x")), field_from_json(j.at("h").at("y"))};
  if (s.v.x.cols() != s.phi.size()) throw Error("snapshot: field and interface sizes disagree");
  return s;
}

EvolutionParams snapshot_params(const json& j) {
  const json& p = j.at("params");
  EvolutionParams e;
  e.alpha = p.at("alpha").get<double>();
  e.wall_radius = p.at("wall_radius").get<double>();
  e.wall.J0 = p.at("J0").get<double>();
  e.wall.rate = p.at("J_rate").get<double>();
  e.nr = p.at("nr").get<int>();
  e.nr_vac = p.at("nr_vac").get<int>();
  return e;
}

void write_json(const std::string& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_field_csv(const std::string& path, const MappedDomainGrid& grid,
                     const std::vector<std::pair<std::string, const Field*>>& fields) {
  auto out = open_out(path);
  out << "rho,theta,x,y";
  for (const auto& f : fields) out << "," << f.first;
  out << "\n";
  const auto& th = grid.interface().theta;
  for (int i = 0; i < grid.nr(); ++i)
    for (int j = 0; j < grid.nt(); ++j) {
      out << fmt_double(grid.rho()(i)) << "," << fmt_double(th(j)) << "," << fmt_double(grid.X()(i, j))
          << "," << fmt_double(grid.Y()(i, j));
      for (const auto& f : fields) out << "," << fmt_double((*f.second)(i, j));
      out << "\n";
    }
}

void write_boundary_operator_csv(const std::string& path, const BoundaryOperator& op) {
  auto out = open_out(path);
  const int n = op.size();
  out << "weight,eigenvalue";
  for (int j = 0; j < n; ++j) out << ",c" << j;
  out << "\n";
  for (int i = 0; i < n; ++i) {
    out << fmt_double(op.weights(i)) << "," << fmt_double(op.eigenvalues(i));
    for (int j = 0; j < n; ++j) out << "," << fmt_double(op.symmetric(i, j));
    out << "\n";
  }
}

void write_dispersion_csv(const std::string& path, const std::string& param_name,
                          const std::vector<DispersionRow>& rows) {
  auto out = open_out(path);
  out << "k," << param_name << ",c_plus_re,c_plus_im,c_minus_re,c_minus_im,sigma,class\n";
  for (const auto& r : rows)
    out << r.k << "," << fmt_double(r.param) << "," << fmt_double(r.res.c_plus.real()) << ","
        << fmt_double(r.res.c_plus.imag()) << "," << fmt_double(r.res.c_minus.real()) << ","
        << fmt_double(r.res.c_minus.imag()) << "," << fmt_double(r.res.sigma) << ","
        << to_string(r.res.cls) << "\n";
}

std::string stability_map_svg(const std::string& param_name, const std::vector<DispersionRow>& rows,
                              const std::vector<std::pair<double, double>>& boundary) {
  if (rows.empty()) return "<svg xmlns=\"http://www.w3.org/2000/svg\"/>\n";
  int kmin = rows.front().k, kmax = kmin;
  double pmin = rows.front().param, pmax = pmin;
  std::vector<double> params;
  for (const auto& r : rows) {
    kmin = std::min(kmin, r.k);
    kmax = std::max(kmax, r.k);
    pmin = std::min(pmin, r.param);
    pmax = std::max(pmax, r.param);
    params.push_back(r.param);
  }
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());
  const double W = 640, H = 480, ml = 70, mb = 50, mt = 20, mr = 20;
  const double pw = W - ml - mr, ph = H - mt - mb;
  const double cw = pw / (kmax - kmin + 1), chh = ph / std::max<size_t>(params.size(), 1);
  const double prange = pmax > pmin ? pmax - pmin : 1.0;
  auto X = [&](double k) { return ml + (k - kmin + 0.5) * cw; };
  auto Y = [&](double p) {
    const double frac = params.size() > 1 ? (p - pmin) / prange : 0.5;
    return mt + ph - chh / 2 - frac * (ph - chh);
  };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& r : rows) {
    const char* col = r.res.cls == StabilityClass::Unstable ? "#d6604d"
                      : r.res.cls == StabilityClass::Neutral ? "#f7f7f7"
                                                             : "#4393c3";
    s << "<rect x=\"" << X(r.k) - cw / 2 << "\" y=\"" << Y(r.param) - chh / 2 << "\" width=\"" << cw
      << "\" height=\"" << chh << "\" fill=\"" << col << "\"/>\n";
  }
  if (!boundary.empty()) {
    s << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
    for (const auto& b : boundary) {
      const double p = std::clamp(b.second, pmin, pmax);
      s << X(b.first) << "," << Y(p) << " ";
    }
    s << "\"/>\n";
  }
  s << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\"" << mt + ph
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
    << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">k ("
    << kmin << " to " << kmax << ")</text>\n";
  s << "<text x=\"16\" y=\"" << mt + ph / 2 << "\" transform=\"rotate(-90 16 " << mt + ph / 2
    << ")\" text-anchor=\"middle\">" << param_name << " (" << fmt_double(pmin) << " to "
    << fmt_double(pmax) << ")</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::vector<double> modal_amplitudes(const Vec& phi, int kmax) {
  CVec c = fourier_coeffs(phi);
  const int M = static_cast<int>(c.size()) - 1;
  std::vector<double> out;
  for (int k = 1; k <= kmax; ++k) out.push_back(k < M ? 2.0 * std::abs(c(k)) : k == M ? std::abs(c(k)) : 0.0);
  return out;
}

TrajectoryWriter::TrajectoryWriter(const std::string& path, int kmax) : out_(path), kmax_(kmax) {
  if (!out_) throw Error("cannot open " + path + " for writing");
  out_ << "t";
  for (int k = 1; k <= kmax; ++k) out_ << ",amp_" << k;
  out_ << ",E_total,kinetic,plasma_magnetic,vacuum_magnetic,surface,min_minus_dnp,min_minus_dnq,min_field\n";
}

void TrajectoryWriter::append(double t, const Vec& phi, const PhysicalEnergy& e,
                              const StabilityMonitors& m) {
  out_ << fmt_double(t);
  for (double a : modal_amplitudes(phi, kmax_)) out_ << "," << fmt_double(a);
  out_ << "," << fmt_double(e.total()) << "," << fmt_double(e.kinetic) << ","
       << fmt_double(e.plasma_magnetic) << "," << fmt_double(e.vacuum_magnetic) << ","
       << fmt_double(e.surface) << "," << fmt_double(m.min_minus_dnp) << ","
       << fmt_double(m.min_minus_dnq) << "," << fmt_double(m.min_field) << "\n";
  out_.flush();
}

}  // namespace pvmhd
