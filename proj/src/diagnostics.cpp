#include "pvmhd/diagnostics.hpp"

#include <cmath>

namespace pvmhd {

namespace {

Vec row0(const Field& f) { return f.row(0).transpose(); }

Vec dot(const Vec& ax, const Vec& ay, const Vec& bx, const Vec& by) {
  return ax.cwiseProduct(bx) + ay.cwiseProduct(by);
}

double sq_norm(const MappedDomainGrid& g, const VectorField& u) {
  return g.integrate(u.x.cwiseAbs2() + u.y.cwiseAbs2());
}

Vec ds_power(const CurveGeometry& geom, Vec f, int k) {
  for (int i = 0; i < k; ++i) f = geom.d_s(f);
  return f;
}

}  // namespace

PhysicalEnergy physical_energy(const MappedDomainGrid& disk, const VectorField& v,
                               const VectorField& h, double alpha,
                               const MappedDomainGrid* annulus, const VectorField* H) {
  PhysicalEnergy e;
  e.kinetic = 0.5 * sq_norm(disk, v);
  e.plasma_magnetic = 0.5 * sq_norm(disk, h);
  if (annulus && H) e.vacuum_magnetic = 0.5 * sq_norm(*annulus, *H);
  e.surface = alpha * disk.interface().length();
  return e;
}

PhysicalEnergy physical_energy(Stepper& stepper, const FlowState& s) {
  GridPtr disk = stepper.plasma_grid(s.phi);
  const auto& p = stepper.params();
  if (!p.wall.active()) return physical_energy(*disk, s.v, s.h, p.alpha);
  GridPtr vac = stepper.vacuum_grid(s.phi);
  VacuumField H = stepper.vacuum_field(*vac, s.t);
  return physical_energy(*disk, s.v, s.h, p.alpha, vac.get(), &H.H);
}

DriftReport conservation_check(const std::vector<double>& t, const std::vector<double>& energy,
                               const std::vector<double>* flux) {
  DriftReport rep;
  rep.samples = static_cast<int>(t.size());
  if (t.size() != energy.size() || t.size() < 2) throw Error("conservation_check: need >= 2 samples");
  const double E0 = energy.front();
  const double ref = std::abs(E0) > 0.0 ? std::abs(E0) : 1.0;
  for (double E : energy) rep.max_relative_drift = std::max(rep.max_relative_drift, std::abs(E - E0) / ref);
  const double span = t.back() - t.front();
  rep.drift_per_time = span > 0.0 ? rep.max_relative_drift / span : 0.0;
  if (flux) {
    if (flux->size() != t.size()) throw Error("conservation_check: flux size mismatch");
    double fmax = 0.0, err = 0.0;
    for (size_t i = 1; i + 1 < t.size(); ++i) {
      const double dEdt = (energy[i + 1] - energy[i - 1]) / (t[i + 1] - t[i - 1]);
      err = std::max(err, std::abs(dEdt - (*flux)[i]));
      fmax = std::max(fmax, std::abs((*flux)[i]));
    }
    rep.max_flux_mismatch = fmax > 0.0 ? err / fmax : err;
  }
  return rep;
}

ElectricField electric_field(const MappedDomainGrid& annulus, const VectorField& H,
                             const VectorField& dHdt, const Vec& normal_speed, double wall_current) {
  if (annulus.kind() != DomainKind::VacuumAnnulus) throw Error("electric_field: vacuum grid required");
  const auto& geom = annulus.interface();
  const int nt = annulus.nt();
  const Vec Ht = dot(row0(H.x), row0(H.y), geom.tx, geom.ty);
  const Vec g = -normal_speed.cwiseProduct(Ht);
  // grad eps = (dH_y/dt, -dH_x/dt).
  VectorField target{dHdt.y, -dHdt.x};
  Field source = annulus.divergence(target);
  Vec wall(nt);
  const int last = annulus.nr() - 1;
  for (int j = 0; j < nt; ++j) {
    const double th = geom.theta(j);
    wall(j) = std::cos(th) * target.x(last, j) + std::sin(th) * target.y(last, j);
  }
  ElectricField out;
  out.eps = solve_vacuum_mixed(annulus, g, &wall, &source);
  VectorField ge = annulus.gradient(out.eps);
  const double scale = std::max(dHdt.x.lpNorm<Eigen::Infinity>(), dHdt.y.lpNorm<Eigen::Infinity>());
  const double err = std::max((ge.x - target.x).lpNorm<Eigen::Infinity>(),
                              (ge.y - target.y).lpNorm<Eigen::Infinity>());
  out.residual = scale > 0.0 ? err / scale : err;
  const double R = annulus.wall_radius();
  out.wall_power = wall_current * annulus.wall_trace(out.eps).sum() * R * (2.0 * kPi / nt);
  return out;
}

ElectricField electric_field(Stepper& stepper, const FlowState& prev, const FlowState& mid,
                             const FlowState& next) {
  const double dt2 = next.t - prev.t;
  if (!(dt2 > 0.0)) throw Error("electric_field: states out of order");
  GridPtr vp = stepper.vacuum_grid(prev.phi), vm = stepper.vacuum_grid(mid.phi),
          vn = stepper.vacuum_grid(next.phi);
  VacuumField Hp = stepper.vacuum_field(*vp, prev.t), Hm = stepper.vacuum_field(*vm, mid.t),
              Hn = stepper.vacuum_field(*vn, next.t);
  const Vec dphi = stepper.rhs(mid).dphi;
  VectorField W = vm->extend_radial_motion(dphi);
  Gradients gH = gradients(*vm, Hm.H);
  VectorField dHdt;
  dHdt.x = (Hn.H.x - Hp.H.x) / dt2 - W.x.cwiseProduct(gH.xx) - W.y.cwiseProduct(gH.xy);
  dHdt.y = (Hn.H.y - Hp.H.y) / dt2 - W.x.cwiseProduct(gH.yx) - W.y.cwiseProduct(gH.yy);
  const auto& geom = vm->interface();
  const Vec ern = dot(geom.theta.array().cos().matrix(), geom.theta.array().sin().matrix(), geom.nx, geom.ny);
  return electric_field(*vm, Hm.H, dHdt, dphi.cwiseProduct(ern), stepper.params().wall.value(mid.t));
}

double interior_sobolev_sq(const MappedDomainGrid& grid, const Field& f, int k) {
  std::vector<Field> level{f};
  double total = grid.integrate(f.cwiseAbs2());
  for (int j = 1; j <= k; ++j) {
    std::vector<Field> next;
    next.reserve(level.size() * 2);
    for (const Field& g : level) {
      Field gx, gy;
      grid.gradient(g, gx, gy);
      total += grid.integrate(gx.cwiseAbs2()) + grid.integrate(gy.cwiseAbs2());
      next.push_back(std::move(gx));
      next.push_back(std::move(gy));
    }
    level = std::move(next);
  }
  return total;
}

HigherEnergy higher_energy(Stepper& stepper, const FlowState& s, int m) {
  if (m < 0) throw Error("higher_energy: m must be non-negative");
  const auto& prm = stepper.params();
  ResolvedState r = stepper.resolve(s);
  const MappedDomainGrid& disk = *r.disk;
  const CurveGeometry& geom = disk.interface();
  const int nt = disk.nt();
  const Vec& w = geom.weights;
  const Vec& kap = geom.kappa;
  const Vec ks = geom.d_s(kap);

  BoundaryOperator op = dn_operator(disk, prm.exec);
  BoundaryOperator P = dn_fractional_power(op, m, geom);
  const Vec Nk = op.apply(kap);
  const Vec Dtk = curvature_rate(geom, row0(s.v.x), row0(s.v.y));

  Field q = multiplier_pressure_q(disk, s.v, s.h);
  const Vec dnq = disk.interface_normal_derivative(q);
  Vec dnqt = Vec::Zero(nt), Ht = Vec::Zero(nt);
  double H_sq = 0.0;
  if (r.vac) {
    Field qt = vacuum_pressure_qtilde(*r.vac, r.vacuum.H);
    dnqt = r.vac->interface_normal_derivative(qt);
    Ht = dot(row0(r.vacuum.H.x), row0(r.vacuum.H.y), geom.tx, geom.ty);
    H_sq = sq_norm(*r.vac, r.vacuum.H);
  }
  const Vec ht = dot(row0(s.h.x), row0(s.h.y), geom.tx, geom.ty);

  HigherEnergy e;
  e.m = m;
  auto integral = [&](const Vec& f) { return w.dot(f); };
  e.bdry_terms[0] = integral(P.apply(Dtk).cwiseAbs2());
  e.bdry_terms[1] = prm.alpha * integral(ds_power(geom, Nk, 1 + m).cwiseAbs2());
  e.bdry_terms[2] = integral((dnqt - dnq).cwiseProduct(ds_power(geom, Nk, m).cwiseAbs2()));
  e.bdry_terms[3] = integral(P.apply(ht.cwiseProduct(ks)).cwiseAbs2());
  e.bdry_terms[4] = integral(P.apply(Ht.cwiseProduct(ks)).cwiseAbs2());
  for (double b : e.bdry_terms) e.E_bdry += b;

  for (int sgn : {+1, -1}) {
    Field wpm = disk.curl({s.v.x + sgn * s.h.x, s.v.y + sgn * s.h.y});
    e.E_int += interior_sobolev_sq(disk, wpm, m + 2);
  }
  e.E_total = 1.0 + sq_norm(disk, s.v) + sq_norm(disk, s.h) + 2.0 * prm.alpha * geom.length() + H_sq +
              e.E_bdry + e.E_int;

  auto hs = [](const Vec& f, double sigma) {
    const double n = sobolev_norm(f, sigma);
    return n * n;
  };
  const Vec J = Vec::Constant(nt, prm.wall.value(s.t));
  const Vec dJ = Vec::Constant(nt, prm.wall.derivative(s.t));
  e.M = interior_sobolev_sq(disk, s.v.x, m + 3) + interior_sobolev_sq(disk, s.v.y, m + 3) +
        interior_sobolev_sq(disk, s.h.x, m + 3) + interior_sobolev_sq(disk, s.h.y, m + 3) +
        (hs(dJ, m + 1.5) + hs(J, m + 2.5)) * (1.0 + hs(kap, m + 1.5)) + prm.alpha * hs(kap, m + 2.0) +
        hs(ht.cwiseProduct(ks), m + 0.5) + hs(kap, m + 1.0);
  return e;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::SurfaceTension: return "surface-tension";
    case Regime::NonDegenerate: return "non-degenerate-field";
    case Regime::SignCondition: return "sign-condition";
    default: return "none";
  }
}

StabilityMonitors stability_monitors(Stepper& stepper, const FlowState& s, double tol) {
  const auto& prm = stepper.params();
  ResolvedState r = stepper.resolve(s);
  const MappedDomainGrid& disk = *r.disk;
  StabilityMonitors mon;
  mon.min_minus_dnp = (-disk.interface_normal_derivative(r.p)).minCoeff();
  Field q = multiplier_pressure_q(disk, s.v, s.h);
  mon.min_minus_dnq = (-disk.interface_normal_derivative(q)).minCoeff();
  Vec field = (row0(s.h.x).cwiseAbs2() + row0(s.h.y).cwiseAbs2()).cwiseSqrt();
  if (r.vac) field += (row0(r.vacuum.H.x).cwiseAbs2() + row0(r.vacuum.H.y).cwiseAbs2()).cwiseSqrt();
  mon.min_field = field.minCoeff();
  mon.phi_norm = sobolev_norm(s.phi, prm.ball.s - 0.5);
  mon.case_surface = prm.alpha > 0.0;
  mon.case_field = mon.min_field > tol;
  mon.case_sign = mon.min_minus_dnq > tol && !prm.wall.active();
  if (mon.case_field) mon.lambda0 = mon.min_field;
  if (mon.case_sign) mon.c0 = mon.min_minus_dnq;
  if (mon.case_surface)
    mon.regime = Regime::SurfaceTension;
  else if (mon.case_field)
    mon.regime = Regime::NonDegenerate;
  else if (mon.case_sign)
    mon.regime = Regime::SignCondition;
  return mon;
}

EnergyReport energy_report(Stepper& stepper, const FlowState& s, const std::vector<int>& orders) {
  EnergyReport rep;
  rep.t = s.t;
  rep.energy = physical_energy(stepper, s);
  for (int m : orders) rep.higher.push_back(higher_energy(stepper, s, m));
  rep.monitors = stability_monitors(stepper, s);
  return rep;
}

}  // namespace pvmhd
