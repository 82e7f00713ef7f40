#include "vacblow/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "vacblow/csv.hpp"
#include "vacblow/errors.hpp"
#include "vacblow/kernels.hpp"
#include "vacblow/numerics.hpp"

namespace vacblow {

Scheme parse_scheme(const std::string& name) {
  if (name == "upwind") return Scheme::Upwind;
  if (name == "semilag") return Scheme::SemiLagrangian;
  throw ConfigError("scheme must be upwind or semilag, got " + name);
}

std::string to_string(Scheme s) { return s == Scheme::Upwind ? "upwind" : "semilag"; }

namespace {

void transport(const std::vector<double>& y, const std::vector<double>& f, const TransportCoeffs& k, double dt,
               const StepConfig& cfg, std::vector<double>& out) {
  if (cfg.scheme == Scheme::Upwind)
    (cfg.parallel ? upwind_step_omp : upwind_step_serial)(y, f, k, dt, out);
  else
    (cfg.parallel ? semilag_step_omp : semilag_step_serial)(y, f, k, dt, out);
  out[0] = 0.0;
}

void check_cfl(const std::vector<double>& y, const std::vector<double>& v1, const std::vector<double>& v2,
               double dt, double cfl_max) {
  if (!(dt > 0)) throw DomainError("time step must be positive");
  if (std::max(cfl_number(y, v1, dt), cfl_number(y, v2, dt)) > cfl_max * (1 + 1e-12))
    throw CflError("CFL condition violated", std::min(cfl_dt(y, v1, cfl_max), cfl_dt(y, v2, cfl_max)));
}

ModulationState axpy(const ModulationState& a, double h, const ModulationState& d) {
  ModulationState r = a;
  for (std::size_t k = 0; k < r.z.size(); ++k) {
    r.z[k] += h * d.z[k];
    r.w[k] += h * d.w[k];
  }
  r.tau += h;
  return r;
}

ModulationState rk4_step(const GasScaling& s, const ModulationState& x, double dt) {
  const auto k1 = rhs_modulation(s, x);
  const auto k2 = rhs_modulation(s, axpy(x, dt / 2, k1));
  const auto k3 = rhs_modulation(s, axpy(x, dt / 2, k2));
  const auto k4 = rhs_modulation(s, axpy(x, dt, k3));
  ModulationState r = x;
  for (std::size_t k = 0; k < r.z.size(); ++k) {
    r.z[k] += dt / 6 * (k1.z[k] + 2 * k2.z[k] + 2 * k3.z[k] + k4.z[k]);
    r.w[k] += dt / 6 * (k1.w[k] + 2 * k2.w[k] + 2 * k3.w[k] + k4.w[k]);
  }
  r.tau = x.tau + dt;
  return r;
}

std::vector<double> taylor_raw(const std::vector<double>& y, const std::vector<double>& f, int order) {
  const int width = order + 3;
  if (static_cast<int>(y.size()) < width) throw ExtractionError("too few nodes for the extraction stencil");
  const double h = y[1] - y[0];
  for (int k = 1; k < width - 1; ++k)
    if (std::fabs((y[k + 1] - y[k]) - h) > 1e-9 * h) throw ExtractionError("extraction stencil is not uniform");
  const std::vector<double> xs(y.begin(), y.begin() + width);
  const auto w = fornberg_weights(0.0, xs, order);
  std::vector<double> d(order + 1, 0.0);
  for (int i = 0; i <= order; ++i)
    for (int k = 0; k < width; ++k) d[i] += w[i][k] * f[k];
  return d;
}

}  // namespace

// ---- direct form ---------------------------------------------------------------

SelfSimilarState steady_state(const ProfileParams& p, const GridPtr& g, double tau) {
  return {tau, sample(g, [&](double y) { return zbar(p, y); }), zeros_like(g)};
}

namespace {

void direct_velocities(const SelfSimilarState& st, const GasScaling& s, std::vector<double>& v1,
                       std::vector<double>& v2) {
  const auto& y = *st.z.grid;
  const double A = s.A(), B = s.B();
  v1.resize(y.size());
  v2.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    v1[i] = y[i] + A * st.z.v[i] + B * st.w.v[i];
    v2[i] = y[i] + B * st.z.v[i] + A * st.w.v[i];
  }
}

}  // namespace

double selfsimilar_dt(const SelfSimilarState& st, const GasScaling& s, double cfl) {
  std::vector<double> v1, v2;
  direct_velocities(st, s, v1, v2);
  const auto& y = *st.z.grid;
  return std::min(cfl_dt(y, v1, cfl), cfl_dt(y, v2, cfl));
}

SelfSimilarState step_selfsimilar(const SelfSimilarState& st, const GasScaling& s, double dt, const StepConfig& cfg) {
  const auto& y = *st.z.grid;
  std::vector<double> v1, v2;
  direct_velocities(st, s, v1, v2);
  check_cfl(y, v1, v2, dt, cfg.cfl_max);
  const std::vector<double> decay(y.size(), s.mu - 1);
  SelfSimilarState out{st.tau + dt, {st.z.grid, {}}, {st.w.grid, {}}};
  transport(y, st.z.v, {&v1, &decay, nullptr}, dt, cfg, out.z.v);
  transport(y, st.w.v, {&v2, &decay, nullptr}, dt, cfg, out.w.v);
  return out;
}

// ---- perturbation form -----------------------------------------------------------

PerturbationStepper::PerturbationStepper(const Localization& L, GridPtr g) : L_(L), g_(std::move(g)) {
  zb_.resize(g_->size());
  dzb_.resize(g_->size());
  for (std::size_t i = 0; i < g_->size(); ++i) {
    zb_[i] = zbar(L_.profile, (*g_)[i]);
    dzb_[i] = dzbar(L_.profile, (*g_)[i]);
  }
}

PerturbationStepper::Ring PerturbationStepper::ring_at(double tau) const {
  const auto& y = *g_;
  const std::size_t n = y.size();
  const double A = L_.profile.scaling.A();
  const auto [lo, hi] = transition_zone(L_, tau);
  Ring r{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] <= lo) {
      r.ring[i] = zb_[i];
      r.dring[i] = dzb_[i];
    } else if (y[i] < hi) {
      const double c = chi(L_, tau, y[i]), dc = dchi(L_, tau, y[i]);
      r.ring[i] = c * zb_[i];
      r.dring[i] = dc * zb_[i] + c * dzb_[i];
      r.Sz[i] = A * zb_[i] * (1 - c) * r.dring[i];
    }
  }
  return r;
}

namespace {

struct PertCoeffs {
  std::vector<double> v1, c1, s1, v2, c2, s2;
};

}  // namespace

static PertCoeffs pert_coeffs(const GasScaling& s, const std::vector<double>& y, const PerturbationState& st,
                              const std::vector<double>& ring, const std::vector<double>& dring,
                              const std::vector<double>& Sz) {
  const std::size_t n = y.size();
  const double A = s.A(), B = s.B(), mu = s.mu;
  const auto dmod = rhs_modulation(s, st.mod);
  PertCoeffs k;
  for (auto* v : {&k.v1, &k.c1, &k.s1, &k.v2, &k.c2, &k.s2}) v->resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ModField m = modulation_fields(s, st.mod, y[i]);
    const ModField mt = modulation_fields(s, dmod, y[i]);
    const double Z = st.Z.v[i], W = st.W.v[i];
    const double Tz = mt.Mz + (y[i] + A * ring[i]) * m.dMz + (A * dring[i] + mu - 1) * m.Mz + B * dring[i] * m.Mw +
                      (A * m.Mz + B * m.Mw) * m.dMz;
    const double Tw = mt.Mw + (y[i] + B * ring[i]) * m.dMw + (mu - 1) * m.Mw + (B * m.Mz + A * m.Mw) * m.dMw;
    k.v1[i] = y[i] + A * (ring[i] + m.Mz + Z) + B * (m.Mw + W);
    k.c1[i] = A * dring[i] + mu - 1 + A * m.dMz;
    k.s1[i] = -B * dring[i] * W - B * W * m.dMz - Tz + Sz[i];
    k.v2[i] = y[i] + B * (ring[i] + m.Mz + Z) + A * (m.Mw + W);
    k.c2[i] = mu - 1 + A * m.dMw;
    k.s2[i] = -B * Z * m.dMw - Tw;
  }
  return k;
}

double PerturbationStepper::dt_for(const PerturbationState& st, double cfl) const {
  const auto r = ring_at(st.tau);
  const auto k = pert_coeffs(L_.profile.scaling, *g_, st, r.ring, r.dring, r.Sz);
  return std::min(cfl_dt(*g_, k.v1, cfl), cfl_dt(*g_, k.v2, cfl));
}

PerturbationState PerturbationStepper::step(const PerturbationState& st, double dt, const StepConfig& cfg) const {
  const auto& y = *g_;
  const auto r = ring_at(st.tau);
  const auto k = pert_coeffs(L_.profile.scaling, y, st, r.ring, r.dring, r.Sz);
  check_cfl(y, k.v1, k.v2, dt, cfg.cfl_max);
  PerturbationState out{st.tau + dt, {g_, {}}, {g_, {}}, rk4_step(L_.profile.scaling, st.mod, dt)};
  transport(y, st.Z.v, {&k.v1, &k.c1, &k.s1}, dt, cfg, out.Z.v);
  transport(y, st.W.v, {&k.v2, &k.c2, &k.s2}, dt, cfg, out.W.v);
  return out;
}

SelfSimilarState PerturbationStepper::to_direct(const PerturbationState& st) const {
  const auto r = ring_at(st.tau);
  SelfSimilarState d{st.tau, zeros_like(g_), zeros_like(g_)};
  for (std::size_t i = 0; i < g_->size(); ++i) {
    const ModField m = modulation_fields(L_.profile.scaling, st.mod, (*g_)[i]);
    d.z.v[i] = r.ring[i] + m.Mz + st.Z.v[i];
    d.w.v[i] = m.Mw + st.W.v[i];
  }
  return d;
}

PerturbationState PerturbationStepper::from_direct(const SelfSimilarState& d, const ModulationState& mod) const {
  const auto r = ring_at(d.tau);
  PerturbationState p{d.tau, zeros_like(g_), zeros_like(g_), mod};
  for (std::size_t i = 0; i < g_->size(); ++i) {
    const ModField m = modulation_fields(L_.profile.scaling, mod, (*g_)[i]);
    p.Z.v[i] = d.z.v[i] - r.ring[i] - m.Mz;
    p.W.v[i] = d.w.v[i] - m.Mw;
  }
  return p;
}

// ---- extraction --------------------------------------------------------------------

std::vector<double> taylor_at_origin(const GridField& f, int order) { return taylor_raw(*f.grid, f.v, order); }

BoundaryTaylor extract_boundary_taylor(const SelfSimilarState& st, const ProfileParams& p, int order) {
  if (order > p.scaling.n_mu - 1) throw DomainError("extraction order must not exceed n_mu - 1");
  const auto& y = *st.z.grid;
  const std::size_t m = std::min<std::size_t>(y.size(), order + 3);
  std::vector<double> zt(m);
  for (std::size_t k = 0; k < m; ++k) zt[k] = st.z.v[k] - zbar(p, y[k]);
  return {taylor_raw(y, zt, order), taylor_raw(y, st.w.v, order)};
}

// ---- run driver ------------------------------------------------------------------------

namespace {

struct Diag {
  SsRecord rec;
  double level;
};

Diag diagnose(const GasScaling& s, const PerturbationState& st, const ModulationState& mod_ode) {
  const auto& y = *st.Z.grid;
  const std::size_t n = y.size();
  SsRecord r;
  r.tau = st.tau;
  r.norms = energy_norms(st.Z, st.W, s);
  r.z_mod = mod_ode.z;
  r.w_mod = mod_ode.w;
  GridField zt{st.Z.grid, std::vector<double>(n)}, wt{st.W.grid, std::vector<double>(n)};
  std::vector<double> dMz(n), dMw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ModField m = modulation_fields(s, st.mod, y[i]);
    zt.v[i] = m.Mz + st.Z.v[i];
    wt.v[i] = m.Mw + st.W.v[i];
    dMz[i] = m.dMz;
    dMw[i] = m.dMw;
  }
  const int top = s.i_max();
  const auto tz = taylor_at_origin(zt, top), tw = taylor_at_origin(wt, top);
  r.z_ext.assign(tz.begin() + 2, tz.end());
  r.w_ext.assign(tw.begin() + 2, tw.end());
  const auto dZ = fd_derivative(y, st.Z.v, 1, 5), dW = fd_derivative(y, st.W.v, 1, 5);
  for (std::size_t i = 0; i < n; ++i) {
    r.sup_dz = std::max(r.sup_dz, std::fabs(dMz[i] + dZ[i]));
    r.sup_dw = std::max(r.sup_dw, std::fabs(dMw[i] + dW[i]));
  }
  return {r, std::max(r.sup_dz, r.sup_dw)};
}

}  // namespace

RunReport run_selfsimilar(const Localization& L, const SsInit& init, const SsRunConfig& cfg) {
  const GasScaling& s = L.profile.scaling;
  const double tau0 = L.cutoff.tau0;
  const double y_max = cfg.y_max > 0 ? cfg.y_max : 4 * L.cutoff.y0 * std::exp(cfg.tau_span);
  if (!(cfg.tau_span > 0)) throw ConfigError("tau span must be positive");
  const GridPtr g = selfsimilar_grid(cfg.h, y_max);
  PerturbationStepper stepper(L, g);

  ModulationState mod = init.mod.z.empty() ? zero_state(s) : init.mod;
  if (init.project) mod = project_to_manifold(s, mod.w);
  if (static_cast<int>(mod.z.size()) != s.i_max() - 1 || mod.w.size() != mod.z.size())
    throw ConfigError("modulation data must hold z_i, w_i for i = 2..n_mu-1");
  mod.tau = tau0;

  const int n = s.n_mu;
  auto seed = [&](double y) { return init.seed * std::pow(y, n) * std::exp(-y); };
  PerturbationState st{tau0, sample(g, seed), sample(g, seed), mod};

  RunReport rep;
  rep.nodes = g->size();
  SelfSimilarState direct;
  const bool is_direct = cfg.mode == SsMode::Direct;
  if (is_direct) direct = stepper.to_direct(st);
  const double dt0 = is_direct ? selfsimilar_dt(direct, s, cfg.cfl) : stepper.dt_for(st, cfg.cfl);
  const long steps = std::max(1L, static_cast<long>(std::ceil(cfg.tau_span / dt0)));
  const double dt = cfg.tau_span / steps;
  rep.dt = dt;

  auto d0 = diagnose(s, st, st.mod);
  rep.series.push_back(d0.rec);
  const double limit = cfg.stop_factor * std::max(d0.level, cfg.stop_floor);
  for (long k = 1; k <= steps; ++k) {
    try {
      if (is_direct) {
        direct = step_selfsimilar(direct, s, dt, cfg.step);
        st.mod = rk4_step(s, st.mod, dt);
        st.tau = direct.tau;
      } else {
        st = stepper.step(st, dt, cfg.step);
      }
    } catch (const CflError& e) {
      rep.early_stop = true;
      rep.stop_reason = std::string("CFL: required dt ") + format_g17(e.required_dt);
      break;
    }
    if (k % cfg.record_every == 0 || k == steps) {
      if (is_direct) st = stepper.from_direct(direct, st.mod);
      auto d = diagnose(s, st, st.mod);
      rep.series.push_back(d.rec);
      if (!(d.level <= limit)) {
        rep.early_stop = true;
        rep.stop_reason = "diagnostic exceeded " + format_g17(limit);
        break;
      }
    }
  }
  return rep;
}

void write_run_csv(const RunReport& r, const std::string& path) {
  std::vector<std::string> h{"tau",     "normZ_w", "normZ_hn", "normZ_h1", "normZ_l2", "normW_w",
                             "normW_hn", "normW_h1", "normW_l2", "sup_dz",   "sup_dw"};
  const std::size_t m = r.series.empty() ? 0 : r.series.front().z_ext.size();
  for (std::size_t k = 0; k < m; ++k) h.push_back("z" + std::to_string(k + 2));
  for (std::size_t k = 0; k < m; ++k) h.push_back("w" + std::to_string(k + 2));
  CsvWriter csv(path, h);
  for (const auto& x : r.series) {
    std::vector<double> row{x.tau,          x.norms.Z_weighted, x.norms.Z_top, x.norms.Z_d1,
                            x.norms.Z_l2,   x.norms.W_weighted, x.norms.W_top, x.norms.W_d1,
                            x.norms.W_l2,   x.sup_dz,           x.sup_dw};
    row.insert(row.end(), x.z_ext.begin(), x.z_ext.end());
    row.insert(row.end(), x.w_ext.begin(), x.w_ext.end());
    csv.row(row);
  }
}

// ---- physical space ---------------------------------------------------------------------

GridPtr physical_grid(int n_cells, double x_max, double h_first) {
  if (n_cells < 4 || !(x_max > 0) || !(h_first > 0)) throw DomainError("physical_grid: bad arguments");
  std::vector<double> x(n_cells + 1);
  if (h_first * n_cells >= x_max) {
    for (int k = 0; k <= n_cells; ++k) x[k] = x_max * k / n_cells;
    return make_grid(std::move(x));
  }
  // h_first (r^n - 1)/(r - 1) = x_max, solved for log r by bisection
  auto total = [&](double lr) { return h_first * std::expm1(n_cells * lr) / std::expm1(lr); };
  double lo = 1e-12, hi = 1.0;
  while (total(hi) < x_max) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) < x_max ? lo : hi) = mid;
  }
  const double lr = 0.5 * (lo + hi);
  for (int k = 0; k <= n_cells; ++k) x[k] = h_first * std::expm1(k * lr) / std::expm1(lr);
  x[n_cells] = x_max;
  return make_grid(std::move(x));
}

PhysicalState physical_from_selfsimilar(const Localization& L, double t0, const GridPtr& x) {
  if (!(t0 < 0)) throw DomainError("t0 must be negative");
  const double d = L.profile.scaling.delta;
  const double amp = d * std::pow(-t0, d - 1), len = std::pow(-t0, d);
  const double tau0 = L.cutoff.tau0;
  return {t0, sample(x, [&](double xx) { return amp * ring_z(L, tau0, xx / len); }), zeros_like(x)};
}

namespace {

void physical_speeds(const PhysicalState& st, const GasScaling& s, std::vector<double>& l1, std::vector<double>& l2) {
  const std::size_t n = st.z.size();
  const double A = s.A(), B = s.B();
  l1.resize(n);
  l2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    l1[i] = A * st.z.v[i] + B * st.w.v[i];
    l2[i] = B * st.z.v[i] + A * st.w.v[i];
  }
}

}  // namespace

double physical_dt(const PhysicalState& st, const GasScaling& s, double cfl) {
  std::vector<double> l1, l2;
  physical_speeds(st, s, l1, l2);
  return std::min(cfl_dt(*st.z.grid, l1, cfl), cfl_dt(*st.z.grid, l2, cfl));
}

PhysicalState step_physical(const PhysicalState& st, const GasScaling& s, double dt, const StepConfig& cfg) {
  if (!(st.t + dt < 0)) throw DomainError("step_physical: t + dt must stay below 0");
  const auto& x = *st.z.grid;
  std::vector<double> l1, l2;
  physical_speeds(st, s, l1, l2);
  check_cfl(x, l1, l2, dt, cfg.cfl_max);
  PhysicalState out{st.t + dt, {st.z.grid, {}}, {st.w.grid, {}}};
  transport(x, st.z.v, {&l1, nullptr, nullptr}, dt, cfg, out.z.v);
  transport(x, st.w.v, {&l2, nullptr, nullptr}, dt, cfg, out.w.v);
  return out;
}

namespace {

// Two resolution gauges at the steepest cell: the jump |z_x| dx, and the
// relative slope change to its neighbours (the kink). The jump stays small
// when z itself shrinks toward the blowup, the kink does not.
PhysicalRecord record(const PhysicalState& st, double& jump, double& kink) {
  const auto& x = *st.z.grid;
  const auto& z = st.z.v;
  PhysicalRecord r{st.t, 0, 0, 0, 0};
  std::vector<double> sl(x.size() - 1);
  std::size_t im = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    sl[i] = std::fabs(z[i + 1] - z[i]) / (x[i + 1] - x[i]);
    if (sl[i] > sl[im]) im = i;
  }
  r.max_slope = sl[im];
  r.argmax_x = x[im];
  jump = sl[im] * (x[im + 1] - x[im]);
  kink = 0;
  if (im + 1 < sl.size()) kink = std::max(kink, 1 - sl[im + 1] / sl[im]);
  if (im > 0) kink = std::max(kink, 1 - sl[im - 1] / sl[im]);
  const auto w = fornberg_weights(0.0, {x[0], x[1], x[2]}, 1);
  r.boundary_slope = w[1][0] * z[0] + w[1][1] * z[1] + w[1][2] * z[2];
  r.inv_slope = 1.0 / r.max_slope;
  return r;
}

}  // namespace

PhysicalRun run_physical(const Localization& L, double t0, const PhysicalRunConfig& cfg) {
  const GasScaling& s = L.profile.scaling;
  if (!(t0 < 0)) throw ConfigError("t0 must be negative");
  const double len = std::pow(-t0, s.delta);
  const double x_max = cfg.x_max > 0 ? cfg.x_max : 3 * L.cutoff.y0 * len;
  const double h_first = cfg.h_first > 0 ? cfg.h_first : 1e-10 * x_max;
  const double t_stop = cfg.t_stop < 0 ? cfg.t_stop : 1e-3 * t0;  // 0 selects the default
  if (!(t_stop > t0)) throw ConfigError("t_stop must lie in (t0, 0)");
  const GridPtr x = physical_grid(cfg.n_cells, x_max, h_first);

  PhysicalRun run;
  run.x_pos = std::min(L.cutoff.y0 * len, x_max);
  PhysicalState st = physical_from_selfsimilar(L, t0, x);
  const double gm1 = s.gamma - 1;
  auto positive = [&](const PhysicalState& p) {
    for (std::size_t i = 1; i < x->size() && (*x)[i] <= run.x_pos; ++i)
      if (!(gm1 * (p.w.v[i] - p.z.v[i]) / 4 > 0)) return false;
    return true;
  };
  double jump = 0, kink = 0;
  run.series.push_back(record(st, jump, kink));
  run.positivity_ok = positive(st);
  while (st.t < t_stop) {
    double dt = physical_dt(st, s, cfg.cfl);
    if (st.t + dt >= t_stop) dt = t_stop - st.t;
    st = step_physical(st, s, dt, cfg.step);
    if (st.t > t_stop - 1e-15 * std::fabs(t0)) st.t = t_stop;
    ++run.steps;
    run.series.push_back(record(st, jump, kink));
    run.positivity_ok = run.positivity_ok && positive(st);
    if (jump > 0.1 || kink > 0.1) {
      run.resolution_exhausted = true;
      break;
    }
  }
  run.final_state = st;
  return run;
}

void write_physical_csv(const PhysicalRun& r, const std::string& path) {
  CsvWriter csv(path, {"t", "max_slope", "inv_slope", "boundary_slope"});
  for (const auto& x : r.series) csv.row({x.t, x.max_slope, x.inv_slope, x.boundary_slope});
}

namespace {

struct FitWithRoot {
  double slope, slope_se, root, root_se;
};

FitWithRoot fit_root(const std::vector<double>& t, const std::vector<double>& v) {
  const auto f = linear_fit(t, v);
  const double n = static_cast<double>(t.size());
  double tm = 0;
  for (double x : t) tm += x;
  tm /= n;
  double sxx = 0, ss = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sxx += (t[i] - tm) * (t[i] - tm);
    const double r = v[i] - f.intercept - f.slope * t[i];
    ss += r * r;
  }
  const double s2 = n > 2 ? ss / (n - 2) : 0.0;
  const double root = -f.intercept / f.slope;
  const double se = std::sqrt(s2 * (1.0 / n + (root - tm) * (root - tm) / sxx)) / std::fabs(f.slope);
  return {f.slope, f.slope_stderr, root, se};
}

}  // namespace

BlowupReport blowup_detect(const std::vector<PhysicalRecord>& series, double t_lo, double t_hi) {
  std::vector<double> t, inv, binv;
  for (const auto& r : series)
    if (r.t >= t_lo && r.t <= t_hi) {
      t.push_back(r.t);
      inv.push_back(1.0 / r.max_slope);
      binv.push_back(1.0 / r.boundary_slope);
    }
  if (t.size() < 3) throw FitError("blowup fit needs at least three records in the window");
  BlowupReport b;
  const auto f = fit_root(t, inv);
  b.slope = f.slope;
  b.slope_stderr = f.slope_se;
  b.T = f.root;
  b.T_stderr = f.root_se;
  const auto g = linear_fit(t, binv);
  b.boundary_law_slope = g.slope;
  b.boundary_law_stderr = g.slope_stderr;
  b.location = series.back().argmax_x;
  return b;
}

double richardson_blowup(double T_coarse, double T_fine) { return 2 * T_fine - T_coarse; }

HolderFit holder_fit(const PhysicalState& st, const GasScaling& s, double lo, double hi) {
  const auto& x = *st.z.grid;
  const double len = std::pow(-st.t, s.delta);
  HolderFit h;
  h.x_lo = lo * len;
  h.x_hi = hi * len;
  if (h.x_hi >= x.back()) throw FitError("Hölder window extends past the grid");
  std::vector<double> xs, zs;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] < h.x_lo || x[i] > h.x_hi) continue;
    if (x[i] - x[i - 1] > 0.1 * x[i]) throw FitError("Hölder window is not resolved by the grid");
    xs.push_back(x[i]);
    zs.push_back(st.z.v[i]);
  }
  if (xs.size() < 8) throw FitError("Hölder window holds too few nodes");
  const auto p = power_fit_with_correction(xs, zs);
  h.exponent = p.exponent;
  h.stderr_ = p.exponent_stderr;
  h.naive = p.naive_exponent;
  h.points = static_cast<int>(xs.size());
  return h;
}

}  // namespace vacblow
