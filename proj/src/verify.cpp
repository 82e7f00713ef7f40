#include "vacblow/verify.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "vacblow/errors.hpp"
#include "vacblow/linops.hpp"
#include "vacblow/localization.hpp"
#include "vacblow/modulation.hpp"
#include "vacblow/numerics.hpp"
#include "vacblow/profile.hpp"
#include "vacblow/simulator.hpp"

namespace vacblow {

namespace {

struct Rec {
  CheckResult& r;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      r.pass = false;
      r.notes.push_back("failed: " + what);
    }
  }
  void metric(const std::string& k, double v) { r.metrics.emplace_back(k, v); }
  void note(const std::string& s) { r.notes.push_back(s); }
};

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(6);
  o << v;
  return o.str();
}

struct Case {
  double gamma, mu, K;
  std::string tag() const { return "(" + fmt(gamma) + "," + fmt(mu) + "," + fmt(K) + ")"; }
};
const std::vector<Case> kProfileCases{{2.0, 0.5, 0.5}, {2.0, 2.0 / 3.0, 0.5}, {1.4, 0.6, 1.0}};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_profile_residual(Rec& c) {
  for (const auto& k : kProfileCases) {
    const auto p = make_profile_params(k.gamma, k.mu, k.K);
    const auto t0 = std::chrono::steady_clock::now();
    const Profile pr = tabulate_profile(p);
    const double secs = seconds_since(t0);
    const double res = profile_residual(pr);
    c.metric("residual" + k.tag(), res);
    c.metric("seconds" + k.tag(), secs);
    c.require(res < 1e-8, "residual " + k.tag() + " = " + fmt(res));
    c.require(secs < 1.0, "runtime " + k.tag() + " = " + fmt(secs) + " s");
    const double u0 = 2 * k.mu / (k.gamma + 1);
    c.require(std::fabs(pr.ubar[0] - u0) < 1e-10, "Ubar(0) " + k.tag());
    c.require(std::fabs(pr.dzbar[0] + 2 * u0) < 1e-10, "dzbar(0) " + k.tag());
  }
}

void check_bounds(Rec& c) {
  for (const auto& k : kProfileCases) {
    const Profile pr = tabulate_profile(make_profile_params(k.gamma, k.mu, k.K));
    const double A = (k.gamma + 1) / 4;
    double lo = 1, hi = 0;
    for (double d : pr.dzbar) {
      lo = std::min(lo, 1 + A * d);
      hi = std::max(hi, 1 + A * d);
    }
    c.metric("min" + k.tag(), lo);
    c.metric("max" + k.tag(), hi);
    c.require(lo >= 1 - k.mu - 1e-10, "lower bound " + k.tag() + " min = " + fmt(lo));
    c.require(hi < 1.0, "upper bound " + k.tag() + " max = " + fmt(hi));
  }
}

void check_asymptotics(Rec& c) {
  for (const auto& k : kProfileCases) {
    const auto p = make_profile_params(k.gamma, k.mu, k.K);
    Profile pr = tabulate_profile(p);
    const auto f = fit_asymptotics(pr);
    c.metric("far_exponent" + k.tag(), f.far_exp_fit);
    c.metric("far_exponent_naive" + k.tag(), f.far_exp_naive);
    c.metric("near_exponent" + k.tag(), f.beta_fit);
    c.require(std::fabs(f.far_exp_fit - (1 - k.mu)) <= 1e-3, "far exponent " + k.tag() + " = " + fmt(f.far_exp_fit));
    c.require(std::fabs(f.beta_fit - p.scaling.beta) <= 1e-2, "near exponent " + k.tag() + " = " + fmt(f.beta_fit));
  }
}

void check_flow(Rec& c) {
  double worst_lo = 1e300, worst_hi = -1e300, slope = 0, pos = -1e300;
  for (const auto& k : kProfileCases) {
    const Localization L{make_profile_params(k.gamma, k.mu, k.K), make_cutoff_config()};
    const double t0 = L.cutoff.tau0;
    for (double p : {0.1, 1.0, 10.0, 1e3})
      for (double dt : {0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0}) {
        const double r = flow_map(L, p, t0 + dt) / p;
        worst_lo = std::min(worst_lo, r / std::exp((1 - k.mu) * dt));
        worst_hi = std::max(worst_hi, r / std::exp(dt));
      }
    const double y0 = L.cutoff.y0;
    for (double dt : {0.0, 1.0, 3.0, 5.0}) {
      const auto [a, b] = transition_zone(L, t0 + dt);
      for (double y : linspace(a, b, 2001)) {
        const double d = dchi(L, t0 + dt, y);
        slope = std::max(slope, -d * y0);
        pos = std::max(pos, d);
      }
    }
  }
  c.metric("min Y/(p e^{(1-mu)dtau})", worst_lo);
  c.metric("max Y/(p e^{dtau})", worst_hi);
  c.metric("max -y0 dchi", slope);
  c.require(worst_lo >= 1 - 1e-6, "lower sandwich " + fmt(worst_lo));
  c.require(worst_hi <= 1 + 1e-6, "upper sandwich " + fmt(worst_hi));
  c.require(slope <= 2 + 1e-6, "cutoff slope below -2/y0: " + fmt(slope));
  c.require(pos <= 1e-6, "cutoff slope positive: " + fmt(pos));
}

void check_source_decay(Rec& c) {
  const Localization L{make_profile_params(2.0, 2.0 / 3.0), make_cutoff_config()};
  const auto fits = fit_source_decay(L, 3.0, 7);
  c.require(static_cast<int>(fits.size()) == L.profile.scaling.n_mu, "one fit per i = 1..n_mu");
  for (const auto& f : fits) {
    c.metric("rate i=" + std::to_string(f.i), f.rate);
    c.metric("bound i=" + std::to_string(f.i), f.bound);
    c.require(f.rate >= f.bound - 0.05, "i = " + std::to_string(f.i) + " rate " + fmt(f.rate));
  }
}

void check_modulation(Rec& c) {
  for (const auto& k : kProfileCases) {
    const auto s = derive_indices(k.gamma, k.mu);
    auto st = zero_state(s);
    st.w[0] = 0.01;
    const auto tr = integrate_modulation(s, st, 5.0, 1e-3);
    const double exact = std::exp(-damping_coeffs(s, 2).g * 5.0) * 0.01;
    const double rel = std::fabs(tr.back().w[0] / exact - 1);
    std::vector<double> w(std::max<std::size_t>(st.w.size(), 1), 0.0);
    w[0] = 0.01;
    const double q = std::fabs(q_polynomial(s, w, 2) + (3 - k.gamma) / (5 * k.gamma - 3) * 0.01);
    c.metric("w2 rel error" + k.tag(), rel);
    c.metric("q2 abs error" + k.tag(), q);
    c.require(rel < 1e-8, "w2 closed form " + k.tag() + " " + fmt(rel));
    c.require(q < 1e-6, "q2 oracle " + k.tag() + " " + fmt(q));
  }
}

void check_trapping(Rec& c) {
  const auto s = derive_indices(2.0, 2.0 / 3.0);
  const auto on = project_to_manifold(s, {1e-3, -5e-4});
  const auto a = classify(s, integrate_modulation(s, on, 20.0, 1e-3, 50));
  auto off = on;
  off.z[0] += 1e-6;
  const auto b = classify(s, integrate_modulation(s, off, 30.0, 1e-3, 50));
  c.metric("a0", s.a0);
  c.metric("on-manifold decay rate", a.rate);
  c.metric("off-manifold growth rate", b.rate);
  c.require(a.kind == TrajectoryClass::Decaying, "on-manifold data classified " + to_string(a.kind));
  c.require(a.rate >= s.a0 - 0.05, "decay rate " + fmt(a.rate));
  c.require(b.kind == TrajectoryClass::Growing && b.index == 2, "off-manifold data classified " + to_string(b.kind));
  c.require(std::fabs(b.rate - 1.0 / 3.0) <= 0.02, "growth rate " + fmt(b.rate));
}

void check_spectrum(Rec& c) {
  for (double mu : {0.5, 2.0 / 3.0, 0.6}) {
    const auto r = spectral_report(2.0, mu);
    double worst = 0;
    for (double v : r.residuals) worst = std::max(worst, v);
    for (const auto& [n, v] : r.symmetry_residuals) worst = std::max(worst, v);
    c.metric("max residual mu=" + fmt(mu), worst);
    c.require(worst < 1e-6, "eigen residual at mu = " + fmt(mu) + ": " + fmt(worst));
  }
  // mu = 1/2: Lambda_v zbar against a multiple of Lambda_T zbar
  const double gamma = 2.0;
  const auto p = make_profile_params(gamma, 0.5, 0.5);
  auto identity_error = [&](double cst) {
    double err = 0, scale = 0;
    for (double y : geomspace(1e-4, 1e4, 801)) {
      const double v = symmetry_mode(p, Symmetry::Galilean, y), t = symmetry_mode(p, Symmetry::TimeShift, y);
      err = std::max(err, std::fabs(v - cst * t));
      scale = std::max(scale, std::fabs(v));
    }
    return err / scale;
  };
  const double literal = -(gamma + 1) / 4, corrected = -4 / ((gamma + 1) * p.K);
  const double e_lit = identity_error(literal), e_cor = identity_error(corrected);
  c.metric("identity error, constant -(gamma+1)/4", e_lit);
  c.metric("identity error, constant -4/((gamma+1)K)", e_cor);
  c.require(e_lit < 1e-10, "Lambda_v = -(gamma+1)/4 Lambda_T at K = 1/2, relative error " + fmt(e_lit));
  c.note("Lambda_v = " + fmt(corrected) + " Lambda_T holds to " + fmt(e_cor) + " (constant -4/((gamma+1)K))");
}

void check_gap(Rec& c) {
  double worst = 1e300;
  for (int k = 0; k <= 100; ++k) {
    const double mu = 0.5 + (0.99 - 0.5) * k / 100.0;
    const auto s = derive_indices(2.0, mu);
    worst = std::min(worst, weighted_gap(s, s.n_mu).a_min);
  }
  c.metric("min a_min(n_mu) over sweep", worst);
  c.require(worst > 0, "a_min(n_mu) not positive on the sweep");
  for (double mu : {0.6, 0.75}) {
    const auto s = derive_indices(2.0, mu);
    const int m = static_cast<int>(std::ceil(s.beta + 0.5));
    const auto g = weighted_gap(s, m);
    c.metric("a_min(ceil(beta+1/2)) mu=" + fmt(mu), g.a_min);
    c.require(g.a_min == 0.0, "a_min(" + std::to_string(m) + ") at mu = " + fmt(mu) + " is " + fmt(g.a_min) +
                                  (s.in_H ? "" : " (beta + 1/2 = " + fmt(s.beta + 0.5) + " is not an integer)"));
  }
  const auto s = derive_indices(2.0, 5.0 / 7.0);
  c.note("mu = 5/7 (beta + 1/2 = 4): a_min(4) = " + fmt(weighted_gap(s, 4).a_min));
}

void check_cross_oracle(Rec& c) {
  const auto p = make_profile_params(2.0, 2.0 / 3.0);
  const Localization L{p, make_cutoff_config()};
  SsInit init;
  init.mod = zero_state(p.scaling);
  init.mod.z = {0.05, 0.02};
  init.mod.w = {0.03, 0.01};
  std::vector<double> errs;
  for (double h : {0.02, 0.01}) {
    SsRunConfig cfg;
    cfg.h = h;
    cfg.tau_span = 3.0;
    cfg.record_every = 20;
    const auto r = run_selfsimilar(L, init, cfg);
    auto st0 = init.mod;
    st0.tau = L.cutoff.tau0;
    const auto ode = integrate_modulation(p.scaling, st0, st0.tau + cfg.tau_span, r.dt, cfg.record_every);
    c.require(!r.early_stop, "run stopped early: " + r.stop_reason);
    c.require(ode.size() == r.series.size(), "record count");
    double err = 0;
    for (std::size_t k = 0; k < std::min(ode.size(), r.series.size()); ++k)
      err = std::max(err, std::fabs(r.series[k].z_ext[0] - ode[k].z[0]));
    const double tol = 5 * (h + r.dt);
    c.metric("max |z2 - z2_ode| h=" + fmt(h), err);
    c.metric("tolerance h=" + fmt(h), tol);
    c.require(err < tol, "h = " + fmt(h) + " error " + fmt(err));
    errs.push_back(err);
  }
  const double order = std::log2(errs[0] / errs[1]);
  c.metric("order", order);
  c.require(order >= 0.9, "observed order " + fmt(order));
}

void check_steady(Rec& c) {
  const auto p = make_profile_params(2.0, 2.0 / 3.0);
  std::vector<double> hs{0.04, 0.02, 0.01}, drift;
  for (double h : hs) {
    const auto g = selfsimilar_grid(h, 100.0);
    const auto s0 = steady_state(p, g, 0.0);
    const int n = static_cast<int>(std::ceil(2.0 / selfsimilar_dt(s0, p.scaling, 0.8)));
    auto st = s0;
    for (int k = 0; k < n; ++k) st = step_selfsimilar(st, p.scaling, 2.0 / n, {});
    double d = 0;
    for (std::size_t i = 0; i < g->size(); ++i)
      d = std::max({d, std::fabs(st.z.v[i] - s0.z.v[i]), std::fabs(st.w.v[i])});
    drift.push_back(d);
    c.metric("drift h=" + fmt(h), d);
  }
  const double order = std::log2(drift[1] / drift[2]);
  c.metric("C = drift/h at finest", drift[2] / hs[2]);
  c.metric("order", order);
  c.require(order >= 0.9, "observed order " + fmt(order));
}

PhysicalRun physical(double mu, const VerifyOptions& opt) {
  const Localization L{make_profile_params(2.0, mu), make_cutoff_config()};
  PhysicalRunConfig cfg;
  cfg.n_cells = opt.physical_cells;
  return run_physical(L, -0.1, cfg);
}

void check_blowup(Rec& c, const VerifyOptions& opt) {
  const double t0 = -0.1;
  const auto start = std::chrono::steady_clock::now();
  const auto r = physical(0.5, opt);
  const double secs = seconds_since(start);
  const auto b = blowup_detect(r.series, t0, r.final_state.t);
  c.metric("cells", opt.physical_cells);
  c.metric("seconds", secs);
  c.metric("boundary law slope", b.boundary_law_slope);
  c.metric("max-slope law slope", -b.slope);
  c.metric("blowup time", b.T);
  c.metric("argmax x", b.location);
  c.require(std::fabs(b.boundary_law_slope / 0.75 - 1) <= 0.02, "boundary law slope " + fmt(b.boundary_law_slope));
  c.require(std::fabs(b.T) <= 0.02 * std::fabs(t0), "blowup time " + fmt(b.T));
  c.require(b.location == 0.0, "argmax of |z_x| at x = " + fmt(b.location));
  c.require(r.positivity_ok, "sound speed lost positivity");
  c.require(!r.resolution_exhausted, "resolution exhausted before t_stop");
  if (opt.physical_cells == (1 << 13)) c.require(secs < 60, "runtime " + fmt(secs) + " s");
}

void check_holder(Rec& c, const VerifyOptions& opt) {
  for (double mu : {0.5, 2.0 / 3.0}) {
    const auto r = physical(mu, opt);
    const auto h = holder_fit(r.final_state, derive_indices(2.0, mu));
    c.metric("exponent mu=" + fmt(mu), h.exponent);
    c.metric("naive exponent mu=" + fmt(mu), h.naive);
    c.require(std::fabs(h.exponent / (1 - mu) - 1) <= 0.05, "mu = " + fmt(mu) + " exponent " + fmt(h.exponent));
  }
}

void check_time_shift(Rec& c) {
  const auto s = derive_indices(2.0, 0.5);
  const double eps0 = 1e-2;
  const auto r = time_shift_integrate(s, eps0, 0.0, 40.0);
  c.metric("T*", r.Tstar);
  c.metric("ceiling", r.ceiling);
  c.require(r.strictly_decreasing, "w1 not strictly decreasing");
  c.require(r.Tstar < 2 * eps0, "T* " + fmt(r.Tstar) + " >= 2 eps0");
  c.require(r.Tstar < r.ceiling, "T* above the ceiling " + fmt(r.ceiling));
}

void check_inequalities(Rec& c) {
  const auto a = inequality_checks(3, 4096), b = inequality_checks(3, 8192);
  c.require(a.rows.size() == 10 && b.rows.size() == 10, "battery size");
  double worst_ratio = 0, worst_drift = 0;
  for (std::size_t k = 0; k < std::min(a.rows.size(), b.rows.size()); ++k) {
    const auto &x = a.rows[k], &y = b.rows[k];
    for (auto [u, v] : {std::pair{x.hardy, y.hardy}, {x.gn, y.gn}, {x.linf, y.linf}}) {
      c.require(std::isfinite(u) && std::isfinite(v), x.name + " ratio not finite");
      worst_ratio = std::max(worst_ratio, v);
      const double d = std::fabs(u / v - 1);
      worst_drift = std::max(worst_drift, d);
      if (d >= 0.01) c.require(false, x.name + " refinement change " + fmt(d));
    }
  }
  c.metric("max ratio", worst_ratio);
  c.metric("max refinement change", worst_drift);
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "profile_residual",    "profile_bounds",      "asymptotic_exponents", "flow_map_sandwich",
      "source_decay",        "modulation_closed_form", "trapping_dichotomy", "spectrum",
      "weighted_gap",        "pde_ode_cross_oracle", "steady_state_preservation", "physical_blowup_law",
      "holder_exponent",     "time_shift",          "inequality_battery"};
  return names;
}

const std::vector<std::string>& check_criteria() {
  static const std::vector<std::string> text{
      "steady residual / (1+y) < 1e-8, Ubar(0) and zbar'(0) to 1e-10, < 1 s per case",
      "1 + (gamma+1)/4 zbar' in [1-mu-1e-10, 1)",
      "far-field exponent 1-mu +- 1e-3, near-origin exponent beta +- 1e-2",
      "Y/p in [e^{(1-mu)dtau}, e^{dtau}] to 1e-6, cutoff slope in [-2/y0, 0] + 1e-6",
      "fitted decay of |d^i S_z|^2 >= (1-mu)(2i+4mu-3) - 0.05, i = 1..n_mu",
      "w2 vs e^{-g2 dtau} w2 relative 1e-8, q2 vs -(3-gamma)/(5gamma-3) w2 absolute 1e-6",
      "on-manifold decay rate >= a0 - 0.05, off-manifold growth rate 1/3 +- 0.02",
      "eigen and symmetry residuals < 1e-6, mu = 1/2 identity Lambda_v = -(gamma+1)/4 Lambda_T to 1e-10",
      "a_min(n_mu) > 0 on the sweep, a_min(ceil(beta+1/2)) = 0 at mu = 3/5 and 3/4",
      "|z2 - z2_ode| < 5 (h + dt) at two refinements, order >= 0.9",
      "steady drift over dtau = 2 with order >= 0.9",
      "1/z_x(t,0) slope 0.75 +- 2%, |T| <= 2% |t0|, argmax at x = 0, < 60 s",
      "Hölder exponent 1-mu +- 5% for mu = 1/2, 2/3",
      "w1 strictly decreasing, T* < 2 eps0 and < the closed-form ceiling",
      "inequality ratios finite and stable to 1% under refinement"};
  return text;
}

CheckResult run_check(int id, const VerifyOptions& opt) {
  if (id < 1 || id > kCheckCount) throw IndexError("check id must lie in 1.." + std::to_string(kCheckCount));
  CheckResult r;
  r.id = id;
  r.name = check_names()[id - 1];
  r.pass = true;
  Rec c{r};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: check_profile_residual(c); break;
      case 2: check_bounds(c); break;
      case 3: check_asymptotics(c); break;
      case 4: check_flow(c); break;
      case 5: check_source_decay(c); break;
      case 6: check_modulation(c); break;
      case 7: check_trapping(c); break;
      case 8: check_spectrum(c); break;
      case 9: check_gap(c); break;
      case 10: check_cross_oracle(c); break;
      case 11: check_steady(c); break;
      case 12: check_blowup(c, opt); break;
      case 13: check_holder(c, opt); break;
      case 14: check_time_shift(c); break;
      case 15: check_inequalities(c); break;
    }
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<CheckResult> run_all_checks(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  for (int id = 1; id <= kCheckCount; ++id) out.push_back(run_check(id, opt));
  return out;
}

}  // namespace vacblow
