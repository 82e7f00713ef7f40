#include "vacblow/modulation.hpp"

#include <algorithm>
#include <cmath>

#include "vacblow/csv.hpp"
#include "vacblow/errors.hpp"
#include "vacblow/numerics.hpp"

namespace vacblow {

ModulationState zero_state(const GasScaling& s, double tau) {
  ModulationState st;
  st.tau = tau;
  st.z.assign(std::max(s.i_max() - 1, 0), 0.0);
  st.w.assign(st.z.size(), 0.0);
  return st;
}

NonlinearPair boundary_nonlinear(const GasScaling& s, const ModulationState& st, int i) {
  if (i < 2 || i > st.top_index() || i > s.ceil_beta)
    throw IndexError("boundary_nonlinear: index " + std::to_string(i) + " out of range");
  const double A = s.A(), B = s.B();
  NonlinearPair n;
  for (int m = 1; m <= i - 2; ++m) {
    const double c = binom(i, m);
    const double za = st.zi(i - m), wa = st.wi(i - m), zb = st.zi(m + 1), wb = st.wi(m + 1);
    n.Nz += c * (A * za * zb + B * wa * zb);
    n.Nw += c * (B * za * wb + A * wa * wb);
  }
  return n;
}

ModulationState rhs_modulation(const GasScaling& s, const ModulationState& st) {
  ModulationState d;
  d.tau = 1.0;
  d.z.resize(st.z.size());
  d.w.resize(st.w.size());
  const double cw = (3.0 - s.gamma) * s.mu / (s.gamma + 1.0);
  for (int i = 2; i <= st.top_index(); ++i) {
    const Damping kg = damping_coeffs(s, i);
    const NonlinearPair n = boundary_nonlinear(s, st, i);
    d.z[i - 2] = -kg.k * st.zi(i) + cw * st.wi(i) - n.Nz;
    d.w[i - 2] = -kg.g * st.wi(i) - n.Nw;
  }
  return d;
}

namespace {

void axpy(ModulationState& y, double a, const ModulationState& x) {
  for (std::size_t k = 0; k < y.z.size(); ++k) {
    y.z[k] += a * x.z[k];
    y.w[k] += a * x.w[k];
  }
}

ModulationState rk4_step(const GasScaling& s, const ModulationState& st, double h) {
  const ModulationState k1 = rhs_modulation(s, st);
  ModulationState t = st;
  axpy(t, 0.5 * h, k1);
  const ModulationState k2 = rhs_modulation(s, t);
  t = st;
  axpy(t, 0.5 * h, k2);
  const ModulationState k3 = rhs_modulation(s, t);
  t = st;
  axpy(t, h, k3);
  const ModulationState k4 = rhs_modulation(s, t);
  ModulationState out = st;
  axpy(out, h / 6.0, k1);
  axpy(out, h / 3.0, k2);
  axpy(out, h / 3.0, k3);
  axpy(out, h / 6.0, k4);
  out.tau = st.tau + h;
  return out;
}

double max_rate(const GasScaling& s, int top) {
  double r = 0.0;
  for (int i = 2; i <= top; ++i) {
    const Damping kg = damping_coeffs(s, i);
    r = std::max({r, std::fabs(kg.k), std::fabs(kg.g)});
  }
  return r;
}

}  // namespace

std::vector<ModulationState> integrate_modulation(const GasScaling& s, const ModulationState& st0, double tau_end,
                                                  double dt, int stride) {
  if (st0.z.size() != st0.w.size()) throw ConfigError("integrate_modulation: z and w sizes differ");
  if (!(dt > 0)) throw ConfigError("integrate_modulation: dt must be positive");
  if (dt * max_rate(s, st0.top_index()) >= 0.1)
    throw ConfigError("integrate_modulation: dt too large for the stiffest rate");
  if (tau_end < st0.tau) throw ConfigError("integrate_modulation: tau_end before the initial time");
  const long n = std::lround(std::ceil((tau_end - st0.tau) / dt - 1e-9));
  const double h = n > 0 ? (tau_end - st0.tau) / n : 0.0;
  std::vector<ModulationState> out{st0};
  ModulationState st = st0;
  for (long k = 1; k <= n; ++k) {
    st = rk4_step(s, st, h);
    if (k % stride == 0 || k == n) out.push_back(st);
  }
  return out;
}

double q2_closed_form(const GasScaling& s, double w2) { return -(3.0 - s.gamma) / (5.0 * s.gamma - 3.0) * w2; }

namespace {

// e^{k_i T} z_i(T) from z_i(0) = 0 with lower constraints q imposed.
std::pair<double, double> unstable_amplitudes(const GasScaling& s, const std::vector<double>& w,
                                              const std::vector<double>& q, int i, const QOracleOptions& opt) {
  ModulationState st;
  st.z.assign(i - 1, 0.0);
  st.w.assign(w.begin(), w.begin() + (i - 1));
  for (int j = 2; j < i; ++j) st.z[j - 2] = q[j - 2];
  const double k = damping_coeffs(s, i).k;
  const auto a = integrate_modulation(s, st, opt.horizon1, opt.dt, 1 << 30);
  const auto b = integrate_modulation(s, a.back(), opt.horizon2, opt.dt, 1 << 30);
  return {std::exp(k * opt.horizon1) * a.back().zi(i), std::exp(k * opt.horizon2) * b.back().zi(i)};
}

}  // namespace

std::vector<double> q_values(const GasScaling& s, const std::vector<double>& w, int order, const QOracleOptions& opt) {
  if (order < 2 || order > s.ceil_beta) throw IndexError("q_values: order must lie in [2, ceil(beta)]");
  if (static_cast<int>(w.size()) < order - 1) throw IndexError("q_values: need w_2..w_order");
  std::vector<double> q;
  for (int i = 2; i <= order; ++i) {
    const auto [L1, L2] = unstable_amplitudes(s, w, q, i, opt);
    // L(T) = L_inf + c e^{-r T}; r from the slowest forcing mode
    const Damping kg = damping_coeffs(s, i);
    const double r = std::min(kg.g, 2.0 * damping_coeffs(s, 2).g) - kg.k;
    const double den = std::expm1(r * (opt.horizon2 - opt.horizon1));
    const double Linf = L2 + (L2 - L1) / den;
    double wscale = 0;
    for (int j = 0; j < i - 1; ++j) wscale = std::max(wscale, std::fabs(w[j]));
    if (!std::isfinite(Linf) || std::fabs(L2 - L1) / den > opt.tol * std::fabs(Linf) + 1e-15 * wscale)
      throw NumericalError("q_values: horizon extrapolation did not converge", L1, L2);
    q.push_back(-Linf);
  }
  return q;
}

double q_polynomial(const GasScaling& s, const std::vector<double>& w, int i, const QOracleOptions& opt) {
  return q_values(s, w, i, opt).back();
}

int constraint_order(const GasScaling& s) { return std::min(s.floor_beta, s.i_max()); }

bool is_on_manifold(const GasScaling& s, const ModulationState& st, double tol, const QOracleOptions& opt) {
  if (s.in_H && std::fabs(st.wi(2)) > tol) return false;
  const int ord = constraint_order(s);
  if (ord < 2) return true;
  const auto q = q_values(s, st.w, ord, opt);
  for (int j = 2; j <= ord; ++j)
    if (std::fabs(st.zi(j) - q[j - 2]) > tol) return false;
  return true;
}

ModulationState project_to_manifold(const GasScaling& s, std::vector<double> w, double tau,
                                    const QOracleOptions& opt) {
  ModulationState st = zero_state(s, tau);
  if (w.size() != st.w.size()) throw IndexError("project_to_manifold: expected w_2..w_imax");
  if (s.in_H) w[0] = 0.0;
  st.w = w;
  const int ord = constraint_order(s);
  if (ord >= 2) {
    const auto q = q_values(s, w, ord, opt);
    for (int j = 2; j <= ord; ++j) st.z[j - 2] = q[j - 2];
  }
  return st;
}

namespace {

LinearFit late_fit(const std::vector<double>& t, const std::vector<double>& v) {
  std::vector<double> x, y;
  for (std::size_t k = t.size() / 2; k < t.size(); ++k)
    if (v[k] > 0 && std::isfinite(v[k])) {
      x.push_back(t[k]);
      y.push_back(std::log(v[k]));
    }
  if (x.size() < 3) throw FitError("classify: too few nonzero samples in the late half");
  return linear_fit(x, y);
}

}  // namespace

Classification classify(const GasScaling& s, const std::vector<ModulationState>& traj) {
  (void)s;
  Classification c;
  std::vector<double> t, mx;
  for (const auto& st : traj) {
    t.push_back(st.tau);
    double m = 0;
    for (std::size_t k = 0; k < st.z.size(); ++k) m = std::max({m, std::fabs(st.z[k]), std::fabs(st.w[k])});
    mx.push_back(m);
  }
  if (*std::max_element(mx.begin(), mx.end()) == 0.0) return c;  // Zero
  const LinearFit f = late_fit(t, mx);
  c.stderr_ = f.slope_stderr;
  if (std::fabs(f.slope) < 2 * f.slope_stderr) {
    c.kind = TrajectoryClass::Indeterminate;
    c.rate = f.slope;
    return c;
  }
  if (f.slope < 0) {
    c.kind = TrajectoryClass::Decaying;
    c.rate = -f.slope;
    return c;
  }
  c.kind = TrajectoryClass::Growing;
  c.rate = f.slope;
  for (int i = 2; i <= traj.front().top_index(); ++i) {
    std::vector<double> v;
    for (const auto& st : traj) v.push_back(std::fabs(st.zi(i)));
    try {
      const LinearFit fi = late_fit(t, v);
      if (fi.slope > 2 * fi.slope_stderr && fi.slope > 1e-3) {
        c.index = i;
        c.rate = fi.slope;
        c.stderr_ = fi.slope_stderr;
        break;
      }
    } catch (const FitError&) {
    }
  }
  return c;
}

std::string to_string(TrajectoryClass c) {
  switch (c) {
    case TrajectoryClass::Decaying: return "decaying";
    case TrajectoryClass::Growing: return "growing";
    case TrajectoryClass::Indeterminate: return "indeterminate";
    case TrajectoryClass::Zero: return "zero";
  }
  return "?";
}

double phi_cut(double y) {
  if (y <= 0.5) return 1.0;
  if (y >= 1.0) return 0.0;
  const double t = 2 * y - 1;
  return 1 - t * t * t * (10 - 15 * t + 6 * t * t);
}

double dphi_cut(double y) {
  if (y <= 0.5 || y >= 1.0) return 0.0;
  const double t = 2 * y - 1;
  return -2 * 30 * t * t * (1 - t) * (1 - t);
}

ModField modulation_fields(const GasScaling& s, const ModulationState& st, double y) {
  (void)s;
  ModField f;
  if (y >= 1.0) return f;
  const double ph = phi_cut(y), dph = dphi_cut(y);
  double pz = 0, pw = 0, dpz = 0, dpw = 0;
  double fact = 1.0;
  for (int i = 2; i <= st.top_index(); ++i) {
    fact *= i;
    const double yi = std::pow(y, i) / fact, dyi = std::pow(y, i - 1) / (fact / i);
    pz += st.zi(i) * yi;
    pw += st.wi(i) * yi;
    dpz += st.zi(i) * dyi;
    dpw += st.wi(i) * dyi;
  }
  f.Mz = ph * pz;
  f.Mw = ph * pw;
  f.dMz = dph * pz + ph * dpz;
  f.dMw = dph * pw + ph * dpw;
  return f;
}

double time_shift_w1_rate(const GasScaling& s, double w1) {
  const double g = s.gamma, mu = s.mu, B = s.B();
  return -mu * w1 * (1 - (3 - g) / (g + 1) * mu / (mu - B * w1)) - (g + 1) * mu * w1 * w1 / (4 * mu - (3 - g) * w1);
}

TimeShiftResult time_shift_integrate(const GasScaling& s, double eps0, double tau0, double tau_end, double dt) {
  const double mu = s.mu, B = s.B(), g = s.gamma;
  if (eps0 < 0) throw DomainError("time_shift_integrate: eps0 must be nonnegative");
  if (mu - B * eps0 <= 0) throw DomainError("time_shift_integrate: eps0 too large, mu - (3-gamma)/4 eps0 <= 0");
  if (1 - (3 - g) / (g + 1) * mu / (mu - B * eps0) <= 0)
    throw DomainError("time_shift_integrate: eps0 too large, linear damping lost");
  if (!(dt > 0) || tau_end < tau0) throw ConfigError("time_shift_integrate: bad time window");

  auto Tdot = [&](double tau, double w1) { return std::exp(-mu * tau) * B * w1 / (mu - B * w1); };
  // z1 equation with z1 = 0
  auto z1_res = [&](double tau, double w1) {
    const double c = (3 - g) * mu / (g + 1);
    return -c * w1 + (-c * w1 + 4 * mu * mu / (g + 1)) * std::exp(mu * tau) * Tdot(tau, w1);
  };
  TimeShiftResult r;
  r.ceiling = std::exp(-mu * tau0) * B * eps0 / (mu * (mu - B * eps0));
  const long n = std::max(1L, std::lround(std::ceil((tau_end - tau0) / dt)));
  const double h = (tau_end - tau0) / n;
  double w = eps0, T = 0, tau = tau0;
  auto tail = [&](double ta, double wa) { return std::exp(-mu * ta) / mu * B * wa / (mu - B * wa); };
  r.traj.push_back({tau, w, T, T + tail(tau, w)});
  for (long k = 0; k < n; ++k) {
    const double k1w = time_shift_w1_rate(s, w), k1T = Tdot(tau, w);
    const double w2 = w + 0.5 * h * k1w;
    const double k2w = time_shift_w1_rate(s, w2), k2T = Tdot(tau + 0.5 * h, w2);
    const double w3 = w + 0.5 * h * k2w;
    const double k3w = time_shift_w1_rate(s, w3), k3T = Tdot(tau + 0.5 * h, w3);
    const double w4 = w + h * k3w;
    const double k4w = time_shift_w1_rate(s, w4), k4T = Tdot(tau + h, w4);
    const double wn = w + h / 6 * (k1w + 2 * k2w + 2 * k3w + k4w);
    T += h / 6 * (k1T + 2 * k2T + 2 * k3T + k4T);
    tau = tau0 + (k + 1) * h;
    if (eps0 > 0 && !(wn < w)) r.strictly_decreasing = false;
    w = wn;
    r.max_z1_residual = std::max(r.max_z1_residual, std::fabs(z1_res(tau, w)));
    r.traj.push_back({tau, w, T, T + tail(tau, w)});
  }
  r.tail_bound = tail(tau, w);
  r.Tstar = T + r.tail_bound;
  return r;
}

void write_trajectory_csv(const std::vector<ModulationState>& traj, const std::string& path) {
  std::vector<std::string> head{"tau"};
  const int top = traj.empty() ? 1 : traj.front().top_index();
  for (int i = 2; i <= top; ++i) head.push_back("z" + std::to_string(i));
  for (int i = 2; i <= top; ++i) head.push_back("w" + std::to_string(i));
  CsvWriter out(path, head);
  for (const auto& st : traj) {
    std::vector<double> row{st.tau};
    row.insert(row.end(), st.z.begin(), st.z.end());
    row.insert(row.end(), st.w.begin(), st.w.end());
    out.row(row);
  }
}

}  // namespace vacblow
