#include "vacblow/localization.hpp"

#include <cmath>

#include "vacblow/csv.hpp"
#include "vacblow/errors.hpp"
#include "vacblow/numerics.hpp"

namespace vacblow {

CutoffConfig make_cutoff_config(double tau0, double y0) {
  CutoffConfig c;
  c.tau0 = tau0;
  c.y0 = y0 > 0 ? y0 : std::exp(tau0);
  if (!(c.y0 > 1.0)) throw DomainError("cutoff scale y0 must exceed 1");
  return c;
}

namespace {

double bump(double lam, double x) { return x > 0 ? std::exp(-lam / x) : 0.0; }

double smoothstep(double lam, double t) {
  if (t <= 0) return 1.0;
  if (t >= 1) return 0.0;
  const double a = bump(lam, 1 - t), b = bump(lam, t);
  return a / (a + b);
}

double dsmoothstep(double lam, double t) {
  if (t <= 0 || t >= 1) return 0.0;
  const double a = bump(lam, 1 - t), b = bump(lam, t);
  const double da = -a * lam / ((1 - t) * (1 - t));  // d/dt of bump(1-t)
  const double db = b * lam / (t * t);
  return (da * b - a * db) / ((a + b) * (a + b));
}

double dtau_of(const Localization& L, double tau) {
  const double d = tau - L.cutoff.tau0;
  if (d < -1e-14) throw DomainError("tau must be >= tau0");
  return std::max(d, 0.0);
}

double y_of_zeta(const ProfileParams& p, double zeta) {
  return (zeta + zeta_coeff(p) * std::pow(zeta, p.scaling.beta)) / (2.0 * p.scaling.ubar0());
}

}  // namespace

double chi0(const CutoffConfig& c, double p) { return smoothstep(c.chi0_lambda, (p - c.y0) / c.y0); }

double dchi0(const CutoffConfig& c, double p) { return dsmoothstep(c.chi0_lambda, (p - c.y0) / c.y0) / c.y0; }

Jet chi0_jet(const CutoffConfig& c, const Jet& p) {
  const int n = p.order();
  const double t0 = (p.value() - c.y0) / c.y0;
  if (t0 <= 0) return Jet(1.0, n);
  if (t0 >= 1) return Jet(0.0, n);
  const Jet t = (p - c.y0) / c.y0;
  const Jet a = exp(-c.chi0_lambda / (1.0 - t));
  const Jet b = exp(-c.chi0_lambda / t);
  return a / (a + b);
}

double flow_map(const Localization& L, double p, double tau) {
  if (p < 0) throw DomainError("flow_map: label must be nonnegative");
  const double dt = dtau_of(L, tau);
  if (p == 0 || dt == 0) return p;
  const double zeta = -zbar(L.profile, p) * std::exp((1 - L.profile.scaling.mu) * dt);
  return y_of_zeta(L.profile, zeta);
}

double flow_map_ode(const Localization& L, double p, double tau, double dtau) {
  if (p < 0) throw DomainError("flow_map_ode: label must be nonnegative");
  const double span = dtau_of(L, tau);
  if (p == 0 || span == 0) return p;
  const double c = (L.profile.scaling.gamma + 1.0) / 2.0;
  auto f = [&](double ly) { return 1.0 - c * solve_ubar(L.profile, std::exp(ly)); };
  const int n = std::max(1, static_cast<int>(std::ceil(span / dtau)));
  const double h = span / n;
  double ly = std::log(p);
  for (int k = 0; k < n; ++k) {
    const double k1 = f(ly), k2 = f(ly + 0.5 * h * k1), k3 = f(ly + 0.5 * h * k2), k4 = f(ly + h * k3);
    ly += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!std::isfinite(ly)) throw NumericalError("flow_map_ode: integrator produced non-finite state", ly, ly);
  }
  return std::exp(ly);
}

double inverse_flow(const Localization& L, double y, double tau) {
  if (y < 0) throw DomainError("inverse_flow: y must be nonnegative");
  const double dt = dtau_of(L, tau);
  if (y == 0 || dt == 0) return y;
  const double mu = L.profile.scaling.mu;
  const double zeta = -zbar(L.profile, y) * std::exp(-(1 - mu) * dt);
  const double p = y_of_zeta(L.profile, zeta);
  const double lo = y * std::exp(-dt), hi = y * std::exp(-(1 - mu) * dt);
  if (p < lo * (1 - 1e-12) || p > hi * (1 + 1e-12))
    throw NumericalError("inverse_flow: label outside the sandwich window", lo, hi);
  return p;
}

double inverse_flow_in(const Localization& L, double y, double tau, double lo, double hi) {
  double flo = flow_map(L, lo, tau) - y, fhi = flow_map(L, hi, tau) - y;
  if (flo > 0 || fhi < 0) throw NumericalError("inverse_flow_in: window does not bracket the label", lo, hi);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double m = 0.5 * (lo + hi);
    (flow_map(L, m, tau) > y ? hi : lo) = m;
  }
  return 0.5 * (lo + hi);
}

double chi(const Localization& L, double tau, double y) { return chi0(L.cutoff, inverse_flow(L, y, tau)); }

Jet chi_jet(const Localization& L, double tau, double y, int order) {
  const double dt = dtau_of(L, tau);
  if (y == 0) return Jet(1.0, order);
  const double p0 = inverse_flow(L, y, tau);
  const double t0 = (p0 - L.cutoff.y0) / L.cutoff.y0;
  if (t0 <= 0) return Jet(1.0, order);
  if (t0 >= 1) return Jet(0.0, order);
  const ProfileParams& pp = L.profile;
  const Jet zeta_p = -zbar_jet(pp, y, order) * std::exp(-(1 - pp.scaling.mu) * dt);
  const Jet p = (zeta_p + zeta_coeff(pp) * pow(zeta_p, pp.scaling.beta)) / (2.0 * pp.scaling.ubar0());
  return chi0_jet(L.cutoff, p);
}

double dchi(const Localization& L, double tau, double y) { return chi_jet(L, tau, y, 1)[1]; }

Jet ring_z_jet(const Localization& L, double tau, double y, int order) {
  return chi_jet(L, tau, y, order) * zbar_jet(L.profile, y, order);
}

double ring_z(const Localization& L, double tau, double y) { return chi(L, tau, y) * zbar(L.profile, y); }

double dring_z(const Localization& L, double tau, double y) {
  const double c = chi(L, tau, y);
  if (c == 1.0 || c == 0.0) return c * dzbar(L.profile, y);
  return ring_z_jet(L, tau, y, 1)[1];
}

Jet source_Sz_jet(const Localization& L, double tau, double y, int order) {
  const double A = L.profile.scaling.A();
  const Jet z = zbar_jet(L.profile, y, order + 1);
  const Jet c = chi_jet(L, tau, y, order + 1);
  const Jet dring = (c * z).derivative();
  Jet zt(0.0, order), ct(0.0, order);
  for (int k = 0; k <= order; ++k) {
    zt[k] = z[k];
    ct[k] = c[k];
  }
  return A * zt * (1.0 - ct) * dring;
}

double source_Sz(const Localization& L, double tau, double y) {
  const double c = chi(L, tau, y);
  if (c == 1.0 || c == 0.0) return 0.0;
  return source_Sz_jet(L, tau, y, 0).value();
}

std::pair<double, double> transition_zone(const Localization& L, double tau) {
  return {flow_map(L, L.cutoff.y0, tau), flow_map(L, 2 * L.cutoff.y0, tau)};
}

double source_norm_sq(const Localization& L, double tau, int i, int panels) {
  const auto [a, b] = transition_zone(L, tau);
  auto f = [&](double y) {
    const double v = source_Sz_jet(L, tau, y, i).deriv(i);
    return v * v;
  };
  return gauss_panels(f, a, b, panels);
}

std::vector<SourceDecayFit> fit_source_decay(const Localization& L, double dtau_span, int samples) {
  const GasScaling& s = L.profile.scaling;
  std::vector<SourceDecayFit> out;
  for (int i = 1; i <= s.n_mu; ++i) {
    std::vector<double> t, ln;
    const double bound = (1 - s.mu) * (2 * i + 4 * s.mu - 3);
    double c0 = 0, cmax = 0;
    for (int k = 0; k < samples; ++k) {
      const double dt = dtau_span * k / (samples - 1);
      const double v = source_norm_sq(L, L.cutoff.tau0 + dt, i);
      t.push_back(dt);
      ln.push_back(std::log(v));
      const double C = v / (std::pow(L.cutoff.y0, 3 - 4 * s.mu - 2 * i) * std::exp(-bound * dt));
      if (k == 0) c0 = C;
      cmax = std::max(cmax, C);
    }
    const LinearFit f = linear_fit(t, ln);
    out.push_back({i, -f.slope, bound, c0, cmax});
  }
  return out;
}

void write_localization_csv(const Localization& L, const std::vector<double>& taus, const std::vector<double>& ys,
                            const std::string& path) {
  CsvWriter w(path, {"tau", "y", "chi", "ringz", "Sz"});
  for (double t : taus)
    for (double y : ys) w.row({t, y, chi(L, t, y), ring_z(L, t, y), source_Sz(L, t, y)});
}

}  // namespace vacblow
