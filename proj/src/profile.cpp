#include "vacblow/profile.hpp"

#include <cmath>
#include <limits>

#include "vacblow/csv.hpp"
#include "vacblow/errors.hpp"
#include "vacblow/numerics.hpp"

namespace vacblow {

ProfileParams make_profile_params(double gamma, double mu, double K) {
  if (!(K > 0.0)) throw DomainError("K must be positive");
  return {derive_indices(gamma, mu), K};
}

double zeta_coeff(const ProfileParams& p) { return std::pow(2.0 * p.K, 1.0 - p.scaling.beta); }

namespace {

constexpr double kNearSwitch = 1e-6;
constexpr double kFarSwitch = 1e6;

// Fixed-point forms of the implicit relation; contractive when the unknown is small.
bool near_branch(const ProfileParams& p, double y, UbarPoint& out) {
  const double mu = p.scaling.mu, U0 = p.scaling.ubar0();
  const double a = std::pow(y / p.K, mu / (1.0 - mu));
  double s = a * std::pow(U0, 1.0 / (1.0 - mu));
  for (int it = 0; it < 60; ++it) {
    const double sn = a * std::pow(U0 - s, 1.0 / (1.0 - mu));
    if (std::fabs(sn - s) <= 2e-15 * sn) { s = sn; out = {U0 - s, s}; return s < 0.1 * U0; }
    s = sn;
  }
  return false;
}

bool far_branch(const ProfileParams& p, double y, UbarPoint& out) {
  const double mu = p.scaling.mu, U0 = p.scaling.ubar0();
  const double a = std::pow(p.K, mu) * std::pow(y, -mu);
  double u = a * std::pow(U0, 1.0 - mu);
  for (int it = 0; it < 60; ++it) {
    const double un = a * std::pow(U0 - u, 1.0 - mu);
    if (std::fabs(un - u) <= 2e-15 * un) { u = un; out = {u, U0 - u}; return u < 0.1 * U0; }
    u = un;
  }
  return false;
}

// Monotone residual in t = log(unknown); `far` selects unknown = U, else deficit.
struct Residual {
  const ProfileParams& p;
  double ly;
  bool far;
  double operator()(double t, double& dfdt) const {
    const double mu = p.scaling.mu, U0 = p.scaling.ubar0();
    const double v = std::exp(t);
    const double u = far ? v : U0 - v;
    const double s = far ? U0 - v : v;
    const double f = std::log(p.K) + (1.0 / mu - 1.0) * std::log(s) - std::log(u) / mu - ly;
    dfdt = far ? -(1.0 / mu - 1.0) * v / s - 1.0 / mu : (1.0 / mu - 1.0) + v / (mu * u);
    return f;
  }
};

UbarPoint root_solve(const ProfileParams& p, double y) {
  const double mu = p.scaling.mu, U0 = p.scaling.ubar0();
  const double y_mid = 2.0 * p.K / U0;  // y at which Ubar = U0/2
  const bool far = y >= y_mid;
  Residual R{p, std::log(y), far};
  // f is decreasing in t when far, increasing otherwise; normalise to increasing.
  const double sgn = far ? -1.0 : 1.0;
  double d;
  double hi = std::log(0.5 * U0);
  double guess = far ? std::log(std::pow(p.K, mu) * std::pow(U0, 1 - mu) * std::pow(y, -mu))
                     : std::log(std::pow(y / p.K, mu / (1 - mu)) * std::pow(U0, 1 / (1 - mu)));
  double lo = std::min(guess, hi) - 1.0;
  int expand = 0;
  while (sgn * R(lo, d) > 0.0) {
    lo -= 2.0 * (1 + expand);
    if (++expand > 60) throw NumericalError("solve_ubar: cannot bracket root", lo, hi);
  }
  if (sgn * R(hi, d) < 0.0) {
    // root sits exactly at the switch point up to rounding
    hi = std::log(0.5 * U0) + 1e-12;
  }
  // bisection to a 1e-3 bracket
  int it = 0;
  while (hi - lo > 1e-3) {
    const double m = 0.5 * (lo + hi);
    (sgn * R(m, d) > 0.0 ? hi : lo) = m;
    if (++it > 200) throw NumericalError("solve_ubar: bisection stalled", lo, hi);
  }
  // safeguarded Newton
  double t = 0.5 * (lo + hi);
  for (it = 0; it < 100; ++it) {
    const double f = R(t, d);
    if (sgn * f > 0.0) hi = t; else lo = t;
    double tn = t - f / d;
    if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    if (std::fabs(tn - t) <= 1e-14 * std::max(1.0, std::fabs(t))) {
      t = tn;
      const double v = std::exp(t);
      return far ? UbarPoint{v, U0 - v} : UbarPoint{U0 - v, v};
    }
    t = tn;
  }
  throw NumericalError("solve_ubar: Newton did not converge", lo, hi);
}

}  // namespace

UbarPoint solve_ubar_point(const ProfileParams& p, double y) {
  if (!(y >= 0.0)) throw DomainError("solve_ubar: y must be nonnegative");
  const double U0 = p.scaling.ubar0();
  if (y == 0.0) return {U0, 0.0};
  if (std::isinf(y)) return {0.0, U0};
  UbarPoint r;
  if (y < kNearSwitch && near_branch(p, y, r)) return r;
  if (y > kFarSwitch && far_branch(p, y, r)) return r;
  return root_solve(p, y);
}

double solve_ubar(const ProfileParams& p, double y) { return solve_ubar_point(p, y).u; }

double zbar(const ProfileParams& p, double y) { return -2.0 * y * solve_ubar(p, y); }

double dzbar(const ProfileParams& p, double y) {
  const double u = solve_ubar(p, y), ga = p.scaling.gamma, mu = p.scaling.mu;
  return -4.0 * (mu - 1.0) * u / ((ga + 1.0) * u - 2.0);
}

Jet zbar_jet(const ProfileParams& p, double y, int order) {
  const GasScaling& s = p.scaling;
  const double C = zeta_coeff(p), twoU0 = 2.0 * s.ubar0();
  if (y < 0.0) throw DomainError("zbar_jet: y must be nonnegative");
  double zeta0 = 0.0;
  if (y > 0.0) {
    zeta0 = 2.0 * y * solve_ubar(p, y);
  } else if (!s.in_S) {
    // zbar = -2U0 y + C' y^beta + ...: only orders below beta exist at 0.
    if (order >= s.ceil_beta)
      throw SingularityError("zbar derivative of order >= ceil(beta) is unbounded at y=0");
    Jet j(0.0, order);
    if (order >= 1) j[1] = -twoU0;
    return j;
  }
  Jet Z = Jet::variable(zeta0, order);
  Jet Y = (Z + C * pow(Z, s.beta)) / twoU0;
  Y[0] = 0.0;
  Jet H = revert(Y);
  H[0] = zeta0;
  return -H;
}

double dzbar_higher(const ProfileParams& p, double y, int order) {
  if (order < 1 || order > p.scaling.n_mu + 1)
    throw IndexError("dzbar_higher: order must lie in [1, n_mu+1]");
  if (order == 1) return dzbar(p, y);
  return zbar_jet(p, y, order).deriv(order);
}

namespace {
void fill_node(const ProfileParams& p, Profile& pr, std::size_t j) {
  const double y = pr.grid[j];
  const UbarPoint u = solve_ubar_point(p, y);
  const double ga = p.scaling.gamma, mu = p.scaling.mu;
  pr.ubar[j] = u.u;
  pr.deficit[j] = u.deficit;
  pr.zbar[j] = -2.0 * y * u.u;
  pr.dzbar[j] = -4.0 * (mu - 1.0) * u.u / ((ga + 1.0) * u.u - 2.0);
}

Profile alloc_profile(const ProfileParams& p, int n, double ymin, double ymax) {
  Profile pr;
  pr.params = p;
  pr.grid.push_back(0.0);
  for (double y : geomspace(ymin, ymax, n)) pr.grid.push_back(y);
  const std::size_t m = pr.grid.size();
  pr.ubar.resize(m);
  pr.deficit.resize(m);
  pr.zbar.resize(m);
  pr.dzbar.resize(m);
  return pr;
}
}  // namespace

Profile tabulate_profile(const ProfileParams& p, int n, double ymin, double ymax) {
  Profile pr = alloc_profile(p, n, ymin, ymax);
  const long m = static_cast<long>(pr.grid.size());
#pragma omp parallel for schedule(static)
  for (long j = 0; j < m; ++j) fill_node(p, pr, static_cast<std::size_t>(j));
  return pr;
}

Profile tabulate_profile_serial(const ProfileParams& p, int n, double ymin, double ymax) {
  Profile pr = alloc_profile(p, n, ymin, ymax);
  for (std::size_t j = 0; j < pr.grid.size(); ++j) fill_node(p, pr, j);
  return pr;
}

AsymptoticFit fit_asymptotics(Profile& pr) {
  const double y_first = pr.grid.size() > 1 ? pr.grid[1] : 0.0;
  const double y_last = pr.grid.back();
  if (!(y_first > 0.0) || y_last / y_first < 1e4)
    throw FitError("fit_asymptotics: profile must span at least 4 decades");
  std::vector<double> xn, cn, xf, zf;
  for (std::size_t j = 1; j < pr.grid.size(); ++j) {
    const double y = pr.grid[j];
    // zbar + 2 U0 y = 2 y (U0 - Ubar), evaluated through the deficit
    if (y >= 1e-6 * (1 - 1e-12) && y <= 1e-3) { xn.push_back(y); cn.push_back(2.0 * y * pr.deficit[j]); }
    if (y >= 1e3 * (1 - 1e-12) && y <= 1e5 * (1 + 1e-12)) { xf.push_back(y); zf.push_back(-pr.zbar[j]); }
  }
  if (xn.size() < 5 || xf.size() < 5) throw FitError("fit_asymptotics: fit windows not covered by grid");
  AsymptoticFit f;
  const LinearFit near = loglog_fit(xn, cn);
  f.beta_fit = near.slope;
  f.c1 = std::exp(near.intercept);
  const PowerFit far = power_fit_with_correction(xf, zf);
  f.far_exp_fit = far.exponent;
  f.far_exp_naive = far.naive_exponent;
  f.c2 = far.coeff;
  pr.near_coeff_c1 = f.c1;
  pr.far_coeff_c2 = f.c2;
  return f;
}

double profile_residual(const Profile& pr) {
  const double A = pr.params.scaling.A(), mu = pr.params.scaling.mu;
  double r = 0.0;
  for (std::size_t j = 0; j < pr.grid.size(); ++j) {
    const double y = pr.grid[j];
    const double res = (y + A * pr.zbar[j]) * pr.dzbar[j] + (mu - 1.0) * pr.zbar[j];
    r = std::max(r, std::fabs(res) / (1.0 + y));
  }
  return r;
}

void write_profile_csv(const Profile& pr, const std::string& path) {
  CsvWriter w(path, {"y", "ubar", "zbar", "dzbar"});
  for (std::size_t j = 0; j < pr.grid.size(); ++j)
    w.row({pr.grid[j], pr.ubar[j], pr.zbar[j], pr.dzbar[j]});
}

}  // namespace vacblow
