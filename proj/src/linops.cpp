#include "vacblow/linops.hpp"

#include <cmath>
#include <functional>
#include <json.hpp>

#include "vacblow/errors.hpp"
#include "vacblow/numerics.hpp"

namespace vacblow {

namespace {

void check_field(const GridField& f) {
  if (!f.grid || f.grid->size() != f.v.size()) throw DomainError("field/grid size mismatch");
}

}  // namespace

GridField apply_Lz(const GridField& f, const Localization& L, double tau) {
  check_field(f);
  const double A = L.profile.scaling.A(), mu = L.profile.scaling.mu;
  const auto df = fd_derivative(*f.grid, f.v, 1, 5);
  GridField out{f.grid, std::vector<double>(f.size())};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double y = f.y(i);
    out.v[i] = (y + A * ring_z(L, tau, y)) * df[i] + (A * dring_z(L, tau, y) + mu - 1) * f.v[i];
  }
  return out;
}

GridField apply_Lw(const GridField& f, const Localization& L, double tau) {
  check_field(f);
  const double B = L.profile.scaling.B(), mu = L.profile.scaling.mu;
  const auto df = fd_derivative(*f.grid, f.v, 1, 5);
  GridField out{f.grid, std::vector<double>(f.size())};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double y = f.y(i);
    out.v[i] = (y + B * ring_z(L, tau, y)) * df[i] + (mu - 1) * f.v[i];
  }
  return out;
}

GridField apply_L_profile(const GridField& f, const ProfileParams& p) {
  check_field(f);
  const double A = p.scaling.A(), mu = p.scaling.mu;
  const auto df = fd_derivative(*f.grid, f.v, 1, 5);
  GridField out{f.grid, std::vector<double>(f.size())};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double y = f.y(i);
    out.v[i] = (y + A * zbar(p, y)) * df[i] + (A * dzbar(p, y) + mu - 1) * f.v[i];
  }
  return out;
}

std::vector<double> unstable_spectrum(const GasScaling& s) {
  std::vector<double> a;
  const double e = 1 - s.mu;
  if (s.in_S) {
    for (int j = 0; j <= s.floor_beta; ++j) a.push_back(j * e - 1);
    a.back() = 0.0;  // j = beta
  } else {
    for (int j = 1; j <= s.floor_beta; ++j) a.push_back(j * e - 1);
    a.push_back(0.0);
  }
  return a;
}

namespace {

void check_eigen_args(const ProfileParams& p, double a) {
  if (std::fabs(p.K - 0.5) > 1e-15) throw SpectralDomainError("eigenfunctions use the K = 1/2 normalization");
  for (double b : unstable_spectrum(p.scaling))
    if (std::fabs(a - b) < 1e-12) return;
  throw SpectralDomainError("a is not in the unstable spectrum");
}

}  // namespace

double eigenfunction_phi(const ProfileParams& p, double a, double y) {
  check_eigen_args(p, a);
  const double mu = p.scaling.mu, zeta = -zbar(p, y);
  return std::pow(zeta, (1 + a) / (1 - mu)) / (1 - mu + std::pow(zeta, mu / (1 - mu)));
}

double eigenfunction_dphi(const ProfileParams& p, double a, double y) {
  check_eigen_args(p, a);
  const double mu = p.scaling.mu, zeta = -zbar(p, y);
  const double e = (1 + a) / (1 - mu), q = mu / (1 - mu);
  const double D = 1 - mu + std::pow(zeta, q);
  double dphi_dzeta = -std::pow(zeta, e) * q * std::pow(zeta, q - 1) / (D * D);
  if (e != 0.0) dphi_dzeta += e * std::pow(zeta, e - 1) / D;
  return dphi_dzeta * (-dzbar(p, y));
}

double eigen_residual(const ProfileParams& p, double a, const std::vector<double>& ys) {
  const double A = p.scaling.A(), mu = p.scaling.mu;
  double num = 0, den = 0;
  for (double y : ys) {
    const double f = eigenfunction_phi(p, a, y), df = eigenfunction_dphi(p, a, y);
    const double Lf = (y + A * zbar(p, y)) * df + (A * dzbar(p, y) + mu - 1) * f;
    num = std::max(num, std::fabs(Lf - a * f));
    den = std::max(den, std::fabs(f));
  }
  return num / den;
}

double eigen_residual_fd(const ProfileParams& p, double a, const GridPtr& g) {
  const GridField f = sample(g, [&](double y) { return eigenfunction_phi(p, a, y); });
  const GridField Lf = apply_L_profile(f, p);
  double num = 0;
  for (std::size_t i = 0; i < f.size(); ++i) num = std::max(num, std::fabs(Lf.v[i] - a * f.v[i]));
  return num / sup_norm(f.v);
}

double symmetry_mode(const ProfileParams& p, Symmetry m, double y) {
  const double d = p.scaling.delta;
  const Jet j = zbar_jet(p, y, 1);
  const double z = j[0], dz = j[1];
  switch (m) {
    case Symmetry::Galilean: return d * dz + 4.0 / (p.scaling.gamma + 1);
    case Symmetry::Translation: return dz;
    case Symmetry::TimeShift: return (1 - d) * z + d * y * dz;
    case Symmetry::Scaling: return z - y * dz;
  }
  return 0;
}

double symmetry_mode_deriv(const ProfileParams& p, Symmetry m, double y) {
  const double d = p.scaling.delta;
  const Jet j = zbar_jet(p, y, 2);
  const double dz = j.deriv(1), d2z = j.deriv(2);
  switch (m) {
    case Symmetry::Galilean: return d * d2z;
    case Symmetry::Translation: return d2z;
    case Symmetry::TimeShift: return dz + d * y * d2z;
    case Symmetry::Scaling: return -y * d2z;
  }
  return 0;
}

double symmetry_eigenvalue(const GasScaling& s, Symmetry m) {
  switch (m) {
    case Symmetry::Galilean: return -(1 - s.mu);
    case Symmetry::Translation: return -1.0;
    case Symmetry::TimeShift: return -s.mu;
    case Symmetry::Scaling: return 0.0;
  }
  return 0;
}

double symmetry_residual(const ProfileParams& p, Symmetry m, const std::vector<double>& ys) {
  const double A = p.scaling.A(), mu = p.scaling.mu, lam = symmetry_eigenvalue(p.scaling, m);
  double num = 0, den = 0;
  for (double y : ys) {
    const double g = symmetry_mode(p, m, y), dg = symmetry_mode_deriv(p, m, y);
    const double Lg = (y + A * zbar(p, y)) * dg + (A * dzbar(p, y) + mu - 1) * g;
    num = std::max(num, std::fabs(Lg - lam * g));
    den = std::max(den, std::fabs(g));
  }
  return num / den;
}

std::string to_string(Symmetry m) {
  switch (m) {
    case Symmetry::Galilean: return "Lambda_v";
    case Symmetry::Translation: return "Lambda_x0";
    case Symmetry::TimeShift: return "Lambda_T";
    case Symmetry::Scaling: return "Lambda_alpha";
  }
  return "?";
}

SymmetryModes symmetry_modes(const ProfileParams& p, const GridPtr& g) {
  auto f = [&](Symmetry m) { return sample(g, [&](double y) { return symmetry_mode(p, m, y); }); };
  return {f(Symmetry::Galilean), f(Symmetry::Translation), f(Symmetry::TimeShift), f(Symmetry::Scaling)};
}

WeightedGap weighted_gap(const GasScaling& s, int m) {
  if (m < 1) throw DomainError("weighted_gap: m must be >= 1");
  WeightedGap g;
  g.m = m;
  const double excess = m - (s.beta + 0.5);
  if (std::fabs(excess) < 1e-12) {
    g.a_min = 0.0;
    g.zero_gap = true;
  } else {
    g.a_min = (1 - s.mu) * excess;
  }
  return g;
}

namespace {

struct FieldNorms {
  double weighted, top, d1, l2;
};

FieldNorms field_norms(const GridField& Z, int n, std::string& warning, const char* name) {
  const auto& y = *Z.grid;
  const std::size_t N = y.size();
  const int width = n + 2;
  const auto d1 = fd_derivative(y, Z.v, 1, 5);
  const auto dn = fd_derivative(y, Z.v, n, width);
  std::vector<double> wz(N), sq(N), sd1(N), sdn(N);
  for (std::size_t i = 0; i < N; ++i) {
    sq[i] = Z.v[i] * Z.v[i];
    sd1[i] = d1[i] * d1[i];
    sdn[i] = dn[i] * dn[i];
    if (i > 0) wz[i] = std::pow(Z.v[i] / std::pow(y[i], n), 2);
  }
  wz[0] = wz[1];  // Z ~ c y^n on the first cell
  const double scale = sup_norm(Z.v);
  if (scale > 0) {
    std::vector<double> xs(y.begin(), y.begin() + std::min<std::size_t>(N, width));
    const auto w = fornberg_weights(0.0, xs, n - 1);
    for (int j = 0; j < n; ++j) {
      double c = 0;
      for (std::size_t k = 0; k < xs.size(); ++k) c += w[j][k] * Z.v[k];
      if (std::fabs(c) > 1e-6 * scale) {
        warning += std::string(name) + ": derivative of order " + std::to_string(j) + " at 0 is not zero; ";
        break;
      }
    }
  }
  return {std::sqrt(trapezoid(y, wz)), std::sqrt(trapezoid(y, sdn)), std::sqrt(trapezoid(y, sd1)),
          std::sqrt(trapezoid(y, sq))};
}

}  // namespace

EnergyNorms energy_norms(const GridField& Z, const GridField& W, const GasScaling& s) {
  check_field(Z);
  check_field(W);
  EnergyNorms e;
  const auto z = field_norms(Z, s.n_mu, e.warning, "Z");
  const auto w = field_norms(W, s.n_mu, e.warning, "W");
  e.Z_weighted = z.weighted;
  e.Z_top = z.top;
  e.Z_d1 = z.d1;
  e.Z_l2 = z.l2;
  e.W_weighted = w.weighted;
  e.W_top = w.top;
  e.W_d1 = w.d1;
  e.W_l2 = w.l2;
  return e;
}

namespace {

using JetFn = std::function<Jet(const Jet&)>;

std::vector<std::pair<std::string, JetFn>> battery(int n) {
  const double dn = n;
  return {
      {"y^n e^-y", [=](const Jet& y) { return ipow(y, n) * exp(-y); }},
      {"y^n e^-y^2", [=](const Jet& y) { return ipow(y, n) * exp(-(y * y)); }},
      {"y^n (1+y)^-(n+2)", [=](const Jet& y) { return ipow(y, n) * pow(1.0 + y, -(dn + 2)); }},
      {"y^n (1+y) e^-2y", [=](const Jet& y) { return ipow(y, n) * (1.0 + y) * exp(-2.0 * y); }},
      {"y^(n+1) e^-y", [=](const Jet& y) { return ipow(y, n + 1) * exp(-y); }},
      {"y^n e^-y/(1+y)", [=](const Jet& y) { return ipow(y, n) * exp(-y) / (1.0 + y); }},
      {"y^(n+2) e^-y", [=](const Jet& y) { return ipow(y, n + 2) * exp(-y); }},
      {"y^n (1+y^2)^-(n+1)", [=](const Jet& y) { return ipow(y, n) * pow(1.0 + y * y, -(dn + 1)); }},
      {"(1-e^-y)^n e^-y", [=](const Jet& y) { return ipow(1.0 - exp(-y), n) * exp(-y); }},
      {"y^n e^-3y + y^(n+1) e^-y/2", [=](const Jet& y) { return ipow(y, n) * exp(-3.0 * y) + 0.5 * ipow(y, n + 1) * exp(-y); }},
  };
}

}  // namespace

InequalityReport inequality_checks(int n, int nodes) {
  if (n < 2) throw DomainError("inequality_checks: n must be >= 2");
  InequalityReport rep;
  rep.n = n;
  rep.nodes = nodes;
  const double ymax = 80.0;
  const auto g = graded_grid(nodes, ymax, 2.0);
  const auto& y = *g;
  std::vector<double> ytail{1.0};
  for (double v : y)
    if (v > 1.0) ytail.push_back(v);

  for (const auto& [name, f] : battery(n)) {
    // D[i][k] = d^i f at node k
    auto derivs = [&](const std::vector<double>& ys) {
      std::vector<std::vector<double>> D(n + 1, std::vector<double>(ys.size()));
      for (std::size_t k = 0; k < ys.size(); ++k) {
        const Jet j = f(Jet::variable(ys[k], n));
        for (int i = 0; i <= n; ++i) D[i][k] = j.deriv(i);
      }
      return D;
    };
    const auto D = derivs(y);
    const auto Dt = derivs(ytail);
    auto l2 = [&](const std::vector<double>& x, const std::vector<double>& v, int w) {
      std::vector<double> s(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] == 0.0 && w > 0)
          s[k] = std::pow(D[n][0] / std::tgamma(w + 1.0), 2);  // d^i f ~ f^(n)(0) y^w / w!
        else
          s[k] = std::pow(v[k] / std::pow(x[k], w), 2);
      }
      return std::sqrt(trapezoid(x, s));
    };
    InequalityRow row;
    row.name = name;
    const double top = l2(y, D[n], 0);
    const double weighted0 = l2(y, D[0], n);
    const double d1 = l2(y, D[1], 0);
    for (int i = 0; i < n; ++i) row.hardy = std::max(row.hardy, l2(y, D[i], n - i) / top);
    for (int i = 1; i < n; ++i) {
      const double th = static_cast<double>(i) / n;
      const double lhs = l2(ytail, Dt[i], n - i);
      row.gn = std::max(row.gn, lhs / (std::pow(weighted0, 1 - th) * std::pow(top, th)));
    }
    for (int j = 1; j < n; ++j) {
      const double th = (2.0 * j - 1) / (2.0 * (n - 1));
      row.linf = std::max(row.linf, sup_norm(D[j]) / (std::pow(d1, 1 - th) * std::pow(top, th)));
    }
    rep.rows.push_back(row);
  }
  return rep;
}

SpectralReport spectral_report(double gamma, double mu) {
  SpectralReport r;
  r.gamma = gamma;
  r.mu = mu;
  const ProfileParams p = make_profile_params(gamma, mu, 0.5);
  const auto ys = geomspace(1e-4, 1e4, 801);
  r.spectrum = unstable_spectrum(p.scaling);
  for (double a : r.spectrum) r.residuals.push_back(eigen_residual(p, a, ys));
  for (Symmetry m : {Symmetry::Galilean, Symmetry::Translation, Symmetry::TimeShift, Symmetry::Scaling})
    r.symmetry_residuals.emplace_back(to_string(m), symmetry_residual(p, m, ys));
  r.gap = weighted_gap(p.scaling, p.scaling.n_mu);
  return r;
}

std::string spectral_report_json(const SpectralReport& r) {
  nlohmann::json j;
  j["gamma"] = r.gamma;
  j["mu"] = r.mu;
  j["spectrum"] = r.spectrum;
  j["residuals"] = r.residuals;
  nlohmann::json sym = nlohmann::json::object();
  for (const auto& [k, v] : r.symmetry_residuals) sym[k] = v;
  j["symmetry_residuals"] = sym;
  j["weighted_gap"] = {{"m", r.gap.m}, {"a_min", r.gap.a_min}, {"zero_gap", r.gap.zero_gap}};
  return j.dump(2);
}

}  // namespace vacblow
