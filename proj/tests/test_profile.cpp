#include <chrono>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "vacblow/errors.hpp"
#include "vacblow/numerics.hpp"
#include "vacblow/profile.hpp"

using namespace vacblow;

namespace {

// zeta + C zeta^beta = rhs by plain bisection.
double zeta_oracle(double C, double beta, double rhs) {
  double lo = 0, hi = rhs + 1;
  for (int it = 0; it < 400; ++it) {
    const double m = 0.5 * (lo + hi);
    (m + C * std::pow(m, beta) > rhs ? hi : lo) = m;
  }
  return 0.5 * (lo + hi);
}

// Taylor coefficients of zbar at y0 from the steady ODE (y + A z) z' = (1-mu) z.
std::vector<double> ode_taylor(double y0, double z0, double A, double mu, int n) {
  std::vector<double> c(n + 1, 0.0), D(n + 1, 0.0);
  c[0] = z0;
  for (int k = 0; k < n; ++k) {
    // D = y0 + h + A z(h)
    D[0] = y0 + A * c[0];
    if (k >= 1) D[1] = 1 + A * c[1];
    for (int j = 2; j <= k; ++j) D[j] = A * c[j];
    double s = (1 - mu) * c[k];
    for (int j = 1; j <= k; ++j) s -= D[j] * (k - j + 1) * c[k - j + 1];
    c[k + 1] = s / (D[0] * (k + 1));
    if (k + 1 == 1) D[1] = 1 + A * c[1];
  }
  return c;
}

}  // namespace

TEST_CASE("solve_ubar closed-form points") {
  auto p = make_profile_params(2.0, 0.5, 0.5);
  CHECK(solve_ubar(p, 0.0) == 1.0 / 3.0);
  CHECK(solve_ubar(p, 3.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(zbar(p, 3.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(dzbar(p, 0.0) == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
  CHECK(1 + 0.75 * dzbar(p, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(solve_ubar(p, 1e10) * std::sqrt(1e10) == doctest::Approx(std::sqrt(0.5 / 3.0)).epsilon(1e-4));
  CHECK(std::sqrt(0.5 / 3.0) == doctest::Approx(0.408248).epsilon(1e-6));
  CHECK_THROWS_AS(solve_ubar(p, -1.0), DomainError);
}

TEST_CASE("solve_ubar agrees with the polynomial zeta relation across scales") {
  for (auto [ga, mu, K] : {std::tuple{2.0, 0.5, 0.5}, {2.0, 2.0 / 3.0, 0.5}, {1.4, 0.6, 1.0}, {1.2, 0.93, 3.0}}) {
    auto p = make_profile_params(ga, mu, K);
    const double C = std::pow(2 * K, 1 - p.scaling.beta), twoU0 = 2 * p.scaling.ubar0();
    for (double y : {1e-9, 1e-7, 1e-5, 1e-2, 0.3, 1.0, 7.0, 1e3, 1e5, 1e7, 1e9}) {
      const double zo = zeta_oracle(C, p.scaling.beta, twoU0 * y);
      CHECK(-zbar(p, y) == doctest::Approx(zo).epsilon(1e-12));
      // deficit route matches the corrector directly
      const auto up = solve_ubar_point(p, y);
      const double corr = 2 * y * up.deficit;  // = C zeta^beta
      CHECK(corr == doctest::Approx(C * std::pow(zo, p.scaling.beta)).epsilon(1e-9));
    }
  }
}

TEST_CASE("mu = 1/2 quadratic closed form") {
  auto p = make_profile_params(2.0, 0.5, 0.5);
  for (double y : {1e-6, 0.01, 0.5, 2.0, 50.0, 1e4}) {
    const double rhs = 2 * p.scaling.ubar0() * y;
    const double zeta = (-1 + std::sqrt(1 + 4 * rhs)) / 2;
    CHECK(zbar(p, y) == doctest::Approx(-zeta).epsilon(1e-13));
  }
}

TEST_CASE("tabulated profile invariants and residual") {
  for (auto [ga, mu, K] : {std::tuple{2.0, 0.5, 0.5}, {2.0, 2.0 / 3.0, 0.5}, {1.4, 0.6, 1.0}}) {
    auto p = make_profile_params(ga, mu, K);
    auto t0 = std::chrono::steady_clock::now();
    Profile pr = tabulate_profile(p);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 1.0);
    CHECK(pr.grid.size() == 2049);
    CHECK(profile_residual(pr) < 1e-8);
    CHECK(pr.ubar[0] == doctest::Approx(2 * mu / (ga + 1)).epsilon(1e-15));
    CHECK(pr.dzbar[0] == doctest::Approx(-4 * mu / (ga + 1)).epsilon(1e-15));
    const double A = (ga + 1) / 4;
    for (std::size_t j = 1; j < pr.grid.size(); ++j) {
      CHECK(pr.ubar[j] < pr.ubar[j - 1]);
      CHECK(pr.zbar[j] < pr.zbar[j - 1]);
      CHECK(pr.dzbar[j] > pr.dzbar[j - 1]);
      const double b = 1 + A * pr.dzbar[j];
      CHECK(b >= 1 - mu - 1e-10);
      CHECK(b < 1.0);
    }
  }
}

TEST_CASE("serial and parallel tabulation agree bitwise") {
  auto p = make_profile_params(1.4, 0.6, 1.0);
  Profile a = tabulate_profile(p, 512), b = tabulate_profile_serial(p, 512);
  CHECK(a.zbar == b.zbar);
  CHECK(a.dzbar == b.dzbar);
}

TEST_CASE("dzbar agrees with centered differences to second order") {
  auto p = make_profile_params(2.0, 2.0 / 3.0, 0.5);
  for (double y : {0.1, 1.0, 3.0}) {
    double e1 = 0, e2 = 0;
    for (double h : {1e-2, 5e-3}) {
      const double fd = (zbar(p, y + h) - zbar(p, y - h)) / (2 * h);
      (h == 1e-2 ? e1 : e2) = std::fabs(fd - dzbar(p, y));
    }
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("jet derivatives match the steady-ODE Taylor recursion") {
  for (auto [ga, mu, K] : {std::tuple{2.0, 0.5, 0.5}, {2.0, 2.0 / 3.0, 0.5}, {1.4, 0.6, 1.0}}) {
    auto p = make_profile_params(ga, mu, K);
    for (double y : {0.05, 0.8, 12.0, 400.0}) {
      const auto c = ode_taylor(y, zbar(p, y), (ga + 1) / 4, mu, 5);
      Jet j = zbar_jet(p, y, 5);
      for (int k = 1; k <= 5; ++k) CHECK(j[k] == doctest::Approx(c[k]).epsilon(1e-9));
      CHECK(dzbar_higher(p, y, 1) == doctest::Approx(j.deriv(1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("derivatives at the origin") {
  auto p = make_profile_params(2.0, 0.5, 0.5);
  // zeta + zeta^2 = (2/3) y  =>  zbar''(0) = 2 (2/3)^2
  CHECK(dzbar_higher(p, 0.0, 2) == doctest::Approx(2 * 4.0 / 9.0).epsilon(1e-13));
  auto q = make_profile_params(2.0, 0.6, 0.5);
  CHECK(dzbar_higher(q, 0.0, 2) == 0.0);
  CHECK_THROWS_AS(dzbar_higher(q, 0.0, 3), SingularityError);
  auto r = make_profile_params(2.0, 2.0 / 3.0, 0.5);
  CHECK(dzbar_higher(r, 0.0, 2) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(dzbar_higher(r, 1.0, r.scaling.n_mu + 2), IndexError);
}

TEST_CASE("near-origin third derivative exponent for mu = 0.6") {
  auto p = make_profile_params(2.0, 0.6, 0.5);
  std::vector<double> ys = geomspace(1e-6, 1e-4, 20), d3;
  for (double y : ys) d3.push_back(dzbar_higher(p, y, 3));
  auto f = loglog_fit(ys, d3);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(0.02));
}

TEST_CASE("far-field second derivative template") {
  auto p = make_profile_params(2.0, 2.0 / 3.0, 0.5);
  double lo = 1e300, hi = 0;
  for (double y : geomspace(1e2, 1e8, 25)) {
    const double v = std::fabs(dzbar_higher(p, y, 2)) * std::pow(y, 2 - (1 - 2.0 / 3.0));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo < 1.5);
}

TEST_CASE("K scaling covariance") {
  auto a = make_profile_params(2.0, 2.0 / 3.0, 0.5), b = make_profile_params(2.0, 2.0 / 3.0, 2.0);
  const double r = b.K / a.K;
  for (double y : {0.01, 1.0, 30.0, 1e4}) CHECK(zbar(b, y) == doctest::Approx(r * zbar(a, y / r)).epsilon(1e-12));
}

TEST_CASE("fit_asymptotics") {
  for (auto [ga, mu, K] : {std::tuple{2.0, 0.5, 0.5}, {2.0, 2.0 / 3.0, 0.5}, {1.4, 0.6, 1.0}}) {
    auto p = make_profile_params(ga, mu, K);
    Profile pr = tabulate_profile(p);
    auto f = fit_asymptotics(pr);
    CHECK(f.beta_fit == doctest::Approx(p.scaling.beta).epsilon(1e-2 / p.scaling.beta));
    CHECK(std::fabs(f.far_exp_fit - (1 - mu)) < 1e-3);
    CHECK(f.c1 > 0);
    CHECK(f.c2 > 0);
    // c2 from the zeta relation: (2U0)^{1-mu} (2K)^mu
    CHECK(f.c2 == doctest::Approx(std::pow(2 * p.scaling.ubar0(), 1 - mu) * std::pow(2 * K, mu)).epsilon(1e-3));
  }
  Profile small = tabulate_profile(make_profile_params(2.0, 0.5), 64, 1.0, 100.0);
  CHECK_THROWS_AS(fit_asymptotics(small), FitError);
}
