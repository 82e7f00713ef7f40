#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "vacblow/errors.hpp"
#include "vacblow/localization.hpp"
#include "vacblow/numerics.hpp"

using namespace vacblow;

namespace {

Localization make_loc(double ga, double mu, double tau0 = 3.0, double K = 0.5) {
  return {make_profile_params(ga, mu, K), make_cutoff_config(tau0)};
}

}  // namespace

TEST_CASE("cutoff config defaults and validation") {
  auto c = make_cutoff_config();
  CHECK(c.tau0 == 3.0);
  CHECK(c.y0 == doctest::Approx(std::exp(3.0)).epsilon(1e-15));
  CHECK(make_cutoff_config(2.0, 5.0).y0 == 5.0);
  CHECK_THROWS_AS(make_cutoff_config(0.0), DomainError);
  CHECK_THROWS_AS(make_cutoff_config(1.0, 0.5), DomainError);
}

TEST_CASE("chi0 plateau, support and slope envelope") {
  auto c = make_cutoff_config(2.0);
  CHECK(chi0(c, 0.0) == 1.0);
  CHECK(chi0(c, c.y0) == 1.0);
  CHECK(chi0(c, 2 * c.y0) == 0.0);
  CHECK(chi0(c, 3 * c.y0) == 0.0);
  CHECK(chi0(c, 1.5 * c.y0) == doctest::Approx(0.5).epsilon(1e-15));
  double maxslope = 0;
  for (double p : linspace(c.y0, 2 * c.y0, 20001)) {
    const double d = dchi0(c, p);
    CHECK(d <= 0.0);
    maxslope = std::max(maxslope, -d * c.y0);
  }
  // 2 lambda = 1.8 at the midpoint; 10% under the envelope
  CHECK(maxslope == doctest::Approx(1.8).epsilon(1e-6));
  CHECK(-dchi0(c, 1.5 * c.y0) * c.y0 == doctest::Approx(1.8).epsilon(1e-14));
  // jet agrees with the scalar derivative
  const Jet j = chi0_jet(c, Jet::variable(1.3 * c.y0, 3));
  CHECK(j.deriv(1) == doctest::Approx(dchi0(c, 1.3 * c.y0)).epsilon(1e-12));
  const double h = 1e-4 * c.y0, p = 1.3 * c.y0;
  const double fd2 = (chi0(c, p + h) - 2 * chi0(c, p) + chi0(c, p - h)) / (h * h);
  CHECK(j.deriv(2) == doctest::Approx(fd2).epsilon(1e-5));
}

TEST_CASE("flow map: origin, sandwich and ODE cross-check") {
  for (auto [ga, mu] : {std::pair{2.0, 0.5}, {2.0, 2.0 / 3.0}, {1.4, 0.6}}) {
    auto L = make_loc(ga, mu);
    const double t0 = L.cutoff.tau0;
    CHECK(flow_map(L, 0.0, t0 + 3) == 0.0);
    CHECK(flow_map(L, 2.5, t0) == 2.5);
    for (double p : {0.1, 1.0, 10.0, 1e3}) {
      for (double dt : {0.5, 2.0, 5.0}) {
        const double r = flow_map(L, p, t0 + dt) / p;
        CHECK(r >= std::exp((1 - mu) * dt) * (1 - 1e-6));
        CHECK(r <= std::exp(dt) * (1 + 1e-6));
      }
      const double Y = flow_map(L, p, t0 + 2.0);
      CHECK(flow_map_ode(L, p, t0 + 2.0, 1e-2) == doctest::Approx(Y).epsilon(1e-9));
      // monotone in tau
      CHECK(flow_map(L, p, t0 + 1.0) < Y);
    }
    for (double p : {1e4, 1e5})
      for (double dt : {0.5, 1.0, 2.0}) CHECK(std::fabs(flow_map(L, p, t0 + dt) / (p * std::exp(dt)) - 1) < 0.01);
    CHECK_THROWS_AS(flow_map(L, -1.0, t0 + 1), DomainError);
    CHECK_THROWS_AS(flow_map(L, 1.0, t0 - 1), DomainError);
  }
}

TEST_CASE("inverse flow round trip and bracket rejection") {
  auto L = make_loc(2.0, 2.0 / 3.0);
  const double t0 = L.cutoff.tau0;
  CHECK(inverse_flow(L, 0.0, t0 + 2) == 0.0);
  for (double p : {1e-5, 0.1, 1.0, 30.0, 1e4})
    for (double dt : {0.1, 1.0, 4.0}) {
      const double y = flow_map(L, p, t0 + dt);
      CHECK(inverse_flow(L, y, t0 + dt) == doctest::Approx(p).epsilon(1e-10));
      CHECK(flow_map(L, inverse_flow(L, y, t0 + dt), t0 + dt) == doctest::Approx(y).epsilon(1e-10));
    }
  const double y = 40.0, dt = 1.5;
  const double p = inverse_flow(L, y, t0 + dt);
  CHECK(inverse_flow_in(L, y, t0 + dt, y * std::exp(-dt), y * std::exp(-(1 - 2.0 / 3.0) * dt)) ==
        doctest::Approx(p).epsilon(1e-12));
  // a window above the admissible one does not contain the label
  CHECK_THROWS_AS(inverse_flow_in(L, y, t0 + dt, 1.01 * y * std::exp(-(1 - 2.0 / 3.0) * dt), y), NumericalError);
  CHECK_THROWS_AS(inverse_flow_in(L, y, t0 + dt, 0.1 * y * std::exp(-dt), 0.99 * y * std::exp(-dt)), NumericalError);
}

TEST_CASE("chi values, monotonicity and FD slope bound") {
  for (double mu : {0.5, 2.0 / 3.0, 0.6}) {
    auto L = make_loc(2.0, mu, 2.0);
    const double t0 = L.cutoff.tau0, y0 = L.cutoff.y0;
    for (double y : {0.0, 1.0, 0.5 * y0, y0}) CHECK(chi(L, t0, y) == 1.0);
    for (double dt : {0.0, 1.0, 3.0}) {
      CHECK(chi(L, t0 + dt, 0.999 * y0 * std::exp((1 - mu) * dt)) == 1.0);
      CHECK(chi(L, t0 + dt, 2 * y0 * std::exp(dt)) == 0.0);
      CHECK(chi(L, t0 + dt, 3 * y0 * std::exp(dt)) == 0.0);
      const auto [a, b] = transition_zone(L, t0 + dt);
      const double h = 1e-6 * b;
      double prev = 1.0;
      for (double y : linspace(0.9 * a, 1.05 * b, 4001)) {
        const double c = chi(L, t0 + dt, y);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        CHECK(c <= prev);
        prev = c;
        const double fd = (chi(L, t0 + dt, y + h) - chi(L, t0 + dt, std::max(y - h, 0.0))) / (y + h - std::max(y - h, 0.0));
        CHECK(fd >= -2 / y0 - 1e-6);
        CHECK(fd <= 1e-6);
        if (y > a && y < b) CHECK(dchi(L, t0 + dt, y) == doctest::Approx(fd).epsilon(1e-4));
      }
    }
  }
}

TEST_CASE("chi solves the transport equation") {
  auto L = make_loc(2.0, 2.0 / 3.0, 2.0);
  const double A = L.profile.scaling.A();
  for (double dt : {0.5, 2.0}) {
    const double tau = L.cutoff.tau0 + dt;
    const auto [a, b] = transition_zone(L, tau);
    for (double y : linspace(a + 0.05 * (b - a), b - 0.05 * (b - a), 21)) {
      const double vel = y + A * zbar(L.profile, y);
      auto fd_res = [&](double h) {
        const double ct = (chi(L, tau + h, y) - chi(L, tau - h, y)) / (2 * h);
        const double hy = h * y;
        const double cy = (chi(L, tau, y + hy) - chi(L, tau, y - hy)) / (2 * hy);
        return std::fabs(ct + vel * cy);
      };
      auto jet_res = [&](double h) {
        const double ct = (chi(L, tau + h, y) - chi(L, tau - h, y)) / (2 * h);
        return std::fabs(ct + vel * dchi(L, tau, y));
      };
      const double f1 = fd_res(1e-3), f2 = fd_res(5e-4);
      CHECK(f1 < 1e-4);
      if (f1 > 1e-10) CHECK(f1 / f2 == doctest::Approx(4.0).epsilon(0.1));
      const double j1 = jet_res(1e-3), j2 = jet_res(1e-4);
      CHECK(j2 < 1e-6);
      if (j1 > 1e-10) CHECK(j1 / j2 == doctest::Approx(100.0).epsilon(0.1));
    }
  }
}

TEST_CASE("ring_z equals zbar near the origin and has bounded support") {
  auto L = make_loc(2.0, 2.0 / 3.0, 2.0);
  const double t0 = L.cutoff.tau0;
  for (double dt : {0.0, 1.0, 2.0})
    for (double y : {0.0, 1e-3, 0.3, 1.0}) {
      CHECK(ring_z(L, t0 + dt, y) == zbar(L.profile, y));
      const Jet r = ring_z_jet(L, t0 + dt, y, 3), z = zbar_jet(L.profile, y, 3);
      for (int k = 0; k <= 3; ++k) CHECK(r[k] == z[k]);
    }
  for (double dt : {0.0, 1.5}) {
    const double end = 2 * L.cutoff.y0 * std::exp(dt);
    CHECK(ring_z(L, t0 + dt, end) == 0.0);
    CHECK(ring_z(L, t0 + dt, 1.0001 * end) == 0.0);
    CHECK(source_Sz(L, t0 + dt, end) == 0.0);
  }
  for (double y : linspace(0, L.cutoff.y0, 50)) CHECK(source_Sz(L, t0, y) == 0.0);
}

TEST_CASE("ring_z satisfies its PDE with source") {
  auto L = make_loc(1.4, 0.6, 2.0);
  const double A = L.profile.scaling.A(), mu = L.profile.scaling.mu;
  const double tau = L.cutoff.tau0 + 1.0;
  const auto [a, b] = transition_zone(L, tau);
  for (double y : linspace(0.5 * a, 1.1 * b, 41)) {
    const double r = ring_z(L, tau, y), ry = dring_z(L, tau, y);
    auto res = [&](double h) {
      const double rt = (ring_z(L, tau + h, y) - ring_z(L, tau - h, y)) / (2 * h);
      return std::fabs(rt + (y + A * r) * ry + (mu - 1) * r + source_Sz(L, tau, y));
    };
    const double r1 = res(1e-3), r2 = res(1e-4);
    CHECK(r2 < 1e-5);
    if (r1 > 1e-9) CHECK(r1 / r2 > 50);
    const double hy = 1e-5 * y;
    const double fdy = (ring_z(L, tau, y + hy) - ring_z(L, tau, y - hy)) / (2 * hy);
    CHECK(ry == doctest::Approx(fdy).epsilon(1e-6));
  }
}

TEST_CASE("source support lies inside the transported transition zone") {
  auto L = make_loc(2.0, 2.0 / 3.0, 2.0);
  const double mu = 2.0 / 3.0;
  for (double dt : {0.0, 1.0, 2.5}) {
    const double tau = L.cutoff.tau0 + dt;
    const double lo = L.cutoff.y0 * std::exp((1 - mu) * dt), hi = 2 * L.cutoff.y0 * std::exp(dt);
    const auto [a, b] = transition_zone(L, tau);
    CHECK(a >= lo * (1 - 1e-12));
    CHECK(b <= hi * (1 + 1e-12));
    for (double y : geomspace(0.01 * lo, 0.999 * lo, 30)) CHECK(source_Sz(L, tau, y) == 0.0);
    for (double y : geomspace(hi, 10 * hi, 10)) CHECK(source_Sz(L, tau, y) == 0.0);
    CHECK(source_Sz(L, tau, 0.5 * (a + b)) != 0.0);
  }
}

TEST_CASE("derivative envelope of ring_z for y >= 1") {
  auto L = make_loc(2.0, 2.0 / 3.0, 2.0);
  const double mu = 2.0 / 3.0;
  for (int i = 1; i <= L.profile.scaling.n_mu; ++i) {
    double A0 = 0, A1 = 0;
    for (double dt : {0.0, 1.0, 2.0, 3.0}) {
      const double tau = L.cutoff.tau0 + dt;
      double a = 0;
      for (double y : geomspace(1.0, 2 * L.cutoff.y0 * std::exp(dt), 300))
        a = std::max(a, std::fabs(ring_z_jet(L, tau, y, i).deriv(i)) * std::pow(y, i - (1 - mu)));
      (dt == 0.0 ? A0 : A1) = std::max(dt == 0.0 ? A0 : A1, a);
    }
    CHECK(std::isfinite(A1));
    CHECK(A1 < 3 * A0);  // one constant serves every tau
  }
}

TEST_CASE("source norm decay rates at gamma=2, mu=2/3") {
  auto L = make_loc(2.0, 2.0 / 3.0);
  const auto fits = fit_source_decay(L, 3.0, 7);
  CHECK(fits.size() == static_cast<std::size_t>(L.profile.scaling.n_mu));
  for (const auto& f : fits) {
    INFO("i=" << f.i << " rate=" << f.rate << " bound=" << f.bound);
    CHECK(f.rate >= f.bound - 0.05);
    CHECK(f.C0 > 0);
    CHECK(f.C_max <= f.C0 * (1 + 1e-9));  // the bound holds with the tau0 constant
  }
}

TEST_CASE("source norm quadrature converges") {
  auto L = make_loc(2.0, 2.0 / 3.0);
  const double tau = L.cutoff.tau0 + 1.0;
  for (int i = 1; i <= 2; ++i)
    CHECK(source_norm_sq(L, tau, i, 200) == doctest::Approx(source_norm_sq(L, tau, i, 400)).epsilon(1e-8));
}

TEST_CASE("localization CSV export") {
  auto L = make_loc(2.0, 0.5, 2.0);
  const std::string path = "loc_test.csv";
  write_localization_csv(L, {2.0, 3.0}, {0.0, 5.0, 10.0}, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "tau,y,chi,ringz,Sz\r");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 6);
  std::remove(path.c_str());
}
