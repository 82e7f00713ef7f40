#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "vacblow/errors.hpp"
#include "vacblow/modulation.hpp"

using namespace vacblow;

namespace {

ModulationState make(double tau, std::vector<double> z, std::vector<double> w) {
  ModulationState s;
  s.tau = tau;
  s.z = std::move(z);
  s.w = std::move(w);
  return s;
}

// d^i at 0 of (a Z + b W) Z' for Z = sum z_j y^j / j!, by polynomial multiplication.
double nonlinear_oracle(const std::vector<double>& zc, const std::vector<double>& wc, double a, double b, int i) {
  const int n = static_cast<int>(zc.size()) + 2;  // Taylor coefficients up to y^(n)
  std::vector<double> Z(n + 1, 0.0), W(n + 1, 0.0), dZ(n + 1, 0.0);
  double fact = 1;
  for (int j = 1; j <= n; ++j) {
    fact *= j;
    if (j >= 2 && j - 2 < static_cast<int>(zc.size())) {
      Z[j] = zc[j - 2] / fact;
      W[j] = wc[j - 2] / fact;
    }
  }
  for (int j = 0; j < n; ++j) dZ[j] = (j + 1) * Z[j + 1];
  double c = 0;
  for (int j = 0; j <= i; ++j) c += (a * Z[j] + b * W[j]) * dZ[i - j];
  return c * std::tgamma(i + 1.0);
}

}  // namespace

TEST_CASE("boundary nonlinearity") {
  auto s = derive_indices(2.0, 2.0 / 3.0);
  auto st = make(0, {0.3, -0.2}, {0.5, 0.1});
  auto n2 = boundary_nonlinear(s, st, 2);
  CHECK(n2.Nz == 0.0);
  CHECK(n2.Nw == 0.0);
  auto n3 = boundary_nonlinear(s, st, 3);
  CHECK(n3.Nz == doctest::Approx(3 * (0.75 * 0.09 + 0.25 * 0.5 * 0.3)).epsilon(1e-15));
  CHECK(n3.Nw == doctest::Approx(3 * (0.25 * 0.3 * 0.5 + 0.75 * 0.25)).epsilon(1e-15));
  CHECK_THROWS_AS(boundary_nonlinear(s, st, 1), IndexError);
  CHECK_THROWS_AS(boundary_nonlinear(s, st, 4), IndexError);
  auto zero = make(0, {0, 0}, {0, 0});
  CHECK(boundary_nonlinear(s, zero, 3).Nz == 0.0);

  // against the full quadratic term on polynomial data
  auto t = derive_indices(1.4, 0.8);  // ceil(beta) = 5
  auto p = make(0, {0.7, -0.4, 0.25, 0.9}, {-0.3, 0.6, 0.15, -0.2});
  for (int i = 2; i <= 5; ++i) {
    auto n = boundary_nonlinear(t, p, i);
    CHECK(n.Nz == doctest::Approx(nonlinear_oracle(p.z, p.w, t.A(), t.B(), i)).epsilon(1e-12));
    CHECK(n.Nw == doctest::Approx(nonlinear_oracle(p.w, p.z, t.A(), t.B(), i)).epsilon(1e-12));
  }
}

TEST_CASE("rhs of the modulation system") {
  auto s = derive_indices(2.0, 2.0 / 3.0);
  auto st = make(0, {0.0, 0.0}, {0.4, 0.0});
  auto d = rhs_modulation(s, st);
  CHECK(d.w[0] == doctest::Approx(-damping_coeffs(s, 2).g * 0.4).epsilon(1e-15));
  auto z = rhs_modulation(s, make(0, {0, 0}, {0, 0}));
  for (double v : z.z) CHECK(v == 0.0);
  for (double v : z.w) CHECK(v == 0.0);
  auto h = derive_indices(1.5, 0.5);
  auto dh = rhs_modulation(h, make(0, {0.0}, {0.3}));
  CHECK(dh.z[0] == doctest::Approx((3 - 1.5) / (2 * 2.5) * 0.3).epsilon(1e-15));
}

TEST_CASE("i = 2 closed forms under RK4") {
  for (auto [ga, mu] : {std::pair{2.0, 0.5}, {2.0, 2.0 / 3.0}, {1.4, 0.6}, {1.2, 0.75}}) {
    auto s = derive_indices(ga, mu);
    auto st = zero_state(s);
    st.w[0] = 0.01;
    st.z[0] = 0.003;
    auto tr = integrate_modulation(s, st, 5.0, 1e-3);
    const auto kg = damping_coeffs(s, 2);
    const double w_exact = std::exp(-kg.g * 5.0) * 0.01;
    CHECK(std::fabs(tr.back().w[0] / w_exact - 1) < 1e-8);
    const double q2 = q2_closed_form(s, 0.01);
    const double z_exact = std::exp(-kg.k * 5.0) * (0.003 - q2) + q2 * std::exp(-kg.g * 5.0);
    CHECK(tr.back().z[0] == doctest::Approx(z_exact).epsilon(1e-9));
    CHECK(tr.back().tau == doctest::Approx(5.0).epsilon(1e-14));
  }
}

TEST_CASE("mu = 1/2 off-manifold limit") {
  auto s = derive_indices(2.0, 0.5);
  auto tr = integrate_modulation(s, make(0, {0.02}, {0.05}), 40.0, 1e-3, 1000);
  CHECK(tr.back().z[0] == doctest::Approx(0.02 + (3 - 2.0) / (5 * 2.0 - 3) * 0.05).epsilon(1e-9));
}

TEST_CASE("step size guard") {
  auto s = derive_indices(2.0, 2.0 / 3.0);
  CHECK_THROWS_AS(integrate_modulation(s, zero_state(s), 1.0, 0.1), ConfigError);
  CHECK_THROWS_AS(integrate_modulation(s, zero_state(s), 1.0, -1e-3), ConfigError);
}

TEST_CASE("q_2 oracle against the closed form") {
  auto s = derive_indices(2.0, 2.0 / 3.0);
  CHECK(q2_closed_form(s, 0.7) == doctest::Approx(-0.1).epsilon(1e-15));
  for (double w2 : {0.1, -0.05, 1e-3, 0.7}) {
    const double q = q_polynomial(s, {w2, 0.0}, 2);
    CHECK(std::fabs(q - q2_closed_form(s, w2)) < 1e-6);
    CHECK(q == doctest::Approx(q2_closed_form(s, w2)).epsilon(1e-10));
  }
  auto t = derive_indices(1.4, 0.6);
  CHECK(std::fabs(q_polynomial(t, {0.08, 0.0}, 2) - q2_closed_form(t, 0.08)) < 1e-6);
}

TEST_CASE("q values vanish for zero w") {
  for (double mu : {2.0 / 3.0, 0.6, 0.8}) {
    auto s = derive_indices(2.0, mu);
    std::vector<double> w(s.ceil_beta - 1, 0.0);
    for (double q : q_values(s, w, s.ceil_beta)) CHECK(q == 0.0);
  }
}

TEST_CASE("q_3 oracle: horizon reproducibility and the explicit exponential sum") {
  const double ga = 2.0, mu = 2.0 / 3.0;
  auto s = derive_indices(ga, mu);
  for (auto [w2, w3] : {std::pair{1e-2, 0.0}, {0.05, -0.02}}) {
    QOracleOptions a;
    QOracleOptions b;
    b.horizon1 = 10;
    b.horizon2 = 20;
    const double qa = q_polynomial(s, {w2, w3}, 3, a), qb = q_polynomial(s, {w2, w3}, 3, b);
    CHECK(std::fabs(qa - qb) < 1e-6);

    // on the constraint, z_2 and w_2 are pure e^{-g_2 tau}; solve z_3 explicitly
    const auto d2 = damping_coeffs(s, 2), d3 = damping_coeffs(s, 3);
    const double A = s.A(), B = s.B(), cw = (3 - ga) * mu / (ga + 1);
    const double q2 = q2_closed_form(s, w2);
    const double N0 = 3 * (B * q2 * w2 + A * w2 * w2);
    const double M0 = 3 * (A * q2 * q2 + B * w2 * q2);
    const double c = -N0 / (d3.g - 2 * d2.g);
    const double q3 = cw * (w3 - c) / (d3.k - d3.g) + (cw * c - M0) / (d3.k - 2 * d2.g);
    CHECK(qa == doctest::Approx(q3).epsilon(1e-8));
  }
}

TEST_CASE("manifold membership and projection") {
  auto s = derive_indices(2.0, 2.0 / 3.0);
  CHECK(is_on_manifold(s, zero_state(s)));
  auto st = zero_state(s);
  st.w = {1e-3, 0.0};
  st.z[0] = -1e-3 / 7;
  st.z[1] = q_polynomial(s, st.w, 3);
  CHECK(is_on_manifold(s, st));
  auto off = st;
  off.z[0] += 1e-6;
  CHECK_FALSE(is_on_manifold(s, off));
  auto pr = project_to_manifold(s, {1e-3, 0.0});
  CHECK(pr.z[0] == doctest::Approx(st.z[0]).epsilon(1e-10));
  CHECK(pr.z[1] == doctest::Approx(st.z[1]).epsilon(1e-8));
  CHECK(is_on_manifold(s, pr));

  // mu in H also pins w_2
  auto h = derive_indices(2.0, 0.6);
  REQUIRE(h.in_H);
  auto ph = project_to_manifold(h, std::vector<double>(h.i_max() - 1, 1e-3));
  CHECK(ph.w[0] == 0.0);
  CHECK(is_on_manifold(h, ph));
  auto bad = ph;
  bad.w[0] = 1e-6;
  CHECK_FALSE(is_on_manifold(h, bad));
}

TEST_CASE("trapping dichotomy at gamma=2, mu=2/3") {
  auto s = derive_indices(2.0, 2.0 / 3.0);
  auto on = project_to_manifold(s, {1e-3, -5e-4});
  auto tr = integrate_modulation(s, on, 20.0, 1e-3, 50);
  auto c = classify(s, tr);
  CHECK(c.kind == TrajectoryClass::Decaying);
  CHECK(c.rate >= s.a0 - 0.05);
  CHECK(s.a0 == doctest::Approx(11.0 / 9.0).epsilon(1e-14));

  auto off = on;
  off.z[0] += 1e-6;
  auto tr2 = integrate_modulation(s, off, 30.0, 1e-3, 50);
  auto g = classify(s, tr2);
  CHECK(g.kind == TrajectoryClass::Growing);
  CHECK(g.index == 2);
  CHECK(std::fabs(g.rate - 1.0 / 3.0) < 0.02);

  auto z = classify(s, integrate_modulation(s, zero_state(s), 5.0, 1e-2, 10));
  CHECK(z.kind == TrajectoryClass::Zero);
}

TEST_CASE("decoupled w_i decay at g_i") {
  auto s = derive_indices(1.4, 0.8);
  for (int i = 2; i <= s.i_max(); ++i) {
    auto st = zero_state(s);
    st.w[i - 2] = 1e-3;
    auto tr = integrate_modulation(s, st, 6.0, 1e-3, 20);
    const double r = -std::log(tr.back().w[i - 2] / tr[tr.size() / 2].w[i - 2]) / (6.0 - tr[tr.size() / 2].tau);
    CHECK(r >= damping_coeffs(s, i).g - 0.05);
  }
}

TEST_CASE("localized modulation fields") {
  auto s = derive_indices(2.0, 2.0 / 3.0);
  auto st = make(0, {2.0, 0.0}, {0.0, 0.0});
  CHECK(modulation_fields(s, st, 0.25).Mz == doctest::Approx(1.0 / 16).epsilon(1e-15));
  CHECK(modulation_fields(s, st, 1.0).Mz == 0.0);
  CHECK(modulation_fields(s, st, 3.0).Mw == 0.0);
  auto zf = modulation_fields(s, zero_state(s), 0.3);
  CHECK(zf.Mz == 0.0);
  CHECK(zf.Mw == 0.0);
  auto g = make(0, {0.4, -1.1}, {0.3, 0.8});
  for (double y : {0.2, 0.55, 0.7, 0.95}) {
    const double h = 1e-6;
    auto a = modulation_fields(s, g, y + h), b = modulation_fields(s, g, y - h), m = modulation_fields(s, g, y);
    CHECK(m.dMz == doctest::Approx((a.Mz - b.Mz) / (2 * h)).epsilon(1e-6));
    CHECK(m.dMw == doctest::Approx((a.Mw - b.Mw) / (2 * h)).epsilon(1e-6));
  }
  double mx = 0;
  for (double y = 0; y <= 1.2; y += 1e-4) {
    CHECK(dphi_cut(y) <= 0.0);
    mx = std::max(mx, -dphi_cut(y));
  }
  CHECK(mx <= 4.0);
  CHECK(mx == doctest::Approx(3.75).epsilon(1e-6));
  CHECK(phi_cut(0.5) == 1.0);
  CHECK(phi_cut(1.0) == 0.0);
}

TEST_CASE("time shift system") {
  auto s = derive_indices(2.0, 0.5);
  auto z = time_shift_integrate(s, 0.0, 0.0, 20.0);
  for (const auto& p : z.traj) CHECK(p.w1 == 0.0);
  CHECK(z.Tstar == 0.0);

  auto r = time_shift_integrate(s, 0.01, 0.0, 40.0);
  CHECK(r.strictly_decreasing);
  CHECK(r.ceiling == doctest::Approx(0.0100502512562814).epsilon(1e-12));
  CHECK(r.Tstar < r.ceiling);
  CHECK(r.Tstar < 0.02);
  CHECK(r.Tstar > 0.0);
  CHECK(r.max_z1_residual < 1e-12);
  // T* from a finer step agrees
  auto f = time_shift_integrate(s, 0.01, 0.0, 40.0, 5e-4);
  CHECK(f.Tstar == doctest::Approx(r.Tstar).epsilon(1e-10));
  // exponential envelope
  for (const auto& p : r.traj) {
    CHECK(p.w1 <= 0.01 * std::exp(-0.5 * 0.5 * p.tau) * (1 + 1e-12));
    CHECK(p.w1 > 0);
  }
  CHECK_THROWS_AS(time_shift_integrate(s, 3.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(time_shift_integrate(s, 1.5, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(time_shift_integrate(s, -0.1, 0.0, 1.0), DomainError);
}

TEST_CASE("trajectory CSV") {
  auto s = derive_indices(2.0, 2.0 / 3.0);
  auto tr = integrate_modulation(s, project_to_manifold(s, {1e-3, 0.0}), 1.0, 1e-2, 10);
  write_trajectory_csv(tr, "traj_test.csv");
  std::ifstream in("traj_test.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "tau,z2,z3,w2,w3\r");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == static_cast<int>(tr.size()));
  std::remove("traj_test.csv");
}
