#include "vacblow/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vacblow/errors.hpp"

namespace vacblow {

namespace {
constexpr long double kClassTol = 1e-12L;

bool near_int(long double x, long double& r) {
  r = std::nearbyint(x);
  return std::fabs(x - r) < kClassTol;
}
}  // namespace

GasScaling derive_indices(double gamma, double mu) {
  if (!(gamma > 1.0 && gamma < 3.0))
    throw DomainError("gamma must lie in (1,3), got " + std::to_string(gamma));
  if (!(mu >= 0.5 && mu < 1.0))
    throw DomainError("mu must lie in [0.5,1), got " + std::to_string(mu));

  GasScaling s;
  s.gamma = gamma;
  s.mu = mu;
  const long double b = 1.0L / (1.0L - static_cast<long double>(mu));
  long double r;
  s.in_S = near_int(b, r);
  s.beta = s.in_S ? static_cast<double>(r) : static_cast<double>(b);
  s.floor_beta = s.in_S ? static_cast<int>(r) : static_cast<int>(std::floor(b));
  s.ceil_beta = s.in_S ? static_cast<int>(r) : static_cast<int>(std::ceil(b));
  long double rh;
  s.in_H = near_int(b + 0.5L, rh);
  const long double fl = s.in_H ? rh : std::floor(b + 0.5L);
  s.n_mu = static_cast<int>(fl) + 1;
  s.delta = 1.0 / mu;
  s.a0 = decay_rate_a0(s);
  return s;
}

Damping damping_coeffs(const GasScaling& s, int i) {
  if (i < 2) throw IndexError("damping_coeffs: i must be >= 2, got " + std::to_string(i));
  const double mu = s.mu, ga = s.gamma;
  return {i - 1.0 - i * mu, mu + i - 1.0 - (3.0 - ga) * i * mu / (ga + 1.0)};
}

double decay_rate_a0(const GasScaling& s) {
  // min{ g_2, (fl - ce + 1) g_2 + (ce - fl) k_ce }
  const double g2 = damping_coeffs(s, 2).g;
  const int fl = s.floor_beta, ce = s.ceil_beta;
  const double other = (fl - ce + 1) * g2 + (ce - fl) * damping_coeffs(s, std::max(ce, 2)).k;
  return std::min(g2, other);
}

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

}  // namespace vacblow
