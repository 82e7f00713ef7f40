/** @file scaling.hpp
 *  Parameter space (gamma, mu) and the derived indices.
 */
#pragma once

namespace vacblow {

struct Damping {
  double k;  ///< anti-damping rate of z_i
  double g;  ///< damping rate of w_i
};

struct GasScaling {
  double gamma = 2.0;
  double mu = 0.5;
  double beta = 2.0;   ///< 1/(1-mu)
  double delta = 2.0;  ///< 1/mu
  int n_mu = 3;        ///< floor(beta + 1/2) + 1
  int floor_beta = 2;  ///< floor of beta, snapped at integers
  int ceil_beta = 2;
  bool in_S = true;   ///< beta integer
  bool in_H = false;  ///< beta + 1/2 integer
  double a0 = 7.0 / 6.0;

  double A() const { return (gamma + 1.0) / 4.0; }  ///< coefficient of z in lambda_1
  double B() const { return (3.0 - gamma) / 4.0; }  ///< coefficient of w in lambda_1
  double ubar0() const { return 2.0 * mu / (gamma + 1.0); }
  int i_max() const { return n_mu - 1; }
};

/// Throws DomainError unless gamma in (1,3) and mu in [1/2,1).
GasScaling derive_indices(double gamma, double mu);

/// (k_i, g_i) for i >= 2; IndexError otherwise.
Damping damping_coeffs(const GasScaling& s, int i);

double decay_rate_a0(const GasScaling& s);

/// Binomial coefficient as a double.
double binom(int n, int k);

}  // namespace vacblow
