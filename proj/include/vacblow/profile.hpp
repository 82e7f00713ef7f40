/** @file profile.hpp
 *  Self-similar simple-wave profile: Ubar, zbar = -2 y Ubar and derivatives.
 *
 *  Ubar solves y = K (U0 - U)^{1/mu - 1} / U^{1/mu}, U0 = 2mu/(gamma+1).
 *  Equivalently zeta = -zbar solves zeta + C zeta^beta = 2 U0 y with
 *  C = (2K)^{1-beta}; the jet routines use this polynomial-like form.
 */
#pragma once
#include <string>
#include <vector>

#include "vacblow/jet.hpp"
#include "vacblow/scaling.hpp"

namespace vacblow {

struct ProfileParams {
  GasScaling scaling;
  double K = 0.5;
};

ProfileParams make_profile_params(double gamma, double mu, double K = 0.5);

/// Ubar together with the deficit U0 - Ubar, each computed without cancellation.
struct UbarPoint {
  double u;
  double deficit;
};

UbarPoint solve_ubar_point(const ProfileParams& p, double y);
double solve_ubar(const ProfileParams& p, double y);
double zbar(const ProfileParams& p, double y);
double dzbar(const ProfileParams& p, double y);

/// Constant C in zeta + C zeta^beta = 2 U0 y.
double zeta_coeff(const ProfileParams& p);

/// Taylor jet of zbar around y (exact derivatives to rounding).
Jet zbar_jet(const ProfileParams& p, double y, int order);

/// order-th derivative of zbar; order <= n_mu + 1.
double dzbar_higher(const ProfileParams& p, double y, int order);

struct Profile {
  ProfileParams params;
  std::vector<double> grid;
  std::vector<double> ubar;
  std::vector<double> deficit;
  std::vector<double> zbar;
  std::vector<double> dzbar;
  double near_coeff_c1 = 0.0;
  double far_coeff_c2 = 0.0;
};

/// y = 0 plus n geometric nodes on [ymin, ymax].
Profile tabulate_profile(const ProfileParams& p, int n = 2048, double ymin = 1e-6, double ymax = 1e6);
/// Same result computed without OpenMP.
Profile tabulate_profile_serial(const ProfileParams& p, int n = 2048, double ymin = 1e-6,
                                double ymax = 1e6);

struct AsymptoticFit {
  double c1 = 0.0;
  double beta_fit = 0.0;
  double c2 = 0.0;
  double far_exp_fit = 0.0;
  double far_exp_naive = 0.0;  ///< plain log-log slope over the far window
};

/// Near window [1e-6, 1e-3], far window [1e3, 1e5]. Stores c1, c2 in the profile.
AsymptoticFit fit_asymptotics(Profile& profile);

/// Max over nodes of |(y + A zbar) zbar' + (mu-1) zbar| / (1+y).
double profile_residual(const Profile& profile);

void write_profile_csv(const Profile& profile, const std::string& path);

}  // namespace vacblow
