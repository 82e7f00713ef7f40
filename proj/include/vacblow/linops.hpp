/** @file linops.hpp
 *  Linearized operators around the localized profile, the trivial-mode
 *  eigenfunctions and symmetry modes, the weighted-operator threshold,
 *  energy norms and the interpolation-inequality battery.
 */
#pragma once
#include <string>
#include <vector>

#include "vacblow/grid.hpp"
#include "vacblow/localization.hpp"
#include "vacblow/profile.hpp"

namespace vacblow {

/// (y + A ring) f' + (A ring' + mu - 1) f, 5-point FD.
GridField apply_Lz(const GridField& f, const Localization& L, double tau);
/// (y + B ring) f' + (mu - 1) f
GridField apply_Lw(const GridField& f, const Localization& L, double tau);
/// Linearization around the untruncated profile (w = 0), 5-point FD.
GridField apply_L_profile(const GridField& f, const ProfileParams& p);

std::vector<double> unstable_spectrum(const GasScaling& s);

/// phi_a = zeta^{(1+a)/(1-mu)} / (1-mu + zeta^{mu/(1-mu)}), zeta = -zbar, K = 1/2.
/// SpectralDomainError unless a is in the unstable spectrum and K = 1/2.
double eigenfunction_phi(const ProfileParams& p, double a, double y);
double eigenfunction_dphi(const ProfileParams& p, double a, double y);

/// sup |L phi - a phi| / sup |phi| over ys, exact derivatives.
double eigen_residual(const ProfileParams& p, double a, const std::vector<double>& ys);
/// Same with phi sampled on g and differentiated by FD.
double eigen_residual_fd(const ProfileParams& p, double a, const GridPtr& g);

enum class Symmetry { Galilean, Translation, TimeShift, Scaling };  // Lambda_v, x0, T, alpha

double symmetry_mode(const ProfileParams& p, Symmetry m, double y);
double symmetry_mode_deriv(const ProfileParams& p, Symmetry m, double y);
double symmetry_eigenvalue(const GasScaling& s, Symmetry m);
double symmetry_residual(const ProfileParams& p, Symmetry m, const std::vector<double>& ys);
std::string to_string(Symmetry m);

struct SymmetryModes {
  GridField galilean, translation, time_shift, scaling;
};
SymmetryModes symmetry_modes(const ProfileParams& p, const GridPtr& g);

struct WeightedGap {
  int m = 0;
  double a_min = 0.0;  ///< m(1-mu) - 3/2 + mu/2 = (1-mu)(m - beta - 1/2)
  bool zero_gap = false;
};
WeightedGap weighted_gap(const GasScaling& s, int m);

struct EnergyNorms {
  double Z_weighted = 0, Z_top = 0, Z_d1 = 0, Z_l2 = 0;  ///< |Z/y^n|, |d^n Z|, |dZ|, |Z|
  double W_weighted = 0, W_top = 0, W_d1 = 0, W_l2 = 0;
  std::string warning;
};

/// n = n_mu. Trapezoid on the field grid; the weighted integrand at y = 0 uses
/// the monomial limit. Warns when low Taylor coefficients at 0 do not vanish.
EnergyNorms energy_norms(const GridField& Z, const GridField& W, const GasScaling& s);

struct InequalityRow {
  std::string name;
  double hardy = 0;     ///< max_i |y^{i-n} d^i f| / |d^n f|
  double gn = 0;        ///< max_i weighted interpolation ratio on [1, inf)
  double linf = 0;      ///< max_j L-infinity interpolation ratio
};

struct InequalityReport {
  int n = 0;
  int nodes = 0;
  std::vector<InequalityRow> rows;
};

/// Ten test functions vanishing to order n-1 at 0, on a graded grid with `nodes` cells.
InequalityReport inequality_checks(int n, int nodes);

struct SpectralReport {
  double gamma = 0, mu = 0;
  std::vector<double> spectrum, residuals;
  std::vector<std::pair<std::string, double>> symmetry_residuals;
  WeightedGap gap;
};

SpectralReport spectral_report(double gamma, double mu);
std::string spectral_report_json(const SpectralReport& r);

}  // namespace vacblow
