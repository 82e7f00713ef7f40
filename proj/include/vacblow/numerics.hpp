/** @file numerics.hpp
 *  Small numerical helpers: FD weights, fits, quadrature.
 */
#pragma once
#include <functional>
#include <vector>

namespace vacblow {

/// Fornberg weights. Returns w[d][j] for derivatives d = 0..m at x0 over nodes xs.
std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& xs, int m);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares slope of log|y| against log x.
LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

struct PowerFit {
  double exponent = 0.0;
  double coeff = 0.0;       ///< leading coefficient c
  double correction = 0.0;  ///< coefficient d of the subleading term
  double exponent_stderr = 0.0;
  double naive_exponent = 0.0;  ///< plain log-log slope over the same data
};

/// Fit y ~ c x^p + d x^(2p-1) in relative least squares.
/// The subleading power 2p-1 is the first correction of a profile defined
/// implicitly by zeta + C zeta^(1/p) = const * x.
PowerFit power_fit_with_correction(const std::vector<double>& x, const std::vector<double>& y);

double trapezoid(const std::vector<double>& x, const std::vector<double>& f);

/// Composite 20-point Gauss-Legendre over [a,b] split in `panels` equal pieces.
double gauss_panels(const std::function<double(double)>& f, double a, double b, int panels);

/// Geometric grid with n nodes on [a, b], a > 0.
std::vector<double> geomspace(double a, double b, int n);
std::vector<double> linspace(double a, double b, int n);

}  // namespace vacblow
