#include "vacblow/numerics.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>

#include "vacblow/errors.hpp"

namespace vacblow {

std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& xs, int m) {
  const int n = static_cast<int>(xs.size());
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0, c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw FitError("linear_fit needs at least two matching points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw FitError("linear_fit: degenerate abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      ss += r * r;
    }
    f.slope_stderr = std::sqrt(ss / (n - 2) / sxx);
  }
  return f;
}

LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0 && y[i] != 0 && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(std::fabs(y[i])));
    }
  }
  return linear_fit(lx, ly);
}

namespace {
struct CorrSolve {
  double c, d, ss;
};

CorrSolve solve_cd(const std::vector<double>& x, const std::vector<double>& y, double p) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = std::pow(x[i], p) / y[i];
    A(i, 1) = std::pow(x[i], 2 * p - 1) / y[i];
  }
  Eigen::Vector2d cd = A.colPivHouseholderQr().solve(b);
  return {cd(0), cd(1), (A * cd - b).squaredNorm()};
}
}  // namespace

PowerFit power_fit_with_correction(const std::vector<double>& x, const std::vector<double>& yin) {
  if (x.size() < 5) throw FitError("power fit needs at least five points");
  std::vector<double> y(yin.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::fabs(yin[i]);
  PowerFit out;
  out.naive_exponent = loglog_fit(x, y).slope;
  const double p0 = out.naive_exponent;
  auto obj = [&](double p) { return solve_cd(x, y, p).ss; };
  const auto res = boost::math::tools::brent_find_minima(obj, p0 - 0.1, p0 + 0.1, 52);
  const double p = res.first;
  const auto cd = solve_cd(x, y, p);
  out.exponent = p;
  out.coeff = cd.c;
  out.correction = cd.d;

  // Gauss-Newton covariance for (c, d, p) in relative residuals.
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd J(n, 3);
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double t1 = std::pow(x[i], p), t2 = std::pow(x[i], 2 * p - 1);
    J(i, 0) = t1 / y[i];
    J(i, 1) = t2 / y[i];
    J(i, 2) = (cd.c * t1 * lx + 2.0 * cd.d * t2 * lx) / y[i];
  }
  const double s2 = n > 3 ? cd.ss / (n - 3) : 0.0;
  Eigen::Matrix3d JtJ = J.transpose() * J;
  Eigen::Matrix3d cov = JtJ.completeOrthogonalDecomposition().pseudoInverse() * s2;
  out.exponent_stderr = std::sqrt(std::max(cov(2, 2), 0.0));
  return out;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
  return s;
}

double gauss_panels(const std::function<double(double)>& f, double a, double b, int panels) {
  double s = 0.0;
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * h, hi = lo + h;
    s += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, hi);
  }
  return s;
}

std::vector<double> geomspace(double a, double b, int n) {
  std::vector<double> v(n);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) v[i] = std::exp(la + (lb - la) * i / (n - 1));
  v.front() = a;
  v.back() = b;
  return v;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  v.back() = b;
  return v;
}

}  // namespace vacblow
