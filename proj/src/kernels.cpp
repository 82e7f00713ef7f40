#include "vacblow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vacblow/errors.hpp"

namespace vacblow {

namespace {

void check(const std::vector<double>& y, const std::vector<double>& f, const TransportCoeffs& k) {
  const std::size_t n = y.size();
  if (n < 4 || f.size() != n || !k.vel || k.vel->size() != n || (k.decay && k.decay->size() != n) ||
      (k.source && k.source->size() != n))
    throw DomainError("transport kernel: size mismatch");
}

inline double upwind_node(const std::vector<double>& y, const std::vector<double>& f, const TransportCoeffs& k,
                          double dt, std::size_t i, std::size_t n) {
  const double v = (*k.vel)[i];
  double dfdy = 0.0;
  if (v > 0 && i > 0)
    dfdy = (f[i] - f[i - 1]) / (y[i] - y[i - 1]);
  else if (v < 0 && i + 1 < n)
    dfdy = (f[i + 1] - f[i]) / (y[i + 1] - y[i]);
  double r = -v * dfdy;
  if (k.decay) r -= (*k.decay)[i] * f[i];
  if (k.source) r += (*k.source)[i];
  return f[i] + dt * r;
}

inline double semilag_node(const std::vector<double>& y, const std::vector<double>& f, const TransportCoeffs& k,
                           double dt, std::size_t i, std::size_t n) {
  const double foot = std::clamp(y[i] - dt * (*k.vel)[i], y.front(), y.back());
  // cell [y[j], y[j+1]] containing the foot; |foot - y_i| stays within a cell under CFL < 1
  std::size_t j = i;
  while (j > 0 && y[j] > foot) --j;
  while (j + 2 < n && y[j + 1] < foot) ++j;
  const std::size_t s = std::min(j > 0 ? j - 1 : 0, n - 4);
  double val = 0.0;
  for (std::size_t a = s; a < s + 4; ++a) {
    double l = 1.0;
    for (std::size_t b = s; b < s + 4; ++b)
      if (b != a) l *= (foot - y[b]) / (y[a] - y[b]);
    val += l * f[a];
  }
  double r = 0.0;
  if (k.decay) r -= (*k.decay)[i] * val;
  if (k.source) r += (*k.source)[i];
  return val + dt * r;
}

}  // namespace

void upwind_step_serial(const std::vector<double>& y, const std::vector<double>& f, const TransportCoeffs& k,
                        double dt, std::vector<double>& out) {
  check(y, f, k);
  const std::size_t n = y.size();
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = upwind_node(y, f, k, dt, i, n);
}

void upwind_step_omp(const std::vector<double>& y, const std::vector<double>& f, const TransportCoeffs& k,
                     double dt, std::vector<double>& out) {
  check(y, f, k);
  const long n = static_cast<long>(y.size());
  out.resize(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = upwind_node(y, f, k, dt, i, n);
}

void semilag_step_serial(const std::vector<double>& y, const std::vector<double>& f, const TransportCoeffs& k,
                         double dt, std::vector<double>& out) {
  check(y, f, k);
  const std::size_t n = y.size();
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = semilag_node(y, f, k, dt, i, n);
}

void semilag_step_omp(const std::vector<double>& y, const std::vector<double>& f, const TransportCoeffs& k,
                      double dt, std::vector<double>& out) {
  check(y, f, k);
  const long n = static_cast<long>(y.size());
  out.resize(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = semilag_node(y, f, k, dt, i, n);
}

double cfl_number(const std::vector<double>& y, const std::vector<double>& vel, double dt) {
  const std::size_t n = y.size();
  double c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = vel[i];
    double dy = std::numeric_limits<double>::infinity();
    if (v > 0 && i > 0) dy = y[i] - y[i - 1];
    if (v < 0 && i + 1 < n) dy = y[i + 1] - y[i];
    c = std::max(c, dt * std::fabs(v) / dy);
  }
  return c;
}

double cfl_dt(const std::vector<double>& y, const std::vector<double>& vel, double target) {
  const double c1 = cfl_number(y, vel, 1.0);
  return c1 > 0 ? target / c1 : std::numeric_limits<double>::infinity();
}

}  // namespace vacblow
