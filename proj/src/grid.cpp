#include "vacblow/grid.hpp"

#include <algorithm>
#include <cmath>

#include "vacblow/errors.hpp"
#include "vacblow/numerics.hpp"

namespace vacblow {

GridPtr make_grid(std::vector<double> y) {
  if (y.size() < 2 || y.front() != 0.0) throw DomainError("grid must start at 0 and have at least two nodes");
  for (std::size_t i = 1; i < y.size(); ++i)
    if (!(y[i] > y[i - 1])) throw DomainError("grid must be strictly increasing");
  return std::make_shared<const std::vector<double>>(std::move(y));
}

GridPtr selfsimilar_grid(double h, double y_max) {
  if (!(h > 0) || !(y_max > 2)) throw DomainError("selfsimilar_grid: need h > 0 and y_max > 2");
  std::vector<double> y;
  const long n = std::lround(2.0 / h);
  for (long k = 0; k <= n; ++k) y.push_back(2.0 * k / n);
  double dy = 2.0 / n;
  while (y.back() < y_max) {
    dy *= 1.0 + 0.5 * h;
    y.push_back(y.back() + dy);
  }
  return make_grid(std::move(y));
}

GridPtr graded_grid(int n, double y_max, double power) {
  std::vector<double> y(n + 1);
  for (int k = 0; k <= n; ++k) y[k] = y_max * std::pow(static_cast<double>(k) / n, power);
  return make_grid(std::move(y));
}

GridField sample(const GridPtr& g, const std::function<double(double)>& f) {
  GridField out{g, std::vector<double>(g->size())};
  for (std::size_t i = 0; i < g->size(); ++i) out.v[i] = f((*g)[i]);
  return out;
}

GridField zeros_like(const GridPtr& g) { return {g, std::vector<double>(g->size(), 0.0)}; }

std::vector<double> fd_derivative(const std::vector<double>& y, const std::vector<double>& f, int order, int width) {
  const int n = static_cast<int>(y.size());
  if (static_cast<int>(f.size()) != n) throw DomainError("fd_derivative: field/grid size mismatch");
  if (width > n || width <= order) throw DomainError("fd_derivative: stencil width incompatible with grid");
  std::vector<double> d(n);
  std::vector<double> xs(width);
  for (int j = 0; j < n; ++j) {
    const int start = std::clamp(j - width / 2, 0, n - width);
    for (int k = 0; k < width; ++k) xs[k] = y[start + k];
    const auto w = fornberg_weights(y[j], xs, order);
    double s = 0;
    for (int k = 0; k < width; ++k) s += w[order][k] * f[start + k];
    d[j] = s;
  }
  return d;
}

double sup_norm(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace vacblow
