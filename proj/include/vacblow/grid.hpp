/** @file grid.hpp
 *  Shared node sets on [0, y_max] and fields sampled on them.
 */
#pragma once
#include <functional>
#include <memory>
#include <vector>

namespace vacblow {

using GridPtr = std::shared_ptr<const std::vector<double>>;

/// Validates: first node 0, strictly increasing. DomainError otherwise.
GridPtr make_grid(std::vector<double> y);

/// Uniform spacing h on [0,2], then geometric with ratio 1 + h/2 up to y_max.
GridPtr selfsimilar_grid(double h, double y_max);

/// y_k = y_max (k/n)^power, k = 0..n.
GridPtr graded_grid(int n, double y_max, double power = 2.0);

struct GridField {
  GridPtr grid;
  std::vector<double> v;

  std::size_t size() const { return v.size(); }
  double y(std::size_t i) const { return (*grid)[i]; }
};

GridField sample(const GridPtr& g, const std::function<double(double)>& f);
GridField zeros_like(const GridPtr& g);

/// order-th derivative by Fornberg weights on `width` nearest nodes,
/// centered in the interior and one-sided at the ends.
std::vector<double> fd_derivative(const std::vector<double>& y, const std::vector<double>& f, int order, int width);

double sup_norm(const std::vector<double>& v);

}  // namespace vacblow
