/** @file jet.hpp
 *  Truncated Taylor series f(x0 + h) = sum_k c_k h^k.
 *
 *  Used to get exact derivatives of the profile, the cutoff and the source
 *  without finite differences.
 */
#pragma once
#include <vector>

namespace vacblow {

class Jet {
 public:
  Jet() = default;
  Jet(double value, int order);  ///< constant
  static Jet variable(double x0, int order);
  static Jet from_coeffs(std::vector<double> c) { Jet j; j.c_ = std::move(c); return j; }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }
  const std::vector<double>& coeffs() const { return c_; }

  double value() const { return c_[0]; }
  /// k-th derivative at x0, k! c_k.
  double deriv(int k) const;
  /// Jet of f', one order lower.
  Jet derivative() const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);

 private:
  std::vector<double> c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator+(double s, Jet a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);

Jet exp(const Jet& a);
Jet log(const Jet& a);
/// a^p for real p; needs a.value() > 0 unless p is a nonnegative integer.
Jet pow(const Jet& a, double p);
Jet ipow(const Jet& a, int n);

/// Series reversion: given y(h) = sum_{k>=1} a_k h^k (constant ignored),
/// returns h(u) with y(h(u)) = u. Needs a_1 != 0.
Jet revert(const Jet& y);

}  // namespace vacblow
