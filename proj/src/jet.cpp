#include "vacblow/jet.hpp"

#include <algorithm>
#include <cmath>

#include "vacblow/errors.hpp"

namespace vacblow {

Jet::Jet(double value, int order) : c_(order + 1, 0.0) { c_[0] = value; }

Jet Jet::variable(double x0, int order) {
  Jet j(x0, order);
  if (order >= 1) j.c_[1] = 1.0;
  return j;
}

double Jet::deriv(int k) const {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f * c_[k];
}

Jet Jet::derivative() const {
  Jet d(0.0, std::max(order() - 1, 0));
  for (int k = 0; k < order(); ++k) d.c_[k] = (k + 1) * c_[k + 1];
  return d;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  for (int k = 0; k <= std::min(order(), o.order()); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (int k = 0; k <= std::min(order(), o.order()); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator+(Jet a, double s) { a[0] += s; return a; }
Jet operator-(Jet a, double s) { a[0] -= s; return a; }
Jet operator-(double s, const Jet& a) { Jet r = -a; r[0] += s; return r; }
Jet operator+(double s, Jet a) { a[0] += s; return a; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a *= 1.0 / s; }

Jet operator*(const Jet& a, const Jet& b) {
  const int n = std::min(a.order(), b.order());
  Jet r(0.0, n);
  for (int k = 0; k <= n; ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += a[j] * b[k - j];
    r[k] = s;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  const int n = std::min(a.order(), b.order());
  if (b[0] == 0.0) throw SingularityError("jet division by series with zero constant term");
  Jet r(0.0, n);
  for (int k = 0; k <= n; ++k) {
    double s = a[k];
    for (int j = 1; j <= k; ++j) s -= b[j] * r[k - j];
    r[k] = s / b[0];
  }
  return r;
}

Jet operator/(double s, const Jet& a) { return Jet(s, a.order()) / a; }

Jet exp(const Jet& a) {
  const int n = a.order();
  Jet e(std::exp(a[0]), n);
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * a[j] * e[k - j];
    e[k] = s / k;
  }
  return e;
}

Jet log(const Jet& a) {
  const int n = a.order();
  if (!(a[0] > 0.0)) throw SingularityError("jet log of nonpositive value");
  Jet l(std::log(a[0]), n);
  for (int k = 1; k <= n; ++k) {
    double s = a[k];
    for (int j = 1; j < k; ++j) s -= (static_cast<double>(j) / k) * l[j] * a[k - j];
    l[k] = s / a[0];
  }
  return l;
}

Jet ipow(const Jet& a, int n) {
  Jet r(1.0, a.order());
  Jet base = a;
  while (n > 0) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return r;
}

Jet pow(const Jet& a, double p) {
  if (a[0] == 0.0) {
    const double r = std::nearbyint(p);
    if (r == p && p >= 0) return ipow(a, static_cast<int>(r));
    throw SingularityError("jet real power at zero base");
  }
  const int n = a.order();
  Jet r(std::pow(a[0], p), n);
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += ((p + 1.0) * j - k) * a[j] * r[k - j];
    r[k] = s / (k * a[0]);
  }
  return r;
}

Jet revert(const Jet& y) {
  const int n = y.order();
  if (n < 1 || y[1] == 0.0) throw SingularityError("series reversion needs a nonzero linear term");
  Jet h(0.0, n);
  h[1] = 1.0 / y[1];
  // powers[k] = h^k with the currently known coefficients
  for (int m = 2; m <= n; ++m) {
    // coefficient of u^m in sum_{k>=2} y_k h^k, using h_1..h_{m-1}
    Jet hp = h;  // h^1
    double s = 0.0;
    for (int k = 2; k <= m; ++k) {
      hp = hp * h;
      s += y[k] * hp[m];
    }
    h[m] = -s / y[1];
  }
  return h;
}

}  // namespace vacblow
