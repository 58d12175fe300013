#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <type_traits>

namespace curvsym {

/** Upper bound on the truncation order of a Taylor series. */
inline constexpr int kMaxTaylorOrder = 24;

/**
 * Truncated Taylor series c_0 + c_1 d + ... + c_K d^K of a function about a point.
 * Arithmetic propagates exact derivatives (forward-mode AD of arbitrary order).
 */
template <typename V>
struct Taylor {
  std::array<V, kMaxTaylorOrder + 1> c{};
  int order = 0;

  Taylor() = default;
  explicit Taylor(int k) : order(k) {
    if (k < 0 || k > kMaxTaylorOrder) throw std::out_of_range("Taylor order out of range");
  }
  Taylor(V value, int k) : Taylor(k) { c[0] = value; }

  /** The independent variable x0 + d. */
  static Taylor variable(double x0, int k) {
    Taylor t(V(x0), k);
    if (k >= 1) t.c[1] = V(1);
    return t;
  }
  static Taylor constant(V value, int k) { return Taylor(value, k); }

  V value() const { return c[0]; }
  /** k-th derivative at the expansion point. */
  V derivative(int k) const {
    V f = c[k];
    for (int j = 2; j <= k; ++j) f *= double(j);
    return f;
  }

  template <typename W>
  explicit operator Taylor<W>() const {
    Taylor<W> out(order);
    for (int i = 0; i <= order; ++i) out.c[i] = W(c[i]);
    return out;
  }

  Taylor& operator+=(const Taylor& o) { for (int i = 0; i <= order; ++i) c[i] += o.c[i]; return *this; }
  Taylor& operator-=(const Taylor& o) { for (int i = 0; i <= order; ++i) c[i] -= o.c[i]; return *this; }
  Taylor& operator+=(V s) { c[0] += s; return *this; }
  Taylor& operator-=(V s) { c[0] -= s; return *this; }
  Taylor& operator*=(V s) { for (int i = 0; i <= order; ++i) c[i] *= s; return *this; }
  Taylor& operator/=(V s) { for (int i = 0; i <= order; ++i) c[i] /= s; return *this; }
  Taylor& operator*=(const Taylor& o) { *this = *this * o; return *this; }
  Taylor& operator/=(const Taylor& o) { *this = *this / o; return *this; }

  friend Taylor operator-(Taylor a) { for (int i = 0; i <= a.order; ++i) a.c[i] = -a.c[i]; return a; }
  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator+(Taylor a, V s) { return a += s; }
  friend Taylor operator+(V s, Taylor a) { return a += s; }
  friend Taylor operator-(Taylor a, V s) { return a -= s; }
  friend Taylor operator-(V s, const Taylor& a) { return (-a) += s; }
  friend Taylor operator*(Taylor a, V s) { return a *= s; }
  friend Taylor operator*(V s, Taylor a) { return a *= s; }
  friend Taylor operator/(Taylor a, V s) { return a /= s; }

  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor out(std::min(a.order, b.order));
    for (int k = 0; k <= out.order; ++k) {
      V s{};
      for (int i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
      out.c[k] = s;
    }
    return out;
  }
  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    Taylor q(std::min(a.order, b.order));
    for (int k = 0; k <= q.order; ++k) {
      V s = a.c[k];
      for (int i = 1; i <= k; ++i) s -= b.c[i] * q.c[k - i];
      q.c[k] = s / b.c[0];
    }
    return q;
  }
  friend Taylor operator/(V s, const Taylor& b) { return Taylor(s, b.order) / b; }
};

using RealSeries = Taylor<double>;
using Series = Taylor<std::complex<double>>;

// Mixed real/complex promotion used by operator coefficients.
inline Series to_complex(const RealSeries& a) { return static_cast<Series>(a); }
inline Series operator*(const Series& a, const RealSeries& b) { return a * to_complex(b); }
inline Series operator*(const RealSeries& a, const Series& b) { return to_complex(a) * b; }
inline Series operator+(const Series& a, const RealSeries& b) { return a + to_complex(b); }
inline Series operator+(const RealSeries& a, const Series& b) { return to_complex(a) + b; }
inline Series operator-(const Series& a, const RealSeries& b) { return a - to_complex(b); }
inline Series operator-(const RealSeries& a, const Series& b) { return to_complex(a) - b; }

template <typename V>
Taylor<V> exp(const Taylor<V>& a) {
  using std::exp;
  Taylor<V> e(a.order);
  e.c[0] = exp(a.c[0]);
  for (int k = 1; k <= a.order; ++k) {
    V s{};
    for (int j = 1; j <= k; ++j) s += double(j) * a.c[j] * e.c[k - j];
    e.c[k] = s / double(k);
  }
  return e;
}

template <typename V>
Taylor<V> log(const Taylor<V>& a) {
  using std::log;
  Taylor<V> l(a.order);
  l.c[0] = log(a.c[0]);
  for (int k = 1; k <= a.order; ++k) {
    V s = a.c[k];
    for (int j = 1; j < k; ++j) s -= double(j) / double(k) * l.c[j] * a.c[k - j];
    l.c[k] = s / a.c[0];
  }
  return l;
}

/** a^p for real p; requires a.value() != 0. */
template <typename V>
Taylor<V> pow(const Taylor<V>& a, double p) {
  using std::pow;
  Taylor<V> out(a.order);
  out.c[0] = pow(a.c[0], p);
  for (int k = 1; k <= a.order; ++k) {
    V s{};
    for (int j = 1; j <= k; ++j) s += ((p + 1.0) * j - k) * a.c[j] * out.c[k - j];
    out.c[k] = s / (double(k) * a.c[0]);
  }
  return out;
}

template <typename V>
Taylor<V> sqrt(const Taylor<V>& a) { return pow(a, 0.5); }

namespace detail {
template <typename V>
void sin_cos(const Taylor<V>& a, Taylor<V>& s, Taylor<V>& co, double sign) {
  using std::cos;
  using std::sin;
  using std::cosh;
  using std::sinh;
  s = Taylor<V>(a.order);
  co = Taylor<V>(a.order);
  if (sign < 0) { s.c[0] = sin(a.c[0]); co.c[0] = cos(a.c[0]); }
  else { s.c[0] = sinh(a.c[0]); co.c[0] = cosh(a.c[0]); }
  for (int k = 1; k <= a.order; ++k) {
    V ss{}, cc{};
    for (int j = 1; j <= k; ++j) {
      ss += double(j) * a.c[j] * co.c[k - j];
      cc += double(j) * a.c[j] * s.c[k - j];
    }
    s.c[k] = ss / double(k);
    co.c[k] = sign * cc / double(k);
  }
}
}  // namespace detail

template <typename V>
Taylor<V> sin(const Taylor<V>& a) { Taylor<V> s, c; detail::sin_cos(a, s, c, -1.0); return s; }
template <typename V>
Taylor<V> cos(const Taylor<V>& a) { Taylor<V> s, c; detail::sin_cos(a, s, c, -1.0); return c; }
template <typename V>
Taylor<V> tan(const Taylor<V>& a) { Taylor<V> s, c; detail::sin_cos(a, s, c, -1.0); return s / c; }
template <typename V>
Taylor<V> sinh(const Taylor<V>& a) { Taylor<V> s, c; detail::sin_cos(a, s, c, 1.0); return s; }
template <typename V>
Taylor<V> cosh(const Taylor<V>& a) { Taylor<V> s, c; detail::sin_cos(a, s, c, 1.0); return c; }

/** Series of the j-th derivative, truncated to order a.order - j. */
template <typename V>
Taylor<V> differentiate(const Taylor<V>& a, int j = 1) {
  if (j > a.order) throw std::out_of_range("derivative exceeds series order");
  Taylor<V> out(a.order - j);
  for (int k = 0; k <= out.order; ++k) {
    double f = 1.0;
    for (int i = k + 1; i <= k + j; ++i) f *= double(i);
    out.c[k] = a.c[k + j] * f;
  }
  return out;
}

/** Drops coefficients above order k. */
template <typename V>
Taylor<V> truncate(Taylor<V> a, int k) {
  a.order = std::min(a.order, k);
  return a;
}

inline double value_of(double x) { return x; }
inline double value_of(const RealSeries& x) { return x.value(); }

}  // namespace curvsym
