#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "curvsym/errors.hpp"
#include "curvsym/taylor.hpp"

namespace curvsym {

/**
 * Curvature parameter with its radial domain (0, r_max).
 * For kappa > 0, r_max = pi/sqrt(kappa); otherwise r_max is a configured cutoff,
 * or +inf when none was configured.
 */
struct Curvature {
  double kappa = 0.0;
  double r_max = std::numeric_limits<double>::infinity();

  static Curvature make(double kappa, double r_cut = std::numeric_limits<double>::infinity()) {
    if (!std::isfinite(kappa)) throw ConfigError("kappa must be finite");
    Curvature c;
    c.kappa = kappa;
    if (kappa > 0) {
      c.r_max = std::numbers::pi / std::sqrt(kappa);
    } else {
      if (!(r_cut > 0)) throw ConfigError("R_cut must be positive");
      c.r_max = r_cut;
    }
    return c;
  }

  bool has_cutoff() const { return std::isfinite(r_max); }
  /** Position of the first zero of C_kappa (+inf for kappa <= 0). */
  double quarter_period() const {
    return kappa > 0 ? 0.5 * std::numbers::pi / std::sqrt(kappa) : std::numeric_limits<double>::infinity();
  }
};

struct KappaTrigValue {
  double c = 1.0;
  double s = 0.0;
  double t = 0.0;  // NaN where c = 0
};

/** |kappa| r^2 below this uses the truncated power series. */
inline constexpr double kSeriesCrossover = 1e-8;
inline constexpr double kPoleTolerance = 1e-14;

namespace detail {

inline void check_domain(const Curvature& curv, double r) {
  const double slack = 1e-12 * (std::isfinite(curv.r_max) ? curv.r_max : 1.0);
  if (!std::isfinite(r) || r < -slack || r > curv.r_max + slack)
    throw DomainError("r = " + std::to_string(r) + " outside [0, r_max]");
}

inline int series_terms(double) { return 4; }
inline int series_terms(const RealSeries& r) { return std::max(4, r.order / 2 + 3); }

template <typename T>
bool use_series(const Curvature& curv, const T& r) {
  const double x = value_of(r);
  return curv.kappa != 0.0 && std::abs(curv.kappa) * x * x < kSeriesCrossover;
}

// sum_j (-kappa)^j r^(2j + shift) / (2j + shift)!
template <typename T>
T even_series(double kappa, const T& r, int shift, int terms) {
  T r2 = r * r;
  T term = shift == 0 ? T(r * 0.0 + 1.0) : r;
  T sum = term;
  for (int j = 1; j < terms; ++j) {
    term = term * r2 * (-kappa / double((2 * j + shift - 1) * (2 * j + shift)));
    sum = sum + term;
  }
  return sum;
}

}  // namespace detail

/** C_kappa(r): cos(sqrt(k) r), 1, cosh(sqrt(-k) r). */
template <typename T>
T kappa_cos(const Curvature& curv, const T& r) {
  using std::cos;
  using std::cosh;
  const double k = curv.kappa;
  if (k == 0.0) return r * 0.0 + 1.0;
  if (detail::use_series(curv, r)) return detail::even_series(k, r, 0, detail::series_terms(r));
  if (k > 0) return cos(r * std::sqrt(k));
  return cosh(r * std::sqrt(-k));
}

/** S_kappa(r): sin(sqrt(k) r)/sqrt(k), r, sinh(sqrt(-k) r)/sqrt(-k). */
template <typename T>
T kappa_sin(const Curvature& curv, const T& r) {
  using std::sin;
  using std::sinh;
  const double k = curv.kappa;
  if (k == 0.0) return r;
  if (detail::use_series(curv, r)) return detail::even_series(k, r, 1, detail::series_terms(r));
  if (k > 0) return sin(r * std::sqrt(k)) / std::sqrt(k);
  return sinh(r * std::sqrt(-k)) / std::sqrt(-k);
}

/** T_kappa = S_kappa / C_kappa; PoleError where C_kappa vanishes. */
template <typename T>
T kappa_tan(const Curvature& curv, const T& r) {
  T c = kappa_cos(curv, r);
  if (std::abs(value_of(c)) < kPoleTolerance) throw PoleError("T_kappa pole at C_kappa(r) = 0");
  return kappa_sin(curv, r) / c;
}

inline KappaTrigValue eval_trig(const Curvature& curv, double r) {
  detail::check_domain(curv, r);
  KappaTrigValue v;
  v.c = kappa_cos(curv, r);
  v.s = kappa_sin(curv, r);
  v.t = std::abs(v.c) < kPoleTolerance ? std::numeric_limits<double>::quiet_NaN() : v.s / v.c;
  return v;
}

struct KappaTrigDerivatives {
  double dc = 0.0;
  double ds = 1.0;
  double dt = 1.0;
};

/** dC = -kappa S, dS = C, dT = 1/C^2. */
inline KappaTrigDerivatives trig_derivatives(const Curvature& curv, double r) {
  KappaTrigValue v = eval_trig(curv, r);
  if (std::abs(v.c) < kPoleTolerance) throw PoleError("dT_kappa pole at C_kappa(r) = 0");
  return {-curv.kappa * v.s, v.c, 1.0 / (v.c * v.c)};
}

/** Radial measure S_kappa(r)^2. */
inline double volume_weight(const Curvature& curv, double r) {
  detail::check_domain(curv, r);
  const double s = kappa_sin(curv, r);
  return s * s;
}

namespace detail {

// Coefficients a_k of log cos(sqrt(u)) = sum_{k>=1} a_k u^k.
inline const std::array<double, kMaxTaylorOrder + 1>& log_cos_sqrt_coefficients() {
  static const std::array<double, kMaxTaylorOrder + 1> a = [] {
    RealSeries c(kMaxTaylorOrder);
    double f = 1.0;
    for (int j = 0; j <= kMaxTaylorOrder; ++j) {
      if (j > 0) f *= -1.0 / double((2 * j - 1) * (2 * j));
      c.c[j] = f;
    }
    return log(c).c;
  }();
  return a;
}

}  // namespace detail

/**
 * log(C_kappa(r)) / kappa, continuous through kappa = 0 where it equals -r^2/2.
 * C_kappa^((kappa+omega)/(2 kappa)) is exp of ((kappa+omega)/2) times this.
 */
template <typename T>
T log_cos_over_kappa(const Curvature& curv, const T& r) {
  using std::log;
  const double k = curv.kappa;
  const double x = value_of(r);
  if (k == 0.0 || std::abs(k) * x * x < 1e-3) {
    const auto& a = detail::log_cos_sqrt_coefficients();
    T r2 = r * r;
    T power = r2;  // kappa^(j-1) r^(2j)
    T sum = power * a[1];
    const int needed = detail::series_terms(r) + 2;
    for (int j = 2; j <= kMaxTaylorOrder; ++j) {
      power = power * r2 * k;
      sum = sum + power * a[j];
      if (j >= needed && std::abs(k * x * x) < 1e-3 && std::abs(value_of(power) * a[j]) < 1e-18 * x * x) break;
    }
    return sum;
  }
  return log(kappa_cos(curv, r)) / k;
}

}  // namespace curvsym
