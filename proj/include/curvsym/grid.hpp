#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "curvsym/errors.hpp"
#include "curvsym/kappa_trig.hpp"

namespace curvsym {

enum class Coordinate { r, theta, phi };

inline std::string to_string(Coordinate c) {
  switch (c) {
    case Coordinate::r: return "r";
    case Coordinate::theta: return "theta";
    case Coordinate::phi: return "phi";
  }
  return "?";
}

/**
 * Interior Chebyshev-Gauss-Lobatto nodes on (lo, hi) with Fejer second-rule weights
 * multiplied by the coordinate measure (S_kappa^2, sin(theta) or 1).
 */
struct Grid {
  Coordinate coordinate = Coordinate::r;
  Curvature curv;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> nodes;
  std::vector<double> weights;     // measure x quadrature
  std::vector<double> quadrature;  // plain Fejer weights on (lo, hi)
  std::vector<double> barycentric;
  Eigen::MatrixXd D;  // first-derivative matrix on the interior nodes

  int n() const { return static_cast<int>(nodes.size()); }
};

using GridPtr = std::shared_ptr<const Grid>;

namespace detail {

// Fejer second-rule weights on the interior nodes x_j = cos(j pi / N), j = 1..N-1, interval [-1, 1].
inline std::vector<double> fejer2(int N) {
  std::vector<double> w(N + 1, 0.0);
  for (int j = 1; j < N; ++j) {
    const double th = std::numbers::pi * j / N;
    double acc = 0.0;
    for (int k = 1; k <= N / 2; ++k) acc += std::sin((2 * k - 1) * th) / (2 * k - 1);
    w[j] = 4.0 * std::sin(th) / N * acc;
  }
  return w;
}

inline double measure(Coordinate c, const Curvature& curv, double x) {
  switch (c) {
    case Coordinate::r: {
      const double s = kappa_sin(curv, x);
      return s * s;
    }
    case Coordinate::theta: return std::sin(x);
    case Coordinate::phi: return 1.0;
  }
  return 1.0;
}

}  // namespace detail

/** Grid on an explicit open interval. n counts interior nodes. */
inline GridPtr make_grid_on(Coordinate coordinate, const Curvature& curv, double lo, double hi, int n) {
  if (n < 16) throw ConfigError("grid needs at least 16 nodes");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("grid interval must be finite and non-empty");
  auto g = std::make_shared<Grid>();
  g->coordinate = coordinate;
  g->curv = curv;
  g->lo = lo;
  g->hi = hi;
  const int N = n + 1;
  const double half = 0.5 * (hi - lo);
  const auto cc = detail::fejer2(N);
  g->nodes.resize(n);
  g->weights.resize(n);
  g->quadrature.resize(n);
  g->barycentric.resize(n);
  for (int i = 0; i < n; ++i) {
    const int j = i + 1;
    const double t = -std::cos(std::numbers::pi * j / N);
    const double x = lo + half * (t + 1.0);
    g->nodes[i] = x;
    g->quadrature[i] = half * cc[j];
    g->weights[i] = g->quadrature[i] * detail::measure(coordinate, curv, x);
    const double s = std::sin(std::numbers::pi * j / N);
    g->barycentric[i] = (j % 2 == 0 ? 1.0 : -1.0) * s * s;
  }
  // t_i - t_j = 2 sin((i+j) pi / 2N) sin((i-j) pi / 2N), accurate near the ends.
  g->D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      const int a = i + 1, b = k + 1;
      const double diff = 2.0 * std::sin((a + b) * std::numbers::pi / (2.0 * N)) *
                          std::sin((a - b) * std::numbers::pi / (2.0 * N));
      const double d = g->barycentric[k] / g->barycentric[i] / diff;
      g->D(i, k) = d;
      diag -= d;
    }
    g->D(i, i) = diag;
  }
  g->D /= half;
  return g;
}

/**
 * Default domain per coordinate: r on (0, r_max), theta on (0, pi), phi on (0, 2 pi).
 * ConfigError if kappa <= 0 and no R_cut was configured.
 */
inline GridPtr make_grid(Coordinate coordinate, const Curvature& curv, int n) {
  switch (coordinate) {
    case Coordinate::r:
      if (!curv.has_cutoff()) throw ConfigError("kappa <= 0 requires an R_cut");
      return make_grid_on(coordinate, curv, 0.0, curv.r_max, n);
    case Coordinate::theta: return make_grid_on(coordinate, curv, 0.0, std::numbers::pi, n);
    case Coordinate::phi: return make_grid_on(coordinate, curv, 0.0, 2.0 * std::numbers::pi, n);
  }
  throw ConfigError("unknown coordinate");
}

/** Samples of a complex function on a grid. */
struct GridFunction {
  GridPtr grid;
  Eigen::VectorXcd values;

  GridFunction() = default;
  GridFunction(GridPtr g, Eigen::VectorXcd v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid->n()) throw ConfigError("grid function length mismatch");
  }

  template <typename F>
  static GridFunction sample(GridPtr g, F&& f) {
    Eigen::VectorXcd v(g->n());
    for (int i = 0; i < g->n(); ++i) v[i] = std::complex<double>(f(g->nodes[i]));
    return GridFunction(std::move(g), std::move(v));
  }
};

/** Spectral derivative via the differentiation matrix. */
inline GridFunction differentiate(const GridFunction& g) {
  return GridFunction(g.grid, g.grid->D.cast<std::complex<double>>() * g.values);
}

/** Quadrature of |g|^2 times the coordinate measure. */
inline double weighted_norm(const GridFunction& g) {
  double s = 0.0;
  for (int i = 0; i < g.grid->n(); ++i) s += g.grid->weights[i] * std::norm(g.values[i]);
  return s;
}

/** Quadrature of conj(f) g times the coordinate measure. */
inline std::complex<double> inner(const GridFunction& f, const GridFunction& g) {
  if (f.grid != g.grid && f.grid->weights != g.grid->weights) throw ConfigError("inner product across different grids");
  std::complex<double> s = 0.0;
  for (int i = 0; i < f.grid->n(); ++i) s += f.grid->weights[i] * std::conj(f.values[i]) * g.values[i];
  return s;
}

inline double l2_norm(const GridFunction& g) { return std::sqrt(weighted_norm(g)); }

/** Barycentric interpolation of grid samples at an arbitrary point of (lo, hi). */
inline std::complex<double> interpolate(const GridFunction& g, double x) {
  const Grid& G = *g.grid;
  std::complex<double> num = 0.0;
  double den = 0.0;
  for (int i = 0; i < G.n(); ++i) {
    const double d = x - G.nodes[i];
    if (d == 0.0) return g.values[i];
    const double w = G.barycentric[i] / d;
    num += w * g.values[i];
    den += w;
  }
  return num / den;
}

}  // namespace curvsym
