#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "curvsym/operators.hpp"
#include "curvsym/states.hpp"
#include "curvsym/system.hpp"

namespace curvsym {

/** A linear map on Function1D, used to state identities between operator expressions. */
using LinearMap = std::function<Function1D(const Function1D&)>;

inline LinearMap map_of(const OperatorChain& c) {
  return [c](const Function1D& f) { return apply(c, f); };
}
inline LinearMap map_of(const DiffOp& op) {
  return [op](const Function1D& f) { return apply(op, f); };
}
/** A + c I. */
inline LinearMap plus_constant(LinearMap A, double c) {
  return [A, c](const Function1D& f) { return A(f) + cplx(c) * f; };
}
/** A B. */
inline LinearMap then(LinearMap A, LinearMap B) {
  return [A, B](const Function1D& f) { return A(B(f)); };
}

/** Five smooth, generic functions on (lo, hi) with no special relation to any operator. */
inline std::vector<Function1D> test_functions(const Interval& d) {
  const double lo = d.lo, w = d.hi - d.lo;
  auto u = [lo, w](const auto& x) { return (x - lo) * (1.0 / w); };
  return {
      make_function([u](const auto& x) { return exp(u(x) * -1.5) * (u(x) * 2.0 + 0.5); }, "f1"),
      make_function([u](const auto& x) { return cos(u(x) * 3.0 + 0.4) + u(x) * u(x) * u(x); }, "f2"),
      make_function([u](const auto& x) { return u(x) * (1.0 - u(x)) * 4.0 + sin(u(x) * 5.0) * 0.3; }, "f3"),
      make_function([u](const auto& x) { return 1.0 / (u(x) * u(x) + u(x) * 0.5 + 0.7); }, "f4"),
      make_function([u](const auto& x) { return exp(sin(u(x) * 2.0 + 0.3)); }, "f5"),
  };
}

/** ||A f - B f|| / max(||A f||, ||B f||), worst case over the functions. */
inline double identity_residual(const GridPtr& grid, const LinearMap& A, const LinearMap& B, const std::vector<Function1D>& fns) {
  double worst = 0.0;
  for (const auto& f : fns) {
    const GridFunction a = sample(grid, A(f)), b = sample(grid, B(f));
    const double den = std::max(l2_norm(a), l2_norm(b));
    GridFunction diff(grid, a.values - b.values);
    worst = std::max(worst, den > 0 ? l2_norm(diff) / den : l2_norm(diff));
  }
  return worst;
}

/** ||A f - lambda f|| / ||lambda f|| (or / ||A f|| when lambda = 0). */
inline double eigen_residual(const GridPtr& grid, const LinearMap& A, const Function1D& f, cplx lambda) {
  const GridFunction a = sample(grid, A(f)), v = sample(grid, f);
  GridFunction diff(grid, a.values - lambda * v.values);
  const double den = std::abs(lambda) > 0 ? std::abs(lambda) * l2_norm(v) : l2_norm(v);
  return den > 0 ? l2_norm(diff) / den : l2_norm(diff);
}

/** ||A f|| / ||f||: annihilation measure. */
inline double annihilation_residual(const GridPtr& grid, const LinearMap& A, const Function1D& f) {
  return eigen_residual(grid, A, f, 0.0);
}

/** Dense full-state residual ||H psi - E psi|| / ||E psi||. */
inline double full_eigen_residual(const SystemSpec& s, const ProductState& psi, double E, const TensorGrid& g) {
  const DenseField h = to_dense(apply_hamiltonian(s, psi), g);
  const DenseField v = to_dense(psi, g);
  const double den = std::abs(E) > 0 ? std::abs(E) * v.norm() : v.norm();
  return (h - cplx(E) * v).norm() / den;
}

}  // namespace curvsym
