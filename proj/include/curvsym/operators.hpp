#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "curvsym/grid.hpp"
#include "curvsym/taylor.hpp"

namespace curvsym {

using cplx = std::complex<double>;

/** Taylor expansion of a (complex) function of one variable at x to the given order. */
using SeriesFn = std::function<Series(double x, int order)>;

/** A function of one coordinate that can be expanded to any derivative order. */
struct Function1D {
  SeriesFn eval;
  std::string label;

  Series operator()(double x, int order) const { return eval(x, order); }
  cplx value(double x) const { return eval(x, 0).c[0]; }
  cplx derivative(double x, int k) const { return eval(x, k).derivative(k); }
};

/** Wraps a generic lambda over RealSeries (real-valued) as a SeriesFn. */
template <typename F>
SeriesFn real_fn(F f) {
  return [f](double x, int k) { return to_complex(f(RealSeries::variable(x, k))); };
}

/** Wraps a generic lambda RealSeries -> Series (complex-valued). */
template <typename F>
SeriesFn complex_fn(F f) {
  return [f](double x, int k) { return Series(f(RealSeries::variable(x, k))); };
}

inline SeriesFn constant_fn(cplx c) {
  return [c](double, int k) { return Series(c, k); };
}

template <typename F>
Function1D make_function(F f, std::string label) {
  return Function1D{real_fn(std::move(f)), std::move(label)};
}

inline Function1D operator+(const Function1D& a, const Function1D& b) {
  return {[a, b](double x, int k) { return a(x, k) + b(x, k); }, a.label + " + " + b.label};
}
inline Function1D operator-(const Function1D& a, const Function1D& b) {
  return {[a, b](double x, int k) { return a(x, k) - b(x, k); }, a.label + " - " + b.label};
}
inline Function1D operator*(cplx s, const Function1D& a) {
  return {[a, s](double x, int k) { return a(x, k) * s; }, a.label};
}
inline Function1D operator*(const Function1D& a, const Function1D& b) {
  return {[a, b](double x, int k) { return a(x, k) * b(x, k); }, a.label + " * " + b.label};
}

/**
 * Linear differential form sum_j a_j(x) d^j/dx^j. A first-order form alpha d + beta
 * is the basic operator; higher orders arise from composition and Hamiltonians.
 */
struct DiffOp {
  std::vector<SeriesFn> coeffs;  // coeffs[j] multiplies the j-th derivative; empty = 0
  std::string label;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  cplx coefficient(int j, double x) const {
    if (j < 0 || j > order() || !coeffs[j]) return 0.0;
    return coeffs[j](x, 0).c[0];
  }
};

/** alpha(x) d/dx + beta(x). */
inline DiffOp first_order(SeriesFn alpha, SeriesFn beta, std::string label) {
  return DiffOp{{std::move(beta), std::move(alpha)}, std::move(label)};
}

/** a2 d^2 + a1 d + a0. */
inline DiffOp second_order(SeriesFn a2, SeriesFn a1, SeriesFn a0, std::string label) {
  return DiffOp{{std::move(a0), std::move(a1), std::move(a2)}, std::move(label)};
}

inline DiffOp multiplication(SeriesFn f, std::string label) { return DiffOp{{std::move(f)}, std::move(label)}; }

inline DiffOp identity_op() { return DiffOp{{constant_fn(1.0)}, "I"}; }

/** op + c (constant shift of the multiplicative part). */
inline DiffOp shifted(DiffOp op, cplx c) {
  SeriesFn a0 = op.coeffs.empty() ? SeriesFn{} : op.coeffs[0];
  if (op.coeffs.empty()) op.coeffs.resize(1);
  op.coeffs[0] = [a0, c](double x, int k) { return a0 ? a0(x, k) + c : Series(c, k); };
  return op;
}

inline DiffOp scaled(DiffOp op, cplx s) {
  for (auto& a : op.coeffs)
    if (a) a = [a, s](double x, int k) { return a(x, k) * s; };
  return op;
}

/** Sum of two forms. */
inline DiffOp add(const DiffOp& A, const DiffOp& B, std::string label = {}) {
  DiffOp C;
  C.label = label.empty() ? A.label + " + " + B.label : std::move(label);
  C.coeffs.resize(std::max(A.coeffs.size(), B.coeffs.size()));
  for (size_t j = 0; j < C.coeffs.size(); ++j) {
    SeriesFn a = j < A.coeffs.size() ? A.coeffs[j] : SeriesFn{};
    SeriesFn b = j < B.coeffs.size() ? B.coeffs[j] : SeriesFn{};
    if (a && b) C.coeffs[j] = [a, b](double x, int k) { return a(x, k) + b(x, k); };
    else C.coeffs[j] = a ? a : b;
  }
  return C;
}

/**
 * Composition A B as a single form: sum_i a_i d^i (sum_j b_j d^j)
 * = sum_{i,j,m} binom(i,m) a_i b_j^(i-m) d^(m+j).
 */
inline DiffOp compose(const DiffOp& A, const DiffOp& B, std::string label = {}) {
  DiffOp C;
  C.label = label.empty() ? A.label + " " + B.label : std::move(label);
  const int oa = A.order(), ob = B.order();
  if (oa < 0 || ob < 0) return C;
  C.coeffs.resize(oa + ob + 1);
  for (int p = 0; p <= oa + ob; ++p) {
    C.coeffs[p] = [A, B, oa, ob, p](double x, int k) {
      Series out(cplx(0.0), k);
      for (int i = 0; i <= oa; ++i) {
        if (!A.coeffs[i]) continue;
        Series ai = A.coeffs[i](x, k);
        double binom = 1.0;
        for (int m = 0; m <= i; ++m) {
          if (m > 0) binom = binom * (i - m + 1) / m;
          const int j = p - m;
          if (j < 0 || j > ob || !B.coeffs[j]) continue;
          Series bj = differentiate(B.coeffs[j](x, k + (i - m)), i - m);
          out += ai * bj * cplx(binom);
        }
      }
      return out;
    };
  }
  return C;
}

/** Ordered product of forms, applied right to left, with an overall scale. */
struct OperatorChain {
  std::vector<DiffOp> factors;  // leftmost first
  cplx scale = 1.0;
  std::string label;

  int order() const {
    int o = 0;
    for (const auto& f : factors) o += std::max(0, f.order());
    return o;
  }
};

inline OperatorChain chain_of(std::vector<DiffOp> factors, std::string label, cplx scale = 1.0) {
  return OperatorChain{std::move(factors), scale, std::move(label)};
}
inline OperatorChain chain_of(DiffOp op) {
  std::string l = op.label;
  return OperatorChain{{std::move(op)}, 1.0, std::move(l)};
}
inline OperatorChain identity_chain() { return OperatorChain{{}, 1.0, "I"}; }

/** Chain product: (A B) applies B first. */
inline OperatorChain operator*(const OperatorChain& A, const OperatorChain& B) {
  OperatorChain C;
  C.factors = A.factors;
  C.factors.insert(C.factors.end(), B.factors.begin(), B.factors.end());
  C.scale = A.scale * B.scale;
  C.label = A.label + " " + B.label;
  return C;
}

/** Collapses a chain into one form. */
inline DiffOp collapse(const OperatorChain& chain) {
  DiffOp acc = identity_op();
  for (auto it = chain.factors.rbegin(); it != chain.factors.rend(); ++it) acc = compose(*it, acc);
  acc = scaled(acc, chain.scale);
  acc.label = chain.label;
  return acc;
}

/** Exact (Taylor-mode) application of a form to a function; lazy. */
inline Function1D apply(const DiffOp& op, const Function1D& f) {
  const int o = op.order();
  return Function1D{[op, f, o](double x, int k) {
                      Series out(cplx(0.0), k);
                      if (o < 0) return out;
                      Series fx = f(x, k + o);
                      for (int j = 0; j <= o; ++j) {
                        if (!op.coeffs[j]) continue;
                        out += op.coeffs[j](x, k) * truncate(differentiate(fx, j), k);
                      }
                      return out;
                    },
                    op.label + "(" + f.label + ")"};
}

inline Function1D apply(const OperatorChain& chain, const Function1D& f) {
  Function1D g = f;
  for (auto it = chain.factors.rbegin(); it != chain.factors.rend(); ++it) g = apply(*it, g);
  if (chain.scale != cplx(1.0)) g = chain.scale * g;
  return g;
}

inline GridFunction sample(const GridPtr& grid, const Function1D& f) {
  Eigen::VectorXcd v(grid->n());
  for (int i = 0; i < grid->n(); ++i) v[i] = f.value(grid->nodes[i]);
  return GridFunction(grid, std::move(v));
}

namespace detail {
inline Eigen::VectorXcd coefficient_values(const DiffOp& op, int j, const Grid& g) {
  Eigen::VectorXcd a(g.n());
  for (int i = 0; i < g.n(); ++i) {
    a[i] = op.coefficient(j, g.nodes[i]);
    if (!std::isfinite(a[i].real()) || !std::isfinite(a[i].imag()))
      throw PoleError("coefficient of " + op.label + " not finite at node x = " + std::to_string(g.nodes[i]));
  }
  return a;
}
}  // namespace detail

/** Collocation application: each factor contributes sum_j a_j (D^j g). */
inline GridFunction apply(const DiffOp& op, const GridFunction& g) {
  const Grid& G = *g.grid;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(G.n());
  Eigen::VectorXcd deriv = g.values;
  const Eigen::MatrixXcd D = G.D.cast<cplx>();
  for (int j = 0; j <= op.order(); ++j) {
    if (j > 0) deriv = D * deriv;
    if (!op.coeffs[j]) continue;
    out += detail::coefficient_values(op, j, G).cwiseProduct(deriv);
  }
  return GridFunction(g.grid, std::move(out));
}

inline GridFunction apply(const OperatorChain& chain, const GridFunction& g) {
  GridFunction h = g;
  for (auto it = chain.factors.rbegin(); it != chain.factors.rend(); ++it) h = apply(*it, h);
  h.values *= chain.scale;
  return h;
}

/** ||a - b|| / ||ref|| in the grid's weighted norm. */
inline double relative_residual(const GridFunction& a, const GridFunction& b, const GridFunction& ref) {
  GridFunction d(a.grid, a.values - b.values);
  const double den = l2_norm(ref);
  return den > 0 ? l2_norm(d) / den : l2_norm(d);
}

inline double relative_residual(const GridPtr& grid, const Function1D& a, const Function1D& b, const Function1D& ref) {
  return relative_residual(sample(grid, a), sample(grid, b), sample(grid, ref));
}

}  // namespace curvsym
