#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "curvsym/factorizations.hpp"
#include "curvsym/grid.hpp"
#include "curvsym/operators.hpp"
#include "curvsym/system.hpp"

namespace curvsym {

/** R(r) P(theta) F(phi) times a scale. */
struct ProductState {
  Function1D radial;
  Function1D polar;
  Function1D azimuthal;
  cplx scale = 1.0;
};

/** Finite sum of product states. */
struct SeparableState {
  std::vector<ProductState> terms;
};

/** Chains acting on each coordinate factor. */
struct ProductOperator {
  OperatorChain radial = identity_chain();
  OperatorChain polar = identity_chain();
  OperatorChain azimuthal = identity_chain();
  cplx scale = 1.0;
  std::string label;
};

inline ProductState apply(const ProductOperator& op, const ProductState& psi) {
  return {apply(op.radial, psi.radial), apply(op.polar, psi.polar), apply(op.azimuthal, psi.azimuthal), op.scale * psi.scale};
}

inline SeparableState apply(const ProductOperator& op, const SeparableState& psi) {
  SeparableState out;
  for (const auto& t : psi.terms) out.terms.push_back(apply(op, t));
  return out;
}

/** Mode e^{i m phi}. */
inline Function1D fourier_mode(double m) {
  return Function1D{complex_fn([m](const RealSeries& x) {
                      RealSeries a = x * m;
                      RealSeries c = cos(a), s = sin(a);
                      Series out(x.order);
                      for (int i = 0; i <= x.order; ++i) out.c[i] = cplx(c.c[i], s.c[i]);
                      return out;
                    }),
                    "e^{i " + fmt_param(m) + " phi}"};
}

inline Function1D constant_function(cplx c) { return Function1D{constant_fn(c), fmt_param(c.real())}; }

/** Tensor grid for full-state quadrature over the system's domain. */
struct TensorGrid {
  GridPtr r, theta, phi;
};

inline TensorGrid make_tensor_grid(const SystemSpec& s, int nr, int nt, int np) {
  const Interval R = s.radial_domain(), T = s.theta_domain(), P = s.phi_domain();
  return {make_grid_on(Coordinate::r, s.curv, R.lo, R.hi, nr), make_grid_on(Coordinate::theta, s.curv, T.lo, T.hi, nt),
          make_grid_on(Coordinate::phi, s.curv, P.lo, P.hi, np)};
}

/** Dense samples on the tensor grid, index (i_r, i_theta, i_phi) flattened r-major. */
struct DenseField {
  TensorGrid grid;
  Eigen::VectorXcd values;

  double norm() const;
};

inline Eigen::VectorXd tensor_weights(const TensorGrid& g) {
  const int a = g.r->n(), b = g.theta->n(), c = g.phi->n();
  Eigen::VectorXd w(a * b * c);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j)
      for (int k = 0; k < c; ++k) w[(i * b + j) * c + k] = g.r->weights[i] * g.theta->weights[j] * g.phi->weights[k];
  return w;
}

inline DenseField to_dense(const SeparableState& psi, const TensorGrid& g) {
  const int a = g.r->n(), b = g.theta->n(), c = g.phi->n();
  DenseField f{g, Eigen::VectorXcd::Zero(a * b * c)};
  for (const auto& t : psi.terms) {
    const GridFunction R = sample(g.r, t.radial), P = sample(g.theta, t.polar), F = sample(g.phi, t.azimuthal);
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) {
        const cplx rp = t.scale * R.values[i] * P.values[j];
        for (int k = 0; k < c; ++k) f.values[(i * b + j) * c + k] += rp * F.values[k];
      }
  }
  return f;
}

inline DenseField to_dense(const ProductState& psi, const TensorGrid& g) { return to_dense(SeparableState{{psi}}, g); }

inline double DenseField::norm() const {
  const Eigen::VectorXd w = tensor_weights(grid);
  double s = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) s += w[i] * std::norm(values[i]);
  return std::sqrt(s);
}

inline cplx inner(const DenseField& f, const DenseField& g) {
  const Eigen::VectorXd w = tensor_weights(f.grid);
  cplx s = 0.0;
  for (Eigen::Index i = 0; i < f.values.size(); ++i) s += w[i] * std::conj(f.values[i]) * g.values[i];
  return s;
}

inline DenseField operator-(const DenseField& a, const DenseField& b) { return {a.grid, a.values - b.values}; }
inline DenseField operator*(cplx s, const DenseField& a) { return {a.grid, s * a.values}; }

/**
 * Full Hamiltonian as three product terms:
 * [-d_rr - 2/T d_r + V] + [1/S^2][-d_tt - cot d_t + k3(k3-1)/cos^2] + [1/S^2][1/sin^2][L_z^2].
 */
inline std::vector<ProductOperator> full_hamiltonian(const SystemSpec& s) {
  const Curvature cv = s.curv;
  const DiffOp radial0 = radial_hamiltonian(s, 0.0);
  const DiffOp inv_s2 = multiplication(real_fn([cv](const auto& r) {
                                         const auto S = kappa_sin(cv, r);
                                         return 1.0 / (S * S);
                                       }),
                                       "1/S^2");
  const DiffOp polar0 = lm2_operator(s, 0.0);
  const DiffOp inv_sin2 = multiplication(real_fn([](const auto& x) {
                                           const auto sn = sin(x);
                                           return 1.0 / (sn * sn);
                                         }),
                                         "1/sin^2");
  ProductOperator t1, t2, t3;
  t1.radial = chain_of(radial0);
  t2.radial = chain_of(inv_s2);
  t2.polar = chain_of(polar0);
  t3.radial = chain_of(inv_s2);
  t3.polar = chain_of(inv_sin2);
  t3.azimuthal = chain_of(lz2_operator(s));
  t1.label = "H_r";
  t2.label = "H_theta";
  t3.label = "H_phi";
  return {t1, t2, t3};
}

inline SeparableState apply_hamiltonian(const SystemSpec& s, const SeparableState& psi) {
  SeparableState out;
  for (const auto& term : full_hamiltonian(s))
    for (const auto& p : psi.terms) out.terms.push_back(apply(term, p));
  return out;
}

inline SeparableState apply_hamiltonian(const SystemSpec& s, const ProductState& psi) {
  return apply_hamiltonian(s, SeparableState{{psi}});
}

}  // namespace curvsym
