#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "curvsym/errors.hpp"
#include "curvsym/factorizations.hpp"
#include "curvsym/states.hpp"
#include "curvsym/symmetries.hpp"
#include "curvsym/system.hpp"

namespace curvsym {

/**
 * Quantum numbers. Central systems: integers 0 <= |m| <= l <= n.
 * SW/Evans: m = k1+k2+2p, l = m+k3+2g, n = l+2h (SW) or l+h (Evans).
 */
struct QuantumNumbers {
  double n = 0;
  double ell = 0;
  double m = 0;
  int p = 0;
  int g = 0;
  int h = 0;
};

inline std::string to_string(const QuantumNumbers& q) {
  return "(n=" + fmt_param(q.n) + ",l=" + fmt_param(q.ell) + ",m=" + fmt_param(q.m) + ")";
}

inline QuantumNumbers shifted_quantum_numbers(const SystemSpec& s, int p, int g, int h) {
  if (p < 0 || g < 0 || h < 0) throw ParamError("p, g, h must be non-negative");
  QuantumNumbers q;
  q.p = p;
  q.g = g;
  q.h = h;
  q.m = s.k1 + s.k2 + 2.0 * p;
  q.ell = q.m + s.k3 + 2.0 * g;
  q.n = q.ell + (s.kind == SystemKind::SW ? 2.0 * h : double(h));
  return q;
}

// ---------------------------------------------------------------- Kepler-Coulomb

struct KCAdmissibility {
  bool cutoff_form = true;      // 2(n+1)^2 sqrt(-kappa) < q
  bool derivative_form = true;  // 2 kappa (n+1) + q^2/(2(n+1)^3) > 0
};

inline KCAdmissibility kc_admissibility_forms(const SystemSpec& s, double n) {
  KCAdmissibility a;
  const double k = s.kappa();
  if (k >= 0) return a;
  const double n1 = n + 1.0;
  a.cutoff_form = 2.0 * n1 * n1 * std::sqrt(-k) < s.q;
  a.derivative_form = 2.0 * k * n1 + s.q * s.q / (2.0 * n1 * n1 * n1) > 0.0;
  return a;
}

/** True when the state at n is normalizable; the two equivalent forms must agree. */
inline bool kc_admissible(const SystemSpec& s, double n) {
  const KCAdmissibility a = kc_admissibility_forms(s, n);
  if (a.cutoff_form != a.derivative_form) throw Error("inconsistent admissibility forms at n = " + fmt_param(n));
  return a.cutoff_form;
}

/** E_n = kappa n(n+2) - q^2/(4(n+1)^2). */
inline double kc_energy(const SystemSpec& s, double n) {
  if (!kc_admissible(s, n)) throw AdmissibilityError("n = " + fmt_param(n) + " not admissible");
  const double n1 = n + 1.0;
  return s.kappa() * n * (n + 2.0) - s.q * s.q / (4.0 * n1 * n1);
}

// ---------------------------------------------------------------- oscillator

/** kappa(2n+3) + omega > 0. */
inline bool ho_admissible(const SystemSpec& s, double n) { return s.kappa() * (2.0 * n + 3.0) + s.omega > 0.0; }

/** Ebar_n = eps(eps - 4k)/(4k) with eps = kappa(2n+5) + omega. */
inline double ho_energy_bar(const SystemSpec& s, double n) {
  const double eps = ho_epsilon(s, n), k = s.kappa();
  if (k == 0.0) throw ParamError("Ebar is undefined at kappa = 0");
  return eps * (eps - 4.0 * k) / (4.0 * k);
}

/** E_n = Ebar_n - (omega^2 - kappa^2)/(4 kappa); omega(n + 3/2) at kappa = 0. */
inline double ho_energy(const SystemSpec& s, double n) {
  if (!ho_admissible(s, n)) throw AdmissibilityError("n = " + fmt_param(n) + " not admissible");
  const double k = s.kappa();
  if (k == 0.0) return s.omega * (n + 1.5);
  return ho_energy_bar(s, n) - s.Omega2() / (4.0 * k);
}

/** Expanded form kappa(n(n+3) + 3/2) + omega(n + 3/2). */
inline double ho_energy_expanded(const SystemSpec& s, double n) {
  return s.kappa() * (n * (n + 3.0) + 1.5) + s.omega * (n + 1.5);
}

/** Short form kappa n(n+3) + omega(n + 3/2), which omits the constant 3 kappa/2. */
inline double ho_energy_short_form(const SystemSpec& s, double n) {
  return s.kappa() * n * (n + 3.0) + s.omega * (n + 1.5);
}

/** Energy of the radial problem at (possibly real) n for any system. */
inline double system_energy(const SystemSpec& s, double n) {
  return s.oscillator() ? ho_energy(s, n) : kc_energy(s, n);
}

inline bool system_admissible(const SystemSpec& s, double n) {
  return s.oscillator() ? ho_admissible(s, n) : kc_admissible(s, n);
}

// ---------------------------------------------------------------- closed forms

/** Radial highest-weight factor: e^{-q r/2(l+1)} S^l (Kepler type) or C^{(k+w)/2k} S^l (oscillator type). */
inline Function1D highest_weight_radial(const SystemSpec& s, double ell) {
  const Curvature cv = s.curv;
  if (s.oscillator()) {
    const double half = 0.5 * (s.kappa() + s.omega);
    return make_function(
        [cv, half, ell](const auto& r) {
          auto out = exp(log_cos_over_kappa(cv, r) * half);
          if (ell != 0.0) out = out * pow(kappa_sin(cv, r), ell);
          return out;
        },
        "C^((k+w)/2k) S^" + fmt_param(ell));
  }
  const double beta = s.q / (2.0 * (ell + 1.0));
  return make_function(
      [cv, beta, ell](const auto& r) {
        auto out = exp(r * (-beta));
        if (ell != 0.0) out = out * pow(kappa_sin(cv, r), ell);
        return out;
      },
      "e^(-q r/2(l+1)) S^" + fmt_param(ell));
}

/** sin^m cos^k (theta or phi factor); exponents may be real. */
inline Function1D sin_cos_power(double a, double b, const std::string& label) {
  return make_function(
      [a, b](const auto& x) {
        auto out = x * 0.0 + 1.0;
        if (a != 0.0) out = out * pow(sin(x), a);
        if (b != 0.0) out = out * pow(cos(x), b);
        return out;
      },
      label);
}

/** Highest-weight full state: Psi_{n,n,n} (central) or Psi_{sum k, sum k, k1+k2} (SW/Evans). */
inline ProductState highest_weight(const SystemSpec& s, double n) {
  if (s.central()) {
    if (!system_admissible(s, n)) throw AdmissibilityError("n = " + fmt_param(n) + " not admissible");
    return {highest_weight_radial(s, n), sin_cos_power(n, 0.0, "sin^n"), fourier_mode(n), 1.0};
  }
  const double sk = s.k1 + s.k2 + s.k3;
  if (!system_admissible(s, sk)) throw AdmissibilityError("minimum state not admissible");
  return {highest_weight_radial(s, sk), sin_cos_power(s.k1 + s.k2, s.k3, "sin^(k1+k2) cos^k3"),
          sin_cos_power(s.k2, s.k1, "cos^k1 sin^k2"), 1.0};
}

// ---------------------------------------------------------------- normalization

/** One quadrature grid per coordinate over the system's domain. */
inline TensorGrid quadrature_grids(const SystemSpec& s, int n = 256) { return make_tensor_grid(s, n, n, std::max(16, n / 2)); }

/** Fraction of |R|^2 S^2 mass in the outer 5% of (0, R_cut); 1 when samples overflow. */
inline double radial_tail_fraction(const SystemSpec& s, const Function1D& R, int n = 400) {
  const Interval d = s.radial_domain();
  GridPtr g = make_grid_on(Coordinate::r, s.curv, d.lo, d.hi, n);
  GridFunction f = sample(g, R);
  double total = 0.0, tail = 0.0;
  for (int i = 0; i < g->n(); ++i) {
    const double m = g->weights[i] * std::norm(f.values[i]);
    if (!std::isfinite(m)) return 1.0;
    total += m;
    if (g->nodes[i] > d.lo + 0.95 * (d.hi - d.lo)) tail += m;
  }
  return total > 0 ? tail / total : 1.0;
}

inline constexpr double kTailTolerance = 1e-10;

/** True when the radial factor is numerically normalizable on (0, R_cut). */
inline bool radially_normalizable(const SystemSpec& s, const Function1D& R) {
  if (s.kappa() > 0) return true;
  return radial_tail_fraction(s, R) < kTailTolerance;
}

/**
 * Smallest R_cut (from a geometric scan) where every admissible radial highest-weight state
 * up to n_max has outer-5% mass below tol.
 */
inline double choose_r_cut(const SystemSpec& s, double n_max, double tol = 1e-12) {
  if (s.kappa() > 0) return s.curv.r_max;
  for (double R = 10.0; R < 2e4; R *= 1.25) {
    SystemSpec t = s.with_cutoff(R);
    bool ok = true;
    for (int n = 0; n <= int(n_max) && ok; ++n) {
      if (!system_admissible(t, n)) continue;
      ok = radial_tail_fraction(t, highest_weight_radial(t, n)) < tol;
    }
    if (ok) return R;
  }
  throw ConfigError("no R_cut up to 2e4 contains the requested states");
}

/** Unit norm with the state real-positive at the first node of every axis grid. */
inline ProductState normalized(ProductState psi, const TensorGrid& g) {
  const GridFunction R = sample(g.r, psi.radial), P = sample(g.theta, psi.polar), F = sample(g.phi, psi.azimuthal);
  const double nr = l2_norm(R), np = l2_norm(P), nf = l2_norm(F);
  if (!(nr > 0) || !(np > 0) || !(nf > 0) || !std::isfinite(nr * np * nf)) throw NormalizationError("state has zero or infinite norm");
  const cplx x = R.values[0] * P.values[0] * F.values[0];
  const cplx phase = std::abs(x) > 0 ? std::conj(x) / std::abs(x) : cplx(1.0);
  psi.scale = phase / (nr * np * nf);
  return psi;
}

// ---------------------------------------------------------------- ladder-built states

struct BasisState {
  QuantumNumbers qn;
  ProductState psi;
};

namespace detail {

inline void require_integer_qn(double n, double ell, double m) {
  if (n != std::floor(n) || ell != std::floor(ell) || m != std::floor(m) || ell < 0 || std::abs(m) > ell || ell > n)
    throw ParamError("need integers 0 <= |m| <= l <= n");
}

}  // namespace detail

/**
 * Central state Psi_{n,l,m} (unnormalized).
 * KC: (S-)^{n-l} (L-)^{n-m} Psi_{n,n,n}.
 * HO: seed Psi_{0,0,0} or Psi_{1,1,0} by parity, (Lambda+)^{(n-p)/2}, (S+)^{(l-p)/2}, then L+- to m.
 */
inline ProductState build_central_state(const SystemSpec& s, int n, int ell, int m) {
  detail::require_integer_qn(n, ell, m);
  if (!system_admissible(s, n)) throw AdmissibilityError("n = " + std::to_string(n) + " not admissible");
  if (s.kind == SystemKind::KC) {
    ProductState psi = highest_weight(s, n);
    for (int mm = n; mm > m; --mm) psi = apply(lz_pm(s, mm, Sign::minus), psi);
    for (int l = n; l > ell; --l) psi = apply(symmetry_compose(s, SymmetryKind::S_rtheta, Sign::minus, {double(l), double(m)}), psi);
    return psi;
  }
  if (s.kind != SystemKind::HO) throw ParamError("build_central_state needs KC or HO");
  if ((n - ell) % 2 != 0) throw ParamError("HO states need n - l even");
  const int par = n % 2;
  ProductState psi{highest_weight_radial(s, par), sin_cos_power(0.0, par, par ? "cos" : "1"), fourier_mode(0.0), 1.0};
  for (int k = par; k < n; k += 2) psi = apply(radial_ladder(s, k, Sign::plus), psi);
  for (int l = par; l < ell; l += 2) psi = apply(symmetry_compose(s, SymmetryKind::S_rtheta, Sign::plus, {double(l), 0.0}), psi);
  for (int mm = 0; mm < m; ++mm) psi = apply(lz_pm(s, mm, Sign::plus), psi);
  for (int mm = 0; mm > m; --mm) psi = apply(lz_pm(s, mm, Sign::minus), psi);
  return psi;
}

/**
 * SW/Evans state at (p, g, h) (unnormalized), built per factor:
 * (phiLambda+)^p and (thetaLambda+)^g on the closed forms; radial (Lambda+)^h (SW) or
 * (Sigma-)^h from the l = n highest state (Evans).
 */
inline ProductState build_superintegrable_state(const SystemSpec& s, int p, int g, int h) {
  if (s.central()) throw ParamError("build_superintegrable_state needs SW or Evans");
  const QuantumNumbers q = shifted_quantum_numbers(s, p, g, h);
  if (!system_admissible(s, q.n)) throw AdmissibilityError("state " + to_string(q) + " not admissible");
  Function1D phi = sin_cos_power(s.k2, s.k1, "cos^k1 sin^k2");
  for (int i = 0; i < p; ++i) phi = apply(sw_phi_ladder(s, s.k1 + s.k2 + 2.0 * i, Sign::plus), phi);
  Function1D theta = sin_cos_power(q.m, s.k3, "sin^m cos^k3");
  for (int i = 0; i < g; ++i) theta = apply(sw_theta_ladder(s, q.m + s.k3 + 2.0 * i, q.m, Sign::plus), theta);
  Function1D radial;
  if (s.kind == SystemKind::SW) {
    radial = highest_weight_radial(s, q.ell);
    for (int i = 0; i < h; ++i) radial = apply(ho_ladder(s, q.ell + 2.0 * i, Sign::plus), radial);
  } else {
    radial = highest_weight_radial(s, q.n);
    for (int i = 0; i < h; ++i) radial = apply(kc_sigma(s, q.n - i, Sign::minus), radial);
  }
  return {radial, theta, phi, 1.0};
}

/** All admissible central states at level n, normalized on the given grids. */
inline std::vector<BasisState> build_basis(const SystemSpec& s, int n, const TensorGrid& grids) {
  if (!s.central()) throw ParamError("build_basis needs KC or HO");
  if (!system_admissible(s, n)) throw AdmissibilityError("n = " + std::to_string(n) + " not admissible");
  std::vector<BasisState> out;
  for (int l = n; l >= 0; --l) {
    if (s.kind == SystemKind::HO && (n - l) % 2 != 0) continue;
    for (int m = l; m >= -l; --m) {
      QuantumNumbers q;
      q.n = n;
      q.ell = l;
      q.m = m;
      out.push_back({q, normalized(build_central_state(s, n, l, m), grids)});
    }
  }
  return out;
}

inline std::vector<BasisState> build_basis(const SystemSpec& s, int n) { return build_basis(s, n, quadrature_grids(s)); }

/** Number of central states at level n: (n+1)^2 for KC, (n+1)(n+2)/2 for HO. */
inline int degeneracy(const SystemSpec& s, int n) {
  return s.kind == SystemKind::KC ? (n + 1) * (n + 1) : (n + 1) * (n + 2) / 2;
}

}  // namespace curvsym
