#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "curvsym/errors.hpp"
#include "curvsym/operators.hpp"
#include "curvsym/system.hpp"

namespace curvsym {

enum class Sign { plus, minus };

inline double sgn(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }
inline std::string sign_str(Sign s) { return s == Sign::plus ? "+" : "-"; }
inline Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }

inline std::string fmt_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// ---------------------------------------------------------------- radial

/** -d_rr - (2/T) d_r + l(l+1)/S^2 + V(r); omega_eff selects the HO frequency. */
inline DiffOp radial_hamiltonian(const SystemSpec& s, double ell, double omega_eff) {
  const Curvature cv = s.curv;
  return second_order(constant_fn(-1.0), real_fn([cv](const auto& r) { return -2.0 / kappa_tan(cv, r); }),
                      real_fn([s, cv, ell, omega_eff](const auto& r) {
                        const auto S = kappa_sin(cv, r);
                        return ell * (ell + 1.0) / (S * S) + radial_potential(s, r, omega_eff);
                      }),
                      "H_" + to_string(s.kind) + "(l=" + fmt_param(ell) + ")");
}

inline DiffOp radial_hamiltonian(const SystemSpec& s, double ell) { return radial_hamiltonian(s, ell, s.omega); }

/** Kepler-Coulomb shift: Sigma+ = -d + (l-1)/T - q/2l, Sigma- = d + (l+1)/T - q/2l. */
inline DiffOp kc_sigma(const SystemSpec& s, double ell, Sign sign) {
  if (ell == 0.0) throw ParamError("kc_sigma needs l != 0");
  const Curvature cv = s.curv;
  const double q = s.q;
  const double e = sgn(sign);
  return first_order(constant_fn(-e), real_fn([cv, ell, q, e](const auto& r) {
                       return (ell - e) / kappa_tan(cv, r) - q / (2.0 * ell);
                     }),
                     "Sigma" + sign_str(sign) + "_KC(l=" + fmt_param(ell) + ")");
}

enum class HOFactor { a, b };

/**
 * a+- = -+d + (l-+1)/T + (kappa+w)/2 T and b+- = -+d + (l-+1)/T + (kappa-w)/2 T.
 */
inline DiffOp ho_ab(const SystemSpec& s, double ell, double omega_eff, HOFactor which, Sign sign) {
  if (!std::isfinite(ell)) throw ParamError("ho_ab needs finite l");
  const Curvature cv = s.curv;
  const double e = sgn(sign);
  const double k = s.kappa();
  const double g = which == HOFactor::a ? 0.5 * (k + omega_eff) : 0.5 * (k - omega_eff);
  return first_order(constant_fn(-e), real_fn([cv, ell, e, g](const auto& r) {
                       const auto t = kappa_tan(cv, r);
                       return (ell - e) / t + t * g;
                     }),
                     std::string(which == HOFactor::a ? "a" : "b") + sign_str(sign) + "(l=" + fmt_param(ell) +
                         ",w=" + fmt_param(omega_eff) + ")");
}

/** Constant in H_{l,w} = a+ a- + kappa(l(l-1) - 1/2) - w(l - 1/2). */
inline double ho_a_constant(const SystemSpec& s, double ell, double w) {
  return s.kappa() * (ell * (ell - 1.0) - 0.5) - w * (ell - 0.5);
}

/** Constant in H_{l,w} = b-_{l+1,w+2k} b+_{l+1,w+2k} + E_l. */
inline double ho_b_constant(const SystemSpec& s, double ell, double w) {
  return s.kappa() * (ell * (ell + 3.0) + 1.5) + w * (ell + 1.5);
}

/** Sigma+_l = a+_{l+2,w} b+_{l+1,w+2k}; Sigma-_l = b-_{l-1,w+2k} a-_{l,w}. */
inline OperatorChain ho_shift(const SystemSpec& s, double ell, Sign sign) {
  const double w = s.omega, k = s.kappa();
  if (sign == Sign::plus)
    return chain_of({ho_ab(s, ell + 2, w, HOFactor::a, Sign::plus), ho_ab(s, ell + 1, w + 2 * k, HOFactor::b, Sign::plus)},
                    "Sigma+_HO(l=" + fmt_param(ell) + ")");
  if (ell < 2.0) throw ParamError("ho_shift Sigma- needs l >= 2");
  return chain_of({ho_ab(s, ell - 1, w + 2 * k, HOFactor::b, Sign::minus), ho_ab(s, ell, w, HOFactor::a, Sign::minus)},
                  "Sigma-_HO(l=" + fmt_param(ell) + ")");
}

/** Radial shift by two units of l: HO Sigma, or the squared KC shift for Kepler-type radial parts. */
inline OperatorChain radial_shift2(const SystemSpec& s, double ell, Sign sign) {
  if (s.oscillator()) return ho_shift(s, ell, sign);
  if (sign == Sign::plus)
    return chain_of({kc_sigma(s, ell + 2, Sign::plus), kc_sigma(s, ell + 1, Sign::plus)}, "Sigma+^2_KC(l=" + fmt_param(ell) + ")");
  return chain_of({kc_sigma(s, ell - 1, Sign::minus), kc_sigma(s, ell, Sign::minus)}, "Sigma-^2_KC(l=" + fmt_param(ell) + ")");
}

/** epsilon_n = kappa(2n + 5) + omega. */
inline double ho_epsilon(const SystemSpec& s, double n) { return s.kappa() * (2.0 * n + 5.0) + s.omega; }

/**
 * N_{eps,w} = kappa(-kappa S^2 d_rr - 2 kappa S^2/T d_r - eps(eps-4k)/4 S^2 + (w^2-k^2)/4 T^2).
 * On a state of H_l at epsilon_n it has eigenvalue -kappa^2 l(l+1).
 */
inline DiffOp ho_n_operator(const SystemSpec& s, double eps, double w) {
  const Curvature cv = s.curv;
  const double k = s.kappa();
  return second_order(real_fn([cv, k](const auto& r) {
                        const auto S = kappa_sin(cv, r);
                        return S * S * (-k * k);
                      }),
                      real_fn([cv, k](const auto& r) {
                        const auto S = kappa_sin(cv, r);
                        return S * S / kappa_tan(cv, r) * (-2.0 * k * k);
                      }),
                      real_fn([cv, k, eps, w](const auto& r) {
                        const auto S = kappa_sin(cv, r);
                        const auto t = kappa_tan(cv, r);
                        return S * S * (-k * eps * (eps - 4 * k) / 4.0) + t * t * (k * (w * w - k * k) / 4.0);
                      }),
                      "N(eps=" + fmt_param(eps) + ",w=" + fmt_param(w) + ")");
}

enum class HOEnergyFactor { c, d };

/**
 * c+- = -+kappa S d + (kappa+w)/(2C) + (eps-2k or eps)/2 C; d uses (kappa-w).
 */
inline DiffOp ho_cd(const SystemSpec& s, double eps, double w, HOEnergyFactor which, Sign sign) {
  const Curvature cv = s.curv;
  const double k = s.kappa();
  const double e = sgn(sign);
  const double g = which == HOEnergyFactor::c ? 0.5 * (k + w) : 0.5 * (k - w);
  const double h = 0.5 * (sign == Sign::plus ? eps - 2 * k : eps);
  return first_order(real_fn([cv, k, e](const auto& r) { return kappa_sin(cv, r) * (-e * k); }),
                     real_fn([cv, g, h](const auto& r) {
                       const auto C = kappa_cos(cv, r);
                       return g / C + C * h;
                     }),
                     std::string(which == HOEnergyFactor::c ? "c" : "d") + sign_str(sign) + "(eps=" + fmt_param(eps) +
                         ",w=" + fmt_param(w) + ")");
}

/** Flat-space energy ladder: Lambda-_n = w(-r d + n - w r^2/2), Lambda+_n = w(r d + n + 3 - w r^2/2). */
inline OperatorChain ho_ladder_flat(const SystemSpec& s, double n, Sign sign) {
  const double w = s.omega;
  const double e = sgn(sign);
  const double shift = sign == Sign::plus ? n + 3.0 : n;
  DiffOp op = first_order(real_fn([w, e](const auto& r) { return r * (e * w); }),
                          real_fn([w, shift](const auto& r) { return (shift - 0.5 * w * r * r) * w; }),
                          "Lambda" + sign_str(sign) + "_flat(n=" + fmt_param(n) + ")");
  return chain_of(op);
}

/**
 * Energy ladder at fixed l: Lambda-_eps = d+_{eps-4k,w} c+_{eps-2k,w-2k}/kappa,
 * Lambda+_eps = d-_{eps+2k,w+2k} c-_{eps,w}/kappa with eps = epsilon_n; flat branch at kappa = 0.
 */
inline OperatorChain ho_ladder(const SystemSpec& s, double n, Sign sign) {
  const double k = s.kappa();
  if (k == 0.0) return ho_ladder_flat(s, n, sign);
  const double eps = ho_epsilon(s, n), w = s.omega;
  if (sign == Sign::minus)
    return chain_of({ho_cd(s, eps - 4 * k, w, HOEnergyFactor::d, Sign::plus),
                     ho_cd(s, eps - 2 * k, w - 2 * k, HOEnergyFactor::c, Sign::plus)},
                    "Lambda-_HO(n=" + fmt_param(n) + ")", 1.0 / k);
  return chain_of({ho_cd(s, eps + 2 * k, w + 2 * k, HOEnergyFactor::d, Sign::minus),
                   ho_cd(s, eps, w, HOEnergyFactor::c, Sign::minus)},
                  "Lambda+_HO(n=" + fmt_param(n) + ")", 1.0 / k);
}

// ---------------------------------------------------------------- angular

/** L_z^2(phi) = -d_phiphi + k2(k2-1)/sin^2 + k1(k1-1)/cos^2 (central: -d_phiphi). */
inline DiffOp lz2_operator(const SystemSpec& s) {
  const double a = s.k2 * (s.k2 - 1.0), b = s.k1 * (s.k1 - 1.0);
  const bool central = s.central();
  return second_order(constant_fn(-1.0), SeriesFn{}, real_fn([a, b, central](const auto& x) {
                        if (central) return x * 0.0;
                        const auto sn = sin(x), cs = cos(x);
                        return a / (sn * sn) + b / (cs * cs);
                      }),
                      "Lz2");
}

/** L_m^2(theta) = -d_tt - cot d_t + m^2/sin^2 + k3(k3-1)/cos^2. */
inline DiffOp lm2_operator(const SystemSpec& s, double m) {
  const double c3 = s.central() ? 0.0 : s.k3 * (s.k3 - 1.0);
  return second_order(constant_fn(-1.0), real_fn([](const auto& x) { return -cos(x) / sin(x); }),
                      real_fn([m, c3](const auto& x) {
                        const auto sn = sin(x), cs = cos(x);
                        return m * m / (sn * sn) + c3 / (cs * cs);
                      }),
                      "L2_m(m=" + fmt_param(m) + ")");
}

/** phi-ladder: cos2p Lz^2 + (1 +- m) sin2p d_p + k1 - k1^2 + k2^2 - k2 +- m cos2p. */
inline DiffOp sw_phi_ladder(const SystemSpec& s, double m, Sign sign) {
  const double e = sgn(sign);
  const double c0 = s.k1 - s.k1 * s.k1 + s.k2 * s.k2 - s.k2;
  DiffOp cos2_lz2 = compose(multiplication(real_fn([](const auto& x) { return cos(x * 2.0); }), "cos2phi"), lz2_operator(s));
  DiffOp rest = first_order(real_fn([m, e](const auto& x) { return sin(x * 2.0) * (1.0 + e * m); }),
                            real_fn([m, e, c0](const auto& x) { return cos(x * 2.0) * (e * m) + c0; }), "");
  DiffOp op = add(cos2_lz2, rest);
  op.label = "phiLambda" + sign_str(sign) + "(m=" + fmt_param(m) + ")";
  return op;
}

/** theta-shift: -L_m^2 - 2(1 +- m) cot d_t + k3(k3-1) - m(m +- 1) + 2m(m +- 1)/sin^2. */
inline DiffOp sw_theta_shift(const SystemSpec& s, double m, Sign sign) {
  const double e = sgn(sign);
  const double c3 = s.k3 * (s.k3 - 1.0);
  const double mm = m * (m + e);
  DiffOp rest = first_order(real_fn([m, e](const auto& x) { return cos(x) / sin(x) * (-2.0 * (1.0 + e * m)); }),
                            real_fn([c3, mm](const auto& x) {
                              const auto sn = sin(x);
                              return 2.0 * mm / (sn * sn) + (c3 - mm);
                            }),
                            "");
  DiffOp op = add(scaled(lm2_operator(s, m), -1.0), rest);
  op.label = "thetaSigma" + sign_str(sign) + "(m=" + fmt_param(m) + ")";
  return op;
}

/**
 * theta-ladder at fixed m: cos2t L_m^2 + (1 +- (l+1/2)) sin2t d_t + m^2 - k3(k3-1)
 * + (1/2 +- (l+1/2))(2cos^2 t - sin^2 t).
 */
inline DiffOp sw_theta_ladder(const SystemSpec& s, double ell, double m, Sign sign) {
  const double e = sgn(sign);
  const double j = ell + 0.5;
  const double c0 = m * m - s.k3 * (s.k3 - 1.0);
  DiffOp cos2_l2 = compose(multiplication(real_fn([](const auto& x) { return cos(x * 2.0); }), "cos2theta"), lm2_operator(s, m));
  DiffOp rest = first_order(real_fn([j, e](const auto& x) { return sin(x * 2.0) * (1.0 + e * j); }),
                            real_fn([j, e, c0](const auto& x) {
                              const auto sn = sin(x), cs = cos(x);
                              return (cs * cs * 2.0 - sn * sn) * (0.5 + e * j) + c0;
                            }),
                            "");
  DiffOp op = add(cos2_l2, rest);
  op.label = "thetaLambda" + sign_str(sign) + "(l=" + fmt_param(ell) + ",m=" + fmt_param(m) + ")";
  return op;
}

enum class ThetaFactor { a, b };

/**
 * theta a+- = -+d + (m-1 or m)/tan + k3 tan, b+- with k3 -> 1 - k3;
 * L_m^2 = a+ a- + (k3-m)(k3-m+1) = b+ b- + (k3+m-2)(k3+m-1).
 */
inline DiffOp sw_theta_ab(const SystemSpec& s, double m, ThetaFactor which, Sign sign) {
  const double e = sgn(sign);
  const double g = which == ThetaFactor::a ? s.k3 : -(s.k3 - 1.0);
  const double mc = sign == Sign::plus ? m - 1.0 : m;
  return first_order(constant_fn(-e), real_fn([g, mc](const auto& x) {
                       const auto t = tan(x);
                       return mc / t + t * g;
                     }),
                     std::string("theta_") + (which == ThetaFactor::a ? "a" : "b") + sign_str(sign) + "(m=" + fmt_param(m) + ")");
}

inline double sw_theta_ab_constant(const SystemSpec& s, double m, ThetaFactor which) {
  return which == ThetaFactor::a ? (s.k3 - m) * (s.k3 - m + 1.0) : (s.k3 + m - 2.0) * (s.k3 + m - 1.0);
}

/**
 * Legendre ladder on the polar factor at fixed m: Lambda+-_L = +-sin d_t + L cos.
 * Lambda-_l P_l^m = (l+m) P_{l-1}^m and Lambda+_{l+1} P_l^m = (l-m+1) P_{l+1}^m.
 */
inline DiffOp legendre_ladder(double L, Sign sign) {
  const double e = sgn(sign);
  return first_order(real_fn([e](const auto& x) { return sin(x) * e; }), real_fn([L](const auto& x) { return cos(x) * L; }),
                     "thetaLambda" + sign_str(sign) + "(L=" + fmt_param(L) + ")");
}

/** theta part of L+- on a mode e^{i m phi}: +-d_t - m cot. */
inline DiffOp lz_pm_polar(double m, Sign sign) {
  const double e = sgn(sign);
  return first_order(constant_fn(e), real_fn([m](const auto& x) { return -m * cos(x) / sin(x); }),
                     "L" + sign_str(sign) + "_theta(m=" + fmt_param(m) + ")");
}

/** Multiplication by e^{+-i phi}. */
inline DiffOp phase_factor(Sign sign) {
  const double e = sgn(sign);
  return multiplication(complex_fn([e](const RealSeries& x) {
                          RealSeries c = cos(x), s = sin(x);
                          Series out(x.order);
                          for (int i = 0; i <= x.order; ++i) out.c[i] = cplx(c.c[i], e * s.c[i]);
                          return out;
                        }),
                        std::string("e^{") + (e > 0 ? "+" : "-") + "i phi}");
}

}  // namespace curvsym
