#pragma once

#include <string>

#include "curvsym/errors.hpp"
#include "curvsym/factorizations.hpp"
#include "curvsym/states.hpp"
#include "curvsym/system.hpp"

namespace curvsym {

enum class SymmetryKind { S_rtheta, L_thetaphi };

/** Parameters of the state a symmetry acts on. */
struct SymmetryParams {
  double ell = 0;
  double m = 0;
};

/** L+- = e^{+-i phi}(+-d_t - m cot) on a mode e^{i m phi}. */
inline ProductOperator lz_pm(const SystemSpec& s, double m, Sign sign) {
  if (!s.central()) throw ParamError("lz_pm needs a central system");
  ProductOperator op;
  op.polar = chain_of(lz_pm_polar(m, sign));
  op.azimuthal = chain_of(phase_factor(sign));
  op.label = "L" + sign_str(sign) + "(m=" + fmt_param(m) + ")";
  return op;
}

/** Radial energy ladder Lambda+- at fixed l (oscillator radial parts). */
inline ProductOperator radial_ladder(const SystemSpec& s, double n, Sign sign) {
  if (!s.oscillator()) throw ParamError("radial_ladder needs an oscillator radial part");
  ProductOperator op;
  op.radial = ho_ladder(s, n, sign);
  op.label = op.radial.label;
  return op;
}

/**
 * Symmetries built from radial shifts and angular ladders.
 * KC: S- = Sigma-_l Lambda-_l, S+ = Sigma+_{l+1} Lambda+_{l+1}.
 * HO: S+ = Sigma+_l Lambda+_{l+2} Lambda+_{l+1}, S- = Sigma-_l Lambda-_{l-1} Lambda-_l.
 * SW/Evans: S = (radial shift by two) thetaLambda; L = thetaSigma phiLambda.
 */
inline ProductOperator symmetry_compose(const SystemSpec& s, SymmetryKind which, Sign sign, SymmetryParams p) {
  ProductOperator op;
  const double l = p.ell, m = p.m;
  const std::string tag = sign_str(sign) + "(l=" + fmt_param(l) + ",m=" + fmt_param(m) + ")";
  if (which == SymmetryKind::L_thetaphi) {
    if (s.central()) throw ParamError("L_thetaphi needs SW or Evans");
    op.polar = chain_of(sw_theta_shift(s, m, sign));
    op.azimuthal = chain_of(sw_phi_ladder(s, m, sign));
    op.label = "L_thetaphi" + tag;
    return op;
  }
  switch (s.kind) {
    case SystemKind::KC:
      if (sign == Sign::plus) {
        op.radial = chain_of(kc_sigma(s, l + 1, Sign::plus));
        op.polar = chain_of(legendre_ladder(l + 1, Sign::plus));
      } else {
        op.radial = chain_of(kc_sigma(s, l, Sign::minus));
        op.polar = chain_of(legendre_ladder(l, Sign::minus));
      }
      break;
    case SystemKind::HO:
      op.radial = ho_shift(s, l, sign);
      if (sign == Sign::plus)
        op.polar = chain_of({legendre_ladder(l + 2, Sign::plus), legendre_ladder(l + 1, Sign::plus)}, "Lambda+^2");
      else
        op.polar = chain_of({legendre_ladder(l - 1, Sign::minus), legendre_ladder(l, Sign::minus)}, "Lambda-^2");
      break;
    case SystemKind::SW:
    case SystemKind::Evans:
      op.radial = radial_shift2(s, l, sign);
      op.polar = chain_of(sw_theta_ladder(s, l, m, sign));
      break;
  }
  op.label = "S_rtheta" + tag;
  return op;
}

}  // namespace curvsym
