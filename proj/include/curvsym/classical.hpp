#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "curvsym/errors.hpp"
#include "curvsym/kappa_trig.hpp"
#include "curvsym/system.hpp"

namespace curvsym {

using cplx = std::complex<double>;

/** Canonical pairs (r, p_r), (theta, p_theta), (phi, p_phi). */
struct PhasePoint {
  double r = 1.0, p_r = 0.0, theta = 0.5 * std::numbers::pi, p_theta = 0.0, phi = 0.0, p_phi = 0.0;

  std::array<double, 6> to_array() const { return {r, p_r, theta, p_theta, phi, p_phi}; }
  static PhasePoint from_array(const std::array<double, 6>& a) { return {a[0], a[1], a[2], a[3], a[4], a[5]}; }
};

// ---------------------------------------------------------------- Hamiltonian

namespace classical_detail {

inline double K(double k) { return k * k; }

inline double radial_potential(const SystemSpec& s, double r) {
  const double T = kappa_tan(s.curv, r);
  return s.oscillator() ? 0.25 * s.Omega2() * T * T : -s.q / T;
}

inline double radial_potential_dr(const SystemSpec& s, double r) {
  const double S = kappa_sin(s.curv, r), C = kappa_cos(s.curv, r);
  return s.oscillator() ? 0.5 * s.Omega2() * S / (C * C * C) : s.q / (S * S);
}

}  // namespace classical_detail

/** p_phi^2, plus K2^2/sin^2 phi + K1^2/cos^2 phi for SW/Evans. */
inline double Lz2(const SystemSpec& s, const PhasePoint& x) {
  double v = x.p_phi * x.p_phi;
  if (!s.central()) {
    const double sp = std::sin(x.phi), cp = std::cos(x.phi);
    v += classical_detail::K(s.k2) / (sp * sp) + classical_detail::K(s.k1) / (cp * cp);
  }
  return v;
}

/** p_theta^2 + Lz2/sin^2 theta, plus K3^2/cos^2 theta for SW/Evans. */
inline double L2(const SystemSpec& s, const PhasePoint& x) {
  const double st = std::sin(x.theta);
  double v = x.p_theta * x.p_theta + Lz2(s, x) / (st * st);
  if (!s.central()) {
    const double ct = std::cos(x.theta);
    v += classical_detail::K(s.k3) / (ct * ct);
  }
  return v;
}

/** H = p_r^2 + L^2/S^2 + V(r). */
inline double hamiltonian(const SystemSpec& s, const PhasePoint& x) {
  const double S = kappa_sin(s.curv, x.r);
  return x.p_r * x.p_r + L2(s, x) / (S * S) + classical_detail::radial_potential(s, x.r);
}

/** Hamilton's equations in the order of PhasePoint::to_array (bare p^2 kinetic terms). */
inline std::array<double, 6> hamilton_rhs(const SystemSpec& s, const PhasePoint& x) {
  const double S = kappa_sin(s.curv, x.r), C = kappa_cos(s.curv, x.r);
  const double S2 = S * S;
  const double st = std::sin(x.theta), ct = std::cos(x.theta);
  const double lz2 = Lz2(s, x), l2 = L2(s, x);
  double dL2_dtheta = -2.0 * lz2 * ct / (st * st * st);
  double dLz2_dphi = 0.0;
  if (!s.central()) {
    dL2_dtheta += 2.0 * classical_detail::K(s.k3) * st / (ct * ct * ct);
    const double sp = std::sin(x.phi), cp = std::cos(x.phi);
    dLz2_dphi = -2.0 * classical_detail::K(s.k2) * cp / (sp * sp * sp) + 2.0 * classical_detail::K(s.k1) * sp / (cp * cp * cp);
  }
  const double dH_dr = -2.0 * l2 * C / (S2 * S) + classical_detail::radial_potential_dr(s, x.r);
  return {2.0 * x.p_r,
          -dH_dr,
          2.0 * x.p_theta / S2,
          -dL2_dtheta / S2,
          2.0 * x.p_phi / (S2 * st * st),
          -dLz2_dphi / (S2 * st * st)};
}

// ---------------------------------------------------------------- flow

struct Trajectory {
  std::vector<double> t;
  std::vector<PhasePoint> x;
  double energy_drift = 0;  // max |H(t) - H(0)| / |H(0)|
};

/** Throws SingularityError within tol of r = 0, r_max, the polar axis, or an octant wall. */
inline void check_regular(const SystemSpec& s, const PhasePoint& x, double tol = 1e-8) {
  const double hi = s.kappa() > 0 ? s.radial_domain().hi : s.curv.r_max;
  if (!(x.r > tol) || !(x.r < hi * (1.0 - tol))) throw SingularityError("trajectory reached a radial singularity");
  if (!(std::abs(std::sin(x.theta)) > tol)) throw SingularityError("trajectory reached the polar axis");
  if (!s.central()) {
    if (!(std::abs(std::cos(x.theta)) > tol) || !(std::abs(std::sin(x.phi)) > tol) || !(std::abs(std::cos(x.phi)) > tol))
      throw SingularityError("trajectory reached an octant wall");
  }
  for (double v : x.to_array())
    if (!std::isfinite(v)) throw SingularityError("non-finite phase point");
}

namespace classical_detail {

/** Implicit midpoint step, solved by fixed-point iteration. */
inline std::array<double, 6> midpoint_step(const SystemSpec& s, const std::array<double, 6>& y, double h) {
  std::array<double, 6> next = y;
  const auto f0 = hamilton_rhs(s, PhasePoint::from_array(y));
  for (int i = 0; i < 6; ++i) next[i] = y[i] + h * f0[i];
  for (int it = 0; it < 100; ++it) {
    std::array<double, 6> mid;
    for (int i = 0; i < 6; ++i) mid[i] = 0.5 * (y[i] + next[i]);
    const auto f = hamilton_rhs(s, PhasePoint::from_array(mid));
    double change = 0.0, scale = 0.0;
    for (int i = 0; i < 6; ++i) {
      const double v = y[i] + h * f[i];
      change = std::max(change, std::abs(v - next[i]));
      scale = std::max(scale, std::abs(v));
      next[i] = v;
    }
    if (change <= 1e-15 * std::max(1.0, scale)) return next;
  }
  throw StepError("implicit midpoint iteration did not converge");
}

}  // namespace classical_detail

/**
 * Fourth-order symmetric composition (triple jump) of the implicit midpoint rule.
 * Samples every sample_every steps. SingularityError halts the flow within pole_tol of a singular
 * point or when the implicit step diverges.
 */
inline Trajectory flow(const SystemSpec& s, const PhasePoint& start, double t_end, double dt = 1e-3, int sample_every = 100,
                       double pole_tol = 1e-3) {
  if (!(dt > 0) || !(t_end >= 0)) throw ConfigError("flow needs dt > 0 and t_end >= 0");
  check_regular(s, start, pole_tol);
  const double c = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - c), w0 = -c / (2.0 - c);
  const long steps = std::lround(t_end / dt);
  Trajectory tr;
  std::array<double, 6> y = start.to_array();
  const double H0 = hamiltonian(s, start);
  tr.t.push_back(0.0);
  tr.x.push_back(start);
  for (long k = 1; k <= steps; ++k) {
    try {
      y = classical_detail::midpoint_step(s, y, w1 * dt);
      y = classical_detail::midpoint_step(s, y, w0 * dt);
      y = classical_detail::midpoint_step(s, y, w1 * dt);
    } catch (const StepError&) {
      throw SingularityError("integrator diverged at t = " + std::to_string(k * dt));
    }
    const PhasePoint p = PhasePoint::from_array(y);
    check_regular(s, p, pole_tol);
    const double H = hamiltonian(s, p);
    tr.energy_drift = std::max(tr.energy_drift, std::abs(H - H0) / std::max(std::abs(H0), 1e-300));
    if (k % sample_every == 0 || k == steps) {
      tr.t.push_back(k * dt);
      tr.x.push_back(p);
    }
  }
  return tr;
}

// ---------------------------------------------------------------- observables

/**
 * Values frozen at the base point of a bracket: l = sqrt(L^2), m = sqrt(Lz2), Ebar = H + Omega^2/4kappa.
 * Observables read l, m and sqrt(kappa Ebar) from here, the substitution rule for brackets.
 */
struct Frozen {
  double ell = 0;
  double m = 0;
  double kappa_Ebar = 0;  // kappa H + Omega^2/4
};

inline Frozen frozen_at(const SystemSpec& s, const PhasePoint& x) {
  Frozen f;
  f.ell = std::sqrt(L2(s, x));
  f.m = std::sqrt(Lz2(s, x));
  f.kappa_Ebar = s.kappa() * hamiltonian(s, x) + 0.25 * s.Omega2();
  return f;
}

struct ClassicalObservable {
  std::string label;
  std::function<cplx(const PhasePoint&, const Frozen&)> eval;

  cplx operator()(const SystemSpec& s, const PhasePoint& x) const { return eval(x, frozen_at(s, x)); }
};

namespace classical_detail {

inline double sgn_of(const std::string& name) {
  if (name.empty()) throw CatalogError("empty observable name");
  const char c = name.back();
  if (c == '+') return 1.0;
  if (c == '-') return -1.0;
  throw CatalogError("observable '" + name + "' needs a trailing + or -");
}

inline std::string base_of(const std::string& name) { return name.substr(0, name.size() - 1); }

const cplx I(0.0, 1.0);

// KC radial shift: -+ i p_r + l/T - q/2l
inline cplx kc_sigma(const SystemSpec& s, const PhasePoint& x, double l, double e) {
  return -e * I * x.p_r + l / kappa_tan(s.curv, x.r) - s.q / (2.0 * l);
}

// HO factors: -+ i p_r + l/T +- (Omega/2) T
inline cplx ho_a(const SystemSpec& s, const PhasePoint& x, double l, double e) {
  const double T = kappa_tan(s.curv, x.r);
  return -e * I * x.p_r + l / T + 0.5 * s.Omega() * T;
}
inline cplx ho_b(const SystemSpec& s, const PhasePoint& x, double l, double e) {
  const double T = kappa_tan(s.curv, x.r);
  return -e * I * x.p_r + l / T - 0.5 * s.Omega() * T;
}

// HO radial shift: -H_l + (1 + C^2) l^2/S^2 +- 2 i l p_r/T
inline cplx ho_sigma(const SystemSpec& s, const PhasePoint& x, double l, double e) {
  const double S = kappa_sin(s.curv, x.r), C = kappa_cos(s.curv, x.r), T = S / C;
  const double Hl = x.p_r * x.p_r + l * l / (S * S) + 0.25 * s.Omega2() * T * T;
  return -Hl + (1.0 + C * C) * l * l / (S * S) + e * 2.0 * I * l * x.p_r / T;
}

// Energy ladder: C(2r) H_l - (Omega^2/2) S^2 + kappa l^2 -+ i sqrt(kappa Ebar) S(2r) p_r.
// Equal to C(2r) Hbar + kappa l^2 - Omega^2/4kappa, written to stay finite at kappa = 0.
inline cplx ho_lambda(const SystemSpec& s, const PhasePoint& x, double l, double kappa_Ebar, double e, bool squared) {
  const double S = kappa_sin(s.curv, x.r), C = kappa_cos(s.curv, x.r), T = S / C;
  const double k = s.kappa();
  const double Hl = x.p_r * x.p_r + l * l / (S * S) + 0.25 * s.Omega2() * T * T;
  double C2r = C * C - k * S * S, S2r = 2.0 * S * C;
  if (squared) {
    // literal squares of the double-argument functions
    C2r *= C2r;
    S2r *= S2r;
    const double Hbar_shift = k != 0.0 ? 0.25 * s.Omega2() / k : 0.0;
    return C2r * (Hl + Hbar_shift) + k * l * l - Hbar_shift - e * I * std::sqrt(kappa_Ebar) * S2r * x.p_r;
  }
  return C2r * Hl - 0.5 * s.Omega2() * S * S + k * l * l - e * I * std::sqrt(kappa_Ebar) * S2r * x.p_r;
}

// Energy factors: -+ i kappa S p_r +- Omega/2C + sqrt(kappa Ebar) C (c: +Omega, d: -Omega)
inline cplx ho_cd(const SystemSpec& s, const PhasePoint& x, double kappa_Ebar, double e, double omega_sign) {
  const double S = kappa_sin(s.curv, x.r), C = kappa_cos(s.curv, x.r);
  return -e * I * s.kappa() * S * x.p_r + omega_sign * 0.5 * s.Omega() / C + std::sqrt(kappa_Ebar) * C;
}

// Central polar ladder: -+ i p_theta sin(theta) + l cos(theta)
inline cplx polar_ladder(const PhasePoint& x, double l, double e) {
  return -e * I * x.p_theta * std::sin(x.theta) + l * std::cos(x.theta);
}

// Poschl-Teller ladder on an angle u with barriers A/sin^2 u + B/cos^2 u at level lambda^2:
// cos(2u) H_u + A - B -+ i lambda sin(2u) p_u
inline cplx pt_ladder(double u, double pu, double Hu, double A, double B, double lambda, double e) {
  return std::cos(2.0 * u) * Hu + A - B - e * I * lambda * std::sin(2.0 * u) * pu;
}

// Poschl-Teller shift in the sin-barrier strength mu^2: -p^2 + mu^2 cot^2 u - B tan^2 u +- 2 i mu p cot u
inline cplx pt_shift(double u, double pu, double mu, double B, double e) {
  const double t = std::tan(u);
  return -pu * pu + mu * mu / (t * t) - B * t * t + e * 2.0 * I * mu * pu / t;
}

}  // namespace classical_detail

/** Variant of the energy ladder: double-argument functions (plain) or their squares. */
enum class LadderVariant { plain, squared };

/**
 * Catalog of phase-space functions by name (trailing + or - selects the sign):
 *   all:       H, L2, sqrtL2, Lz, Lz2, sqrtLz2, r, p_r
 *   KC:        Sigma+-, S+-
 *   HO:        a+-, b+-, Sigma+-, Pi+-, c+-, d+-, Lambda+-, LambdaSq+-, S+-, Hbar
 *   SW/Evans:  phiLambda+-, thetaSigma+-, thetaLambda+-, Ltp+- (theta-phi symmetry), S+- (r-theta symmetry)
 * l, m and kappa Ebar inside are frozen at the point of evaluation.
 */
inline ClassicalObservable observable(const SystemSpec& s, const std::string& name) {
  using namespace classical_detail;
  const SystemSpec sp = s;
  auto make = [&](std::function<cplx(const PhasePoint&, const Frozen&)> f) { return ClassicalObservable{name, std::move(f)}; };
  if (name == "H") return make([sp](const PhasePoint& x, const Frozen&) { return cplx(hamiltonian(sp, x)); });
  if (name == "L2") return make([sp](const PhasePoint& x, const Frozen&) { return cplx(L2(sp, x)); });
  if (name == "sqrtL2") return make([sp](const PhasePoint& x, const Frozen&) { return cplx(std::sqrt(L2(sp, x))); });
  if (name == "Lz2") return make([sp](const PhasePoint& x, const Frozen&) { return cplx(Lz2(sp, x)); });
  if (name == "sqrtLz2") return make([sp](const PhasePoint& x, const Frozen&) { return cplx(std::sqrt(Lz2(sp, x))); });
  if (name == "Lz") {
    if (!s.central()) throw CatalogError("Lz is not conserved for SW/Evans; use Lz2");
    return make([](const PhasePoint& x, const Frozen&) { return cplx(x.p_phi); });
  }
  if (name == "r") return make([](const PhasePoint& x, const Frozen&) { return cplx(x.r); });
  if (name == "p_r") return make([](const PhasePoint& x, const Frozen&) { return cplx(x.p_r); });
  if (name == "H_l")
    return make([sp](const PhasePoint& x, const Frozen& f) {
      const double S = kappa_sin(sp.curv, x.r);
      return cplx(x.p_r * x.p_r + f.ell * f.ell / (S * S) + radial_potential(sp, x.r));
    });
  if (name == "Hbar") {
    if (!s.oscillator() || s.kappa() == 0.0) throw CatalogError("Hbar needs an oscillator radial part and kappa != 0");
    return make([sp](const PhasePoint& x, const Frozen&) { return cplx(hamiltonian(sp, x) + 0.25 * sp.Omega2() / sp.kappa()); });
  }

  const double e = sgn_of(name);
  const std::string base = base_of(name);
  const bool kc_radial = !s.oscillator();

  if (base == "Sigma") {
    if (!s.central()) throw CatalogError("radial Sigma is catalogued for KC and HO");
    if (kc_radial) return make([sp, e](const PhasePoint& x, const Frozen& f) { return kc_sigma(sp, x, f.ell, e); });
    return make([sp, e](const PhasePoint& x, const Frozen& f) { return ho_sigma(sp, x, f.ell, e); });
  }
  if (base == "S") {
    if (s.kind == SystemKind::KC)
      return make([sp, e](const PhasePoint& x, const Frozen& f) { return kc_sigma(sp, x, f.ell, e) * polar_ladder(x, f.ell, -e); });
    if (s.kind == SystemKind::HO)
      return make([sp, e](const PhasePoint& x, const Frozen& f) {
        const cplx t = polar_ladder(x, f.ell, e);
        return ho_sigma(sp, x, f.ell, e) * t * t;
      });
    // SW/Evans: theta ladder of the Poschl-Teller polar problem times a two-unit radial shift
    return make([sp, e](const PhasePoint& x, const Frozen& f) {
      const cplx th = pt_ladder(x.theta, x.p_theta, L2(sp, x), f.m * f.m, K(sp.k3), f.ell, e);
      if (sp.oscillator()) return th * ho_sigma(sp, x, f.ell, e);
      const cplx k = kc_sigma(sp, x, f.ell, -e);
      return th * k * k;
    });
  }
  if (s.oscillator() && s.central()) {
    if (base == "a") return make([sp, e](const PhasePoint& x, const Frozen& f) { return ho_a(sp, x, f.ell, e); });
    if (base == "b") return make([sp, e](const PhasePoint& x, const Frozen& f) { return ho_b(sp, x, f.ell, e); });
    if (base == "Pi")
      return make([sp, e](const PhasePoint& x, const Frozen& f) { return ho_b(sp, x, f.ell, e) * ho_a(sp, x, f.ell, -e); });
  }
  if (s.oscillator()) {
    if (base == "Lambda" || base == "LambdaSq") {
      const bool sq = base == "LambdaSq";
      return make([sp, e, sq](const PhasePoint& x, const Frozen& f) { return ho_lambda(sp, x, f.ell, f.kappa_Ebar, e, sq); });
    }
    if (base == "c" || base == "d") {
      if (s.kappa() == 0.0) throw CatalogError("c/d factors need kappa != 0");
      const double os = base == "c" ? 1.0 : -1.0;
      return make([sp, e, os](const PhasePoint& x, const Frozen& f) { return ho_cd(sp, x, f.kappa_Ebar, e, os); });
    }
  }
  if (!s.central()) {
    if (base == "phiLambda")
      return make([sp, e](const PhasePoint& x, const Frozen& f) { return pt_ladder(x.phi, x.p_phi, Lz2(sp, x), K(sp.k2), K(sp.k1), f.m, e); });
    if (base == "thetaSigma")
      return make([sp, e](const PhasePoint& x, const Frozen& f) { return pt_shift(x.theta, x.p_theta, f.m, K(sp.k3), e); });
    if (base == "thetaLambda")
      return make([sp, e](const PhasePoint& x, const Frozen& f) {
        return pt_ladder(x.theta, x.p_theta, L2(sp, x), f.m * f.m, K(sp.k3), f.ell, e);
      });
    if (base == "Ltp")
      return make([sp, e](const PhasePoint& x, const Frozen& f) {
        return pt_ladder(x.phi, x.p_phi, Lz2(sp, x), K(sp.k2), K(sp.k1), f.m, e) * pt_shift(x.theta, x.p_theta, f.m, K(sp.k3), e);
      });
  }
  throw CatalogError("no observable '" + name + "' for " + to_string(s.kind));
}

// ---------------------------------------------------------------- brackets

struct BracketValue {
  cplx value;
  double error = 0;          // |D(h) - D(h/2)|, before extrapolation
  double gradient_scale = 0;  // |grad f| |grad g|
};

/**
 * {f, g} = sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i) by central differences at steps h and h/2,
 * Richardson-extrapolated. f and g are evaluated with the substitutions frozen at the base point.
 * StepError if the two step sizes disagree by more than 1e-4 relative.
 */
inline BracketValue poisson_bracket(const SystemSpec& s, const ClassicalObservable& f, const ClassicalObservable& g, const PhasePoint& x,
                                    double h = 1e-3) {
  if (!(h >= 1e-6 && h <= 1e-3)) throw ConfigError("bracket step must lie in [1e-6, 1e-3]");
  const Frozen fr = frozen_at(s, x);
  const auto base = x.to_array();
  auto grad = [&](const ClassicalObservable& o, double step) {
    std::array<cplx, 6> d;
    for (int i = 0; i < 6; ++i) {
      const double hi = step * std::max(1.0, std::abs(base[i]));
      auto a = base, b = base;
      a[i] += hi;
      b[i] -= hi;
      d[i] = (o.eval(PhasePoint::from_array(a), fr) - o.eval(PhasePoint::from_array(b), fr)) / (2.0 * hi);
    }
    return d;
  };
  auto bracket = [](const std::array<cplx, 6>& df, const std::array<cplx, 6>& dg) {
    cplx acc = 0.0;
    for (int k = 0; k < 3; ++k) acc += df[2 * k] * dg[2 * k + 1] - df[2 * k + 1] * dg[2 * k];
    return acc;
  };
  const auto df1 = grad(f, h), dg1 = grad(g, h), df2 = grad(f, 0.5 * h), dg2 = grad(g, 0.5 * h);
  const cplx b1 = bracket(df1, dg1), b2 = bracket(df2, dg2);
  double nf = 0.0, ng = 0.0;
  for (int i = 0; i < 6; ++i) {
    nf += std::norm(df2[i]);
    ng += std::norm(dg2[i]);
  }
  BracketValue out;
  out.value = (4.0 * b2 - b1) / 3.0;
  out.error = std::abs(b1 - b2);
  out.gradient_scale = std::sqrt(nf * ng);
  const double ref = std::max(std::abs(out.value), out.gradient_scale);
  if (!(out.error <= 1e-4 * ref)) throw StepError("bracket step sizes disagree for {" + f.label + ", " + g.label + "}");
  return out;
}

/** |{f,g} - expected| relative to max(|expected|, |grad f||grad g|). */
inline double bracket_residual(const BracketValue& b, cplx expected) {
  return std::abs(b.value - expected) / std::max(std::abs(expected), b.gradient_scale);
}

// ---------------------------------------------------------------- conservation

/** Complex series as modulus and unwrapped phase. */
struct PolarSeries {
  std::vector<double> modulus;
  std::vector<double> phase;
};

inline PolarSeries polar_series(const SystemSpec& s, const ClassicalObservable& o, const Trajectory& tr) {
  PolarSeries p;
  double prev = 0.0, offset = 0.0;
  for (size_t i = 0; i < tr.x.size(); ++i) {
    const cplx v = o(s, tr.x[i]);
    double a = std::arg(v);
    if (i > 0) {
      while (a + offset - prev > std::numbers::pi) offset -= 2.0 * std::numbers::pi;
      while (a + offset - prev < -std::numbers::pi) offset += 2.0 * std::numbers::pi;
    }
    p.modulus.push_back(std::abs(v));
    p.phase.push_back(a + offset);
    prev = a + offset;
  }
  return p;
}

struct DriftReport {
  std::string label;
  double drift = 0;        // max |o(t) - o(0)| / |o(0)|
  double modulus_drift = 0;
  double phase_drift = 0;  // max |arg o(t) - arg o(0)| (unwrapped)
};

inline DriftReport conservation_check(const SystemSpec& s, const ClassicalObservable& o, const Trajectory& tr) {
  DriftReport d;
  d.label = o.label;
  const cplx v0 = o(s, tr.x.front());
  const PolarSeries p = polar_series(s, o, tr);
  for (size_t i = 0; i < tr.x.size(); ++i) {
    const cplx v = o(s, tr.x[i]);
    d.drift = std::max(d.drift, std::abs(v - v0) / std::max(std::abs(v0), 1e-300));
    d.modulus_drift = std::max(d.modulus_drift, std::abs(p.modulus[i] - p.modulus[0]) / std::max(p.modulus[0], 1e-300));
    d.phase_drift = std::max(d.phase_drift, std::abs(p.phase[i] - p.phase[0]));
  }
  return d;
}

/** Least-squares slope of the unwrapped phase against time. */
inline double phase_rate(const SystemSpec& s, const ClassicalObservable& o, const Trajectory& tr) {
  const PolarSeries p = polar_series(s, o, tr);
  const size_t n = tr.t.size();
  double mt = 0, mp = 0;
  for (size_t i = 0; i < n; ++i) {
    mt += tr.t[i];
    mp += p.phase[i];
  }
  mt /= n;
  mp /= n;
  double num = 0, den = 0;
  for (size_t i = 0; i < n; ++i) {
    num += (tr.t[i] - mt) * (p.phase[i] - mp);
    den += (tr.t[i] - mt) * (tr.t[i] - mt);
  }
  return num / den;
}

// ---------------------------------------------------------------- sampling

/**
 * Random phase point in the admissible region: r in (0.1, 0.9) of min(r_max, 5),
 * theta away from the poles (inside the octant for SW/Evans), momenta in (-1, 1).
 */
inline PhasePoint random_phase_point(const SystemSpec& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rmax = s.kappa() > 0 ? s.radial_domain().hi : 5.0;
  auto lerp = [&](double a, double b) { return a + (b - a) * u(rng); };
  PhasePoint x;
  x.r = lerp(0.1, 0.9) * std::min(rmax, 5.0);
  x.p_r = lerp(-1.0, 1.0);
  if (s.central()) {
    x.theta = lerp(0.3, std::numbers::pi - 0.3);
    x.phi = lerp(0.0, 2.0 * std::numbers::pi);
  } else {
    x.theta = lerp(0.2, 0.5 * std::numbers::pi - 0.2);
    x.phi = lerp(0.2, 0.5 * std::numbers::pi - 0.2);
  }
  x.p_theta = lerp(-1.0, 1.0);
  x.p_phi = lerp(-1.0, 1.0);
  return x;
}

struct LadderSelection {
  LadderVariant variant = LadderVariant::plain;
  double plain_residual = 0;
  double squared_residual = 0;
  int points = 0;  // points with kappa Ebar >= 0
};

/**
 * Worst residual of {H, Lambda+-} = +-4i sqrt(kappa Ebar) Lambda+- for both readings of the
 * double-argument functions; the smaller one wins. Needs an oscillator radial part and kappa != 0.
 */
inline LadderSelection select_ladder_variant(const SystemSpec& s, std::mt19937_64& rng, int n_points = 100) {
  if (!s.oscillator() || s.kappa() == 0.0) throw CatalogError("ladder variant selection needs an oscillator radial part and kappa != 0");
  LadderSelection sel;
  const ClassicalObservable H = observable(s, "H");
  int tries = 0;
  while (sel.points < n_points) {
    if (++tries > 100 * n_points) throw ConvergenceError("too few points with kappa Ebar >= 0");
    const PhasePoint x = random_phase_point(s, rng);
    const Frozen f = frozen_at(s, x);
    if (f.kappa_Ebar < 0) continue;
    ++sel.points;
    for (double e : {1.0, -1.0}) {
      const std::string sg = e > 0 ? "+" : "-";
      for (bool sq : {false, true}) {
        const ClassicalObservable L = observable(s, (sq ? "LambdaSq" : "Lambda") + sg);
        const cplx expected = e * 4.0 * cplx(0.0, 1.0) * std::sqrt(f.kappa_Ebar) * L.eval(x, f);
        double res;
        try {
          res = bracket_residual(poisson_bracket(s, H, L, x), expected);
        } catch (const StepError&) {
          res = std::numeric_limits<double>::infinity();
        }
        double& slot = sq ? sel.squared_residual : sel.plain_residual;
        slot = std::max(slot, res);
      }
    }
  }
  sel.variant = sel.plain_residual <= sel.squared_residual ? LadderVariant::plain : LadderVariant::squared;
  return sel;
}

}  // namespace curvsym
