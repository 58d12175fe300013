#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "curvsym/checks.hpp"
#include "curvsym/classical.hpp"
#include "curvsym/factorizations.hpp"
#include "curvsym/oracle.hpp"
#include "curvsym/report.hpp"
#include "curvsym/spectra.hpp"
#include "curvsym/symmetries.hpp"

namespace curvsym {

/** Everything a verification run depends on. */
struct VerifyConfig {
  SystemKind kind = SystemKind::KC;
  std::vector<double> kappas{-0.1, 0.0, 0.1};
  double q = 2.0;
  double omega = 2.0;
  double k1 = 0.3, k2 = 0.4, k3 = 0.6;
  int grid_n = 128;
  double r_cut = 0.0;  // 0 selects a per-suite cutoff
  double tol = 1e-8;
  std::uint64_t seed = 1;
  double t_end = 100.0;

  void validate() const {
    if (kappas.empty()) throw ConfigError("kappa list is empty");
    if (!(tol > 0)) throw ConfigError("tolerance must be positive");
    if (grid_n < 16) throw ConfigError("grid needs at least 16 nodes");
    if (r_cut < 0 || !std::isfinite(r_cut)) throw ConfigError("r_cut must be positive");
    if (!(t_end > 0)) throw ConfigError("t_end must be positive");
  }
};

/** System of the configured kind at one curvature; r_cut used when kappa <= 0. */
inline SystemSpec system_for(const VerifyConfig& c, double kappa, double r_cut) {
  switch (c.kind) {
    case SystemKind::KC: return SystemSpec::kc(kappa, c.q, r_cut);
    case SystemKind::HO: return SystemSpec::ho(kappa, c.omega, r_cut);
    case SystemKind::SW: return SystemSpec::sw(kappa, c.omega, c.k1, c.k2, c.k3, r_cut);
    case SystemKind::Evans: return SystemSpec::evans(kappa, c.q, c.k1, c.k2, c.k3, r_cut);
  }
  throw ConfigError("unknown system");
}

/** Per-suite cutoff unless the configuration overrides it. */
inline double cutoff_or(const VerifyConfig& c, double fallback) { return c.r_cut > 0 ? c.r_cut : fallback; }

inline std::string kappa_tag(double k) { return "[kappa=" + fmt_param(k) + "]"; }

namespace verify_detail {

inline GridPtr grid_on(const SystemSpec& s, Coordinate c, double hi_cap, int n) {
  const Interval d = c == Coordinate::r ? s.radial_domain() : c == Coordinate::theta ? s.theta_domain() : s.phi_domain();
  return make_grid_on(c, s.curv, d.lo, std::min(d.hi, hi_cap), n);
}

inline double overlap(const GridPtr& g, const Function1D& a, const Function1D& b) {
  const GridFunction A = sample(g, a), B = sample(g, b);
  return std::abs(inner(A, B)) / (l2_norm(A) * l2_norm(B));
}

inline double dense_overlap(const ProductState& a, const ProductState& b, const TensorGrid& g) {
  const DenseField x = to_dense(a, g), y = to_dense(b, g);
  return std::abs(inner(x, y)) / (x.norm() * y.norm());
}

/** Worst coefficient difference of two operators over the grid nodes. */
inline double coefficient_gap(const DiffOp& a, const DiffOp& b, const GridPtr& g) {
  double worst = 0;
  for (int j = 0; j <= std::max(a.order(), b.order()); ++j)
    for (double x : g->nodes) worst = std::max(worst, std::abs(a.coefficient(j, x) - b.coefficient(j, x)));
  return worst;
}

}  // namespace verify_detail

// ---------------------------------------------------------------- kappa trig

/**
 * max |C^2 + kappa S^2 - 1| on 64-node grids over (0, r_max) for kappa > 0 and
 * over sqrt(-kappa) r < 3 (or r < 3 at kappa = 0) otherwise.
 */
inline VerificationReport trig_suite(const std::vector<double>& kappas, int n = 64) {
  VerificationReport rep;
  rep.title = "kappa trigonometry";
  for (double k : kappas) {
    const double hi = k > 0 ? std::numbers::pi / std::sqrt(k) : k < 0 ? 3.0 / std::sqrt(-k) : 3.0;
    const Curvature cv = k > 0 ? Curvature::make(k) : Curvature::make(k, hi);
    const GridPtr g = make_grid_on(Coordinate::r, cv, 0.0, hi, n);
    double worst = 0;
    for (double r : g->nodes) {
      const KappaTrigValue v = eval_trig(cv, r);
      worst = std::max(worst, std::abs(v.c * v.c + k * v.s * v.s - 1.0));
    }
    rep.add("C^2 + kappa S^2 = 1 " + kappa_tag(k), "C_k^2 + k S_k^2 = 1", worst, 1e-12);
  }
  return rep;
}

// ---------------------------------------------------------------- Kepler-Coulomb

/** Factorizations, intertwinings and highest-weight annihilation of the radial KC problem. */
inline VerificationReport kc_operator_suite(const SystemSpec& s, int grid_n, double tol, int ell_max = 4) {
  VerificationReport rep;
  rep.title = "KC operators";
  const std::string kt = kappa_tag(s.kappa());
  const SystemSpec si = s.with_cutoff(30.0);
  const GridPtr g = verify_detail::grid_on(si, Coordinate::r, 30.0, grid_n);
  const auto fns = test_functions({0.0, g->hi});
  const double k = s.kappa(), q = s.q;
  for (int l = 0; l <= ell_max; ++l) {
    const std::string lt = "(l=" + std::to_string(l) + ")" + kt;
    const auto H = map_of(radial_hamiltonian(si, l));
    const auto mp = plus_constant(then(map_of(kc_sigma(si, l + 1, Sign::minus)), map_of(kc_sigma(si, l + 1, Sign::plus))),
                                  -q * q / (4.0 * (l + 1) * (l + 1)) + k * l * (l + 2.0));
    rep.add("H_l = Sigma-_{l+1} Sigma+_{l+1} + const" + lt, "H_l = Sigma-_{l+1} Sigma+_{l+1} - q^2/4(l+1)^2 + kappa l(l+2)",
            identity_residual(g, H, mp, fns), tol);
    const auto up = kc_sigma(si, l + 1, Sign::plus);
    rep.add("Sigma+_{l+1} H_l = H_{l+1} Sigma+_{l+1}" + lt, "Sigma+ raises l by one at fixed energy",
            identity_residual(g, then(map_of(up), H), then(map_of(radial_hamiltonian(si, l + 1)), map_of(up)), fns), tol);
    if (l == 0) continue;
    const auto pm = plus_constant(then(map_of(kc_sigma(si, l, Sign::plus)), map_of(kc_sigma(si, l, Sign::minus))),
                                  -q * q / (4.0 * l * l) + k * (l * l - 1.0));
    rep.add("H_l = Sigma+_l Sigma-_l + const" + lt, "H_l = Sigma+_l Sigma-_l - q^2/4l^2 + kappa(l^2 - 1)", identity_residual(g, H, pm, fns), tol);
    const auto dn = kc_sigma(si, l, Sign::minus);
    rep.add("Sigma-_l H_l = H_{l-1} Sigma-_l" + lt, "Sigma- lowers l by one at fixed energy",
            identity_residual(g, then(map_of(dn), H), then(map_of(radial_hamiltonian(si, l - 1)), map_of(dn)), fns), tol);
  }
  const SystemSpec sh = s.with_cutoff(60.0);
  const GridPtr gh = verify_detail::grid_on(sh, Coordinate::r, 1e9, grid_n);
  for (int n = 0; n <= ell_max; ++n) {
    if (!kc_admissible(sh, n)) continue;
    const std::string nt = "(n=" + std::to_string(n) + ")" + kt;
    const Function1D R = highest_weight_radial(sh, n);
    rep.add("Sigma+_{n+1} R_n = 0" + nt, "highest-weight radial state is annihilated by Sigma+",
            annihilation_residual(gh, map_of(kc_sigma(sh, n + 1, Sign::plus)), R), tol);
    rep.add("H_n R_n = E_n R_n" + nt, "E_n = kappa n(n+2) - q^2/4(n+1)^2",
            eigen_residual(gh, map_of(radial_hamiltonian(sh, n)), R, kc_energy(sh, n)), tol);
  }
  return rep;
}

/** Oracle levels against E_n for n <= n_max; inadmissible levels must not converge. */
inline VerificationReport kc_spectrum_suite(const SystemSpec& s, int n_max = 5, double tol = 1e-6) {
  VerificationReport rep;
  rep.title = "KC spectrum";
  const std::string kt = kappa_tag(s.kappa());
  const SystemSpec so = s.with_cutoff(200.0);
  for (int ell = 0; ell <= n_max; ++ell) {
    const auto lv = radial_levels(so, ell, n_max - ell + 1);
    for (int n = ell; n <= n_max; ++n) {
      const std::string id = "E(n=" + std::to_string(n) + ",l=" + std::to_string(ell) + ")" + kt;
      const OracleLevel& L = lv[n - ell];
      if (!kc_admissible(so, n)) {
        rep.add_outcome("oracle finds no bound level " + id, "no normalizable state beyond the admissible range", L.tail_mass,
                        kOracleTailTolerance, !L.converged);
        continue;
      }
      rep.add("oracle " + id, "E_n = kappa n(n+2) - q^2/4(n+1)^2", L.converged ? std::abs(L.energy - kc_energy(so, n)) : NAN, tol);
    }
  }
  return rep;
}

/** Shift actions on the oracle eigenfunctions: (Sigma-)^k of the l = n state spans the level n states. */
inline VerificationReport kc_oracle_overlap_suite(const SystemSpec& s, int n = 3) {
  VerificationReport rep;
  rep.title = "KC shift actions";
  const std::string kt = kappa_tag(s.kappa());
  const SystemSpec so = s.with_cutoff(200.0);
  if (!kc_admissible(so, n)) return rep;
  const GridPtr g = verify_detail::grid_on(so, Coordinate::r, 1e9, 400);
  Function1D R = highest_weight_radial(so, n);
  for (int ell = n; ell >= 0; --ell) {
    const auto lv = radial_levels(so, ell, n - ell + 1);
    rep.add("overlap (Sigma-)^" + std::to_string(n - ell) + " R_n with oracle (n=" + std::to_string(n) + ",l=" + std::to_string(ell) + ")" + kt,
            "Sigma- maps (n, l) to (n, l-1)", std::abs(1.0 - verify_detail::overlap(g, R, lv[n - ell].vector)), 1e-6);
    if (ell > 0) R = apply(kc_sigma(so, ell, Sign::minus), R);
  }
  return rep;
}

/**
 * kappa < 0: the inequality 2(n+1)^2 sqrt(-kappa) < q against the numerical normalizability
 * of the highest-weight radial state (outer-5% mass below 1e-10 on (0, 400)).
 */
inline VerificationReport kc_admissibility_suite(const SystemSpec& s, int n_max = 5) {
  VerificationReport rep;
  rep.title = "KC admissibility";
  if (s.kappa() >= 0) return rep;
  const std::string kt = kappa_tag(s.kappa());
  const SystemSpec sn = s.with_cutoff(400.0);
  for (int n = 0; n <= n_max; ++n) {
    const bool ineq = kc_admissible(sn, n);
    const double tail = radial_tail_fraction(sn, highest_weight_radial(sn, n));
    const bool normalizable = tail < kTailTolerance;
    rep.add_outcome("admissibility agrees with normalizability (n=" + std::to_string(n) + ", admissible=" + (ineq ? "yes" : "no") + ")" + kt,
                    "2(n+1)^2 sqrt(-kappa) < q", tail, kTailTolerance, ineq == normalizable);
  }
  return rep;
}

// ---------------------------------------------------------------- oscillator

/** a, b factorizations, parameter shifts with energy offsets, Sigma, N and ladder relations. */
inline VerificationReport ho_operator_suite(const SystemSpec& s, int grid_n, double tol, int ell_max = 4) {
  VerificationReport rep;
  rep.title = "HO operators";
  const std::string kt = kappa_tag(s.kappa());
  const SystemSpec si = s.with_cutoff(6.0);
  const GridPtr g = verify_detail::grid_on(si, Coordinate::r, 6.0, grid_n);
  const auto fns = test_functions({0.0, g->hi});
  const double k = s.kappa(), w = s.omega;
  auto H = [&](double l, double ww) { return map_of(radial_hamiltonian(si, l, ww)); };
  for (int l = 0; l <= ell_max; ++l) {
    const std::string lt = "(l=" + std::to_string(l) + ")" + kt;
    for (double ww : {w, w + 2 * k}) {
      const std::string wt = "(l=" + std::to_string(l) + ",w=" + fmt_param(ww) + ")" + kt;
      const auto aa = plus_constant(then(map_of(ho_ab(si, l, ww, HOFactor::a, Sign::plus)), map_of(ho_ab(si, l, ww, HOFactor::a, Sign::minus))),
                                    ho_a_constant(si, l, ww));
      rep.add("H = a+ a- + const" + wt, "H_{l,w} = a+ a- + kappa(l(l-1) - 1/2) - w(l - 1/2)", identity_residual(g, H(l, ww), aa, fns), tol);
      const double w2 = ww + 2 * k;
      const auto bb = plus_constant(
          then(map_of(ho_ab(si, l + 1, w2, HOFactor::b, Sign::minus)), map_of(ho_ab(si, l + 1, w2, HOFactor::b, Sign::plus))),
          ho_b_constant(si, l, ww));
      rep.add("H = b- b+ + const" + wt, "H_{l,w} = b- b+ + kappa(l(l+3) + 3/2) + w(l + 3/2)", identity_residual(g, H(l, ww), bb, fns), tol);
    }
    const auto ap = ho_ab(si, l + 1, w - 2 * k, HOFactor::a, Sign::plus);
    rep.add("a+ H_{l,w} = (H_{l+1,w-2k} + k - w) a+" + lt, "a+ shifts (l, w) to (l+1, w-2kappa) with offset kappa - w",
            identity_residual(g, then(map_of(ap), H(l, w)), then(plus_constant(H(l + 1, w - 2 * k), k - w), map_of(ap)), fns), tol);
    const auto bp = ho_ab(si, l + 1, w + 2 * k, HOFactor::b, Sign::plus);
    rep.add("b+ H_{l,w} = (H_{l+1,w+2k} + k + w) b+" + lt, "b+ shifts (l, w) to (l+1, w+2kappa) with offset kappa + w",
            identity_residual(g, then(map_of(bp), H(l, w)), then(plus_constant(H(l + 1, w + 2 * k), k + w), map_of(bp)), fns), tol);
    const auto up = map_of(ho_shift(si, l, Sign::plus));
    rep.add("Sigma+_l H_l = H_{l+2} Sigma+_l" + lt, "Sigma+ raises l by two at fixed energy",
            identity_residual(g, then(up, H(l, w)), then(H(l + 2, w), up), fns), tol);
    if (l >= 1) {
      const auto am = ho_ab(si, l, w, HOFactor::a, Sign::minus);
      rep.add("a- H_{l,w} = (H_{l-1,w+2k} + k + w) a-" + lt, "a- shifts (l, w) to (l-1, w+2kappa) with offset kappa + w",
              identity_residual(g, then(map_of(am), H(l, w)), then(plus_constant(H(l - 1, w + 2 * k), k + w), map_of(am)), fns), tol);
      const auto bm = ho_ab(si, l, w, HOFactor::b, Sign::minus);
      rep.add("b- H_{l,w} = (H_{l-1,w-2k} + k - w) b-" + lt, "b- shifts (l, w) to (l-1, w-2kappa) with offset kappa - w",
              identity_residual(g, then(map_of(bm), H(l, w)), then(plus_constant(H(l - 1, w - 2 * k), k - w), map_of(bm)), fns), tol);
    }
    if (l >= 2) {
      const auto dn = map_of(ho_shift(si, l, Sign::minus));
      rep.add("Sigma-_l H_l = H_{l-2} Sigma-_l" + lt, "Sigma- lowers l by two at fixed energy",
              identity_residual(g, then(dn, H(l, w)), then(H(l - 2, w), dn), fns), tol);
    }
  }
  if (k != 0.0) {
    for (int n : {0, 3}) {
      const double eps = ho_epsilon(si, n);
      for (double ww : {w, w - 2 * k}) {
        const std::string et = "(eps=" + fmt_param(eps) + ",w=" + fmt_param(ww) + ")" + kt;
        const auto N = map_of(ho_n_operator(si, eps, ww));
        const auto cc = plus_constant(then(map_of(ho_cd(si, eps, ww, HOEnergyFactor::c, Sign::plus)),
                                           map_of(ho_cd(si, eps, ww, HOEnergyFactor::c, Sign::minus))),
                                      (k * k - (eps + ww) * (eps + ww)) / 4);
        const auto dd = plus_constant(then(map_of(ho_cd(si, eps, ww, HOEnergyFactor::d, Sign::plus)),
                                           map_of(ho_cd(si, eps, ww, HOEnergyFactor::d, Sign::minus))),
                                      (k * k - (eps - ww) * (eps - ww)) / 4);
        rep.add("N = c+ c- + const" + et, "N = c+ c- + (kappa^2 - (eps + w)^2)/4", identity_residual(g, N, cc, fns), tol);
        rep.add("N = d+ d- + const" + et, "N = d+ d- + (kappa^2 - (eps - w)^2)/4", identity_residual(g, N, dd, fns), tol);
      }
    }
  }
  const SystemSpec sh = s.with_cutoff(8.0);
  const GridPtr gh = verify_detail::grid_on(sh, Coordinate::r, 8.0, grid_n);
  for (int l = 0; l <= std::min(ell_max, 3); ++l) {
    if (!ho_admissible(sh, l)) continue;
    const std::string lt = "(l=" + std::to_string(l) + ")" + kt;
    const Function1D R = highest_weight_radial(sh, l);
    rep.add("H_l R_l = E_l R_l" + lt, "lowest state at fixed l has n = l", eigen_residual(gh, map_of(radial_hamiltonian(sh, l)), R, ho_energy(sh, l)), tol);
    rep.add("Lambda-_l R_l = 0" + lt, "lowest state is annihilated by the energy ladder", annihilation_residual(gh, map_of(ho_ladder(sh, l, Sign::minus)), R), tol);
    if (k != 0.0)
      rep.add("N R_l = -kappa^2 l(l+1) R_l" + lt, "N has eigenvalue -kappa^2 l(l+1)",
              eigen_residual(gh, map_of(ho_n_operator(sh, ho_epsilon(sh, l), sh.omega)), R, -k * k * l * (l + 1.0)), tol);
    if (!ho_admissible(sh, l + 2)) continue;
    const Function1D upR = apply(ho_ladder(sh, l, Sign::plus), R);
    rep.add("H_l Lambda+ R = E_{l+2} Lambda+ R" + lt, "Lambda+ raises n by two at fixed l",
            eigen_residual(gh, map_of(radial_hamiltonian(sh, l)), upR, ho_energy(sh, l + 2)), tol);
  }
  return rep;
}

/** Oracle against the shifted-parameter energy and the short form; records the constant deviation. */
inline VerificationReport ho_spectrum_suite(const SystemSpec& s, int n_max = 5, double tol = 1e-6) {
  VerificationReport rep;
  rep.title = "HO spectrum";
  const std::string kt = kappa_tag(s.kappa());
  const SystemSpec so = s.with_cutoff(20.0);
  double worst_dev = 0, min_dev = INFINITY, max_dev = -INFINITY;
  for (int ell = 0; ell <= n_max; ++ell) {
    const int count = (n_max - ell) / 2 + 1;
    const auto lv = radial_levels(so, ell, count);
    for (int i = 0; i < count; ++i) {
      const int n = ell + 2 * i;
      if (!ho_admissible(so, n)) continue;
      const std::string id = "(n=" + std::to_string(n) + ",l=" + std::to_string(ell) + ")" + kt;
      const double E = lv[i].converged ? lv[i].energy : NAN;
      rep.add("oracle E" + id, "Ebar_n - (w^2 - kappa^2)/4kappa = kappa(n(n+3) + 3/2) + w(n + 3/2)", std::abs(E - ho_energy(so, n)), tol);
      const double dev = E - ho_energy_short_form(so, n);
      worst_dev = std::max(worst_dev, std::abs(dev - 1.5 * so.kappa()));
      min_dev = std::min(min_dev, dev);
      max_dev = std::max(max_dev, dev);
    }
  }
  rep.add("short form kappa n(n+3) + w(n+3/2) deviates by 3 kappa/2" + kt, "oracle - [kappa n(n+3) + w(n + 3/2)] = 3 kappa/2", worst_dev, tol);
  if (so.kappa() != 0.0) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "HO %s: the short form kappa n(n+3) + w(n+3/2) misses the constant 3 kappa/2 = %.6g; oracle deviation in [%.9g, %.9g]",
                  kt.c_str(), 1.5 * so.kappa(), min_dev, max_dev);
    rep.findings.push_back(buf);
  }
  return rep;
}

/** Ladder and shift actions on oracle eigenfunctions, plus the odd/even basis at levels n <= 3. */
inline VerificationReport ho_state_suite(const SystemSpec& s) {
  VerificationReport rep;
  rep.title = "HO states";
  const std::string kt = kappa_tag(s.kappa());
  const SystemSpec so = s.with_cutoff(20.0);
  const GridPtr g = verify_detail::grid_on(so, Coordinate::r, 12.0, 400);
  for (int ell : {0, 1}) {
    const auto lv = radial_levels(so, ell, 3);
    Function1D R = highest_weight_radial(so, ell);
    for (int i = 0; i < 3 && ho_admissible(so, ell + 2 * i); ++i) {
      if (i > 0) R = apply(ho_ladder(so, ell + 2 * (i - 1), Sign::plus), R);
      rep.add("overlap (Lambda+)^" + std::to_string(i) + " R_l with oracle (l=" + std::to_string(ell) + ")" + kt,
              "Lambda+ maps n to n+2 at fixed l", 1.0 - verify_detail::overlap(g, R, lv[i].vector), 1e-6);
    }
  }
  if (ho_admissible(so, 3)) {
    const auto lv1 = radial_levels(so, 1, 2);
    const Function1D down = apply(ho_shift(so, 3, Sign::minus), highest_weight_radial(so, 3));
    rep.add("overlap Sigma- R_3 with oracle (n=3,l=1)" + kt, "Sigma- maps (n, l) to (n, l-2)", 1.0 - verify_detail::overlap(g, down, lv1[1].vector), 1e-6);
  }
  const SystemSpec sb = s.with_cutoff(10.0);
  const TensorGrid tg = make_tensor_grid(sb, 64, 32, 32);
  for (int n = 0; n <= 3 && ho_admissible(sb, n); ++n) {
    const auto basis = build_basis(sb, n, tg);
    double worst = 0;
    for (const auto& b : basis) worst = std::max(worst, full_eigen_residual(sb, b.psi, ho_energy(sb, n), tg));
    rep.add("basis at n=" + std::to_string(n) + " (" + std::to_string(basis.size()) + " states) solves H psi = E psi" + kt,
            "odd/even seeds raised by Lambda+, S+ and L+-", worst, 1e-7);
    rep.add_outcome("basis size at n=" + std::to_string(n) + kt, "(n+1)(n+2)/2 states", std::abs(double(basis.size()) - degeneracy(sb, n)), 0.0,
                    int(basis.size()) == degeneracy(sb, n));
  }
  return rep;
}

// ---------------------------------------------------------------- SW / Evans

/** Angular spectra against the oracle, annihilation statements and full-state eigen residuals. */
inline VerificationReport superintegrable_suite(const SystemSpec& s, double tol, int pq_max = 2) {
  VerificationReport rep;
  rep.title = to_string(s.kind) + " quantum";
  const std::string kt = kappa_tag(s.kappa());
  const auto phi = eigensolve(liouville_transform_phi(s), pq_max + 1);
  for (int p = 0; p <= pq_max; ++p) {
    const double m = s.k1 + s.k2 + 2.0 * p;
    rep.add("phi oracle m^2 (p=" + std::to_string(p) + ")" + kt, "m = k1 + k2 + 2p", std::abs(phi.values[p] - m * m), 1e-6);
    const auto th = eigensolve(liouville_transform_theta(s, m), pq_max + 1);
    for (int g = 0; g <= pq_max; ++g) {
      const double ell = m + s.k3 + 2.0 * g;
      rep.add("theta oracle l(l+1) (p=" + std::to_string(p) + ",g=" + std::to_string(g) + ")" + kt, "l = m + k3 + 2g",
              std::abs(th.values[g] - ell * (ell + 1.0)), 1e-6);
    }
  }
  const SystemSpec sh = s.with_cutoff(s.oscillator() ? 10.0 : 60.0);
  const double nmin = s.k1 + s.k2 + s.k3;
  if (system_admissible(sh, nmin)) {
    const ProductState psi = highest_weight(sh, nmin);
    const TensorGrid ag = make_tensor_grid(sh, 48, 48, 48);
    const double m = s.k1 + s.k2, l = m + s.k3;
    rep.add("phiLambda-_m annihilates the lowest phi factor" + kt, "cos^k1 sin^k2 is annihilated by phiLambda-",
            annihilation_residual(ag.phi, map_of(sw_phi_ladder(sh, m, Sign::minus)), psi.azimuthal), tol);
    rep.add("thetaLambda-_l annihilates the lowest theta factor" + kt, "sin^m cos^k3 is annihilated by thetaLambda-",
            annihilation_residual(ag.theta, map_of(sw_theta_ladder(sh, l, m, Sign::minus)), psi.polar), tol);
    rep.add("thetaSigma+_m annihilates the lowest theta factor" + kt, "sin^m cos^k3 is annihilated by thetaSigma+",
            annihilation_residual(ag.theta, map_of(sw_theta_shift(sh, m, Sign::plus)), psi.polar), tol);
    if (s.oscillator())
      rep.add("radial Lambda- annihilates the lowest radial factor" + kt, "C^((k+w)/2k) S^l is annihilated by Lambda-",
              annihilation_residual(ag.r, map_of(ho_ladder(sh, l, Sign::minus)), psi.radial), tol);
    else
      rep.add("radial Sigma+_{l+1} annihilates the lowest radial factor" + kt, "e^(-q r/2(l+1)) S^l is annihilated by Sigma+",
              annihilation_residual(ag.r, map_of(kc_sigma(sh, l + 1, Sign::plus)), psi.radial), tol);
    const TensorGrid fg = make_tensor_grid(sh, 64, 32, 32);
    rep.add("highest-weight state solves H psi = E psi" + kt, "E at n = k1 + k2 + k3",
            full_eigen_residual(sh, psi, system_energy(sh, nmin), fg), 1e-7);
    const TensorGrid bg = make_tensor_grid(sh, 64, 48, 48);
    for (auto [p, g, h] : {std::tuple{1, 0, 0}, {0, 1, 0}, {1, 1, 2}}) {
      const QuantumNumbers q = shifted_quantum_numbers(sh, p, g, h);
      if (!system_admissible(sh, q.n)) continue;
      rep.add("ladder-built state " + to_string(q) + " solves H psi = E psi" + kt, "(p, g, h) raised from the lowest state",
              full_eigen_residual(sh, build_superintegrable_state(sh, p, g, h), system_energy(sh, q.n), bg), 1e-7);
    }
  }
  return rep;
}

// ---------------------------------------------------------------- classical

namespace verify_detail {

using Expectation = std::function<cplx(const PhasePoint&, const Frozen&, cplx)>;

/** Worst bracket residual over n random points (kappa Ebar >= 0 when needs_ebar). */
inline double worst_bracket(const SystemSpec& s, const std::string& f, const std::string& g, const Expectation& expected, std::uint64_t seed,
                            int n, bool needs_ebar, int* used_out = nullptr) {
  std::mt19937_64 rng(seed);
  const ClassicalObservable of = observable(s, f), og = observable(s, g);
  double worst = 0;
  int used = 0;
  for (int tries = 0; used < n && tries < 50 * n; ++tries) {
    const PhasePoint x = random_phase_point(s, rng);
    const Frozen fr = frozen_at(s, x);
    if (needs_ebar && fr.kappa_Ebar < 0) continue;
    ++used;
    try {
      worst = std::max(worst, bracket_residual(poisson_bracket(s, of, og, x), expected(x, fr, og.eval(x, fr))));
    } catch (const StepError&) {
      worst = INFINITY;
    }
  }
  if (used_out) *used_out = used;
  return used < n ? NAN : worst;
}

inline PhasePoint flow_start(const SystemSpec& s) {
  if (s.kind == SystemKind::KC) return {1.0, 0.3, 1.2, 0.4, 0.2, 0.7};
  if (s.kind == SystemKind::HO) return {0.9, 0.4, 1.1, 0.3, 0.5, 0.6};
  if (s.kind == SystemKind::SW) return {1.0, 0.2, 0.8, 0.3, 0.7, 0.4};
  return {2.0, 0.2, 0.8, 0.3, 0.7, 0.4};
}

}  // namespace verify_detail

inline constexpr double kBracketTolerance = 1e-5;
inline constexpr int kBracketPoints = 100;

/** Bracket relations at random points, conservation along a flow, and the energy-ladder phase rate. */
inline VerificationReport classical_suite(const SystemSpec& s, std::uint64_t seed, double t_end = 100.0) {
  using verify_detail::Expectation;
  VerificationReport rep;
  rep.title = to_string(s.kind) + " classical";
  const std::string kt = kappa_tag(s.kappa());
  const cplx I(0.0, 1.0);
  std::uint64_t salt = 0;
  auto bracket = [&](const std::string& f, const std::string& g, const Expectation& e, const std::string& anchor, bool needs_ebar = false) {
    int used = 0;
    const double w = verify_detail::worst_bracket(s, f, g, e, seed + 1000 * (++salt), kBracketPoints, needs_ebar, &used);
    if (needs_ebar && used < kBracketPoints) {
      rep.findings.push_back("{" + f + ", " + g + "} " + kt + ": not applicable, kappa Ebar < 0 at most sampled points");
      return;
    }
    rep.add("{" + f + ", " + g + "}" + kt, anchor, w, kBracketTolerance);
  };
  const Expectation zero = [](const PhasePoint&, const Frozen&, cplx) { return cplx(0.0); };
  auto times = [](cplx c) { return Expectation([c](const PhasePoint&, const Frozen&, cplx g) { return c * g; }); };
  auto sg = [](double e) { return std::string(e > 0 ? "+" : "-"); };

  bracket("r", "p_r", [](const PhasePoint&, const Frozen&, cplx) { return cplx(1.0); }, "{r, p_r} = 1");
  bracket("H", "L2", zero, "{H, L^2} = 0");
  if (s.central()) {
    bracket("H", "Lz", zero, "{H, L_z} = 0");
    bracket("L2", "Lz", zero, "{L^2, L_z} = 0");
  } else {
    bracket("H", "Lz2", zero, "{H, L_z^2} = 0");
    bracket("L2", "Lz2", zero, "{L^2, L_z^2} = 0");
  }
  const Curvature cv = s.curv;
  for (double e : {1.0, -1.0}) {
    const std::string g = sg(e);
    if (s.kind == SystemKind::KC) {
      bracket("H_l", "Sigma" + g,
              [cv, e, I](const PhasePoint& x, const Frozen& f, cplx v) {
                const double S = kappa_sin(cv, x.r);
                return e * I * 2.0 * f.ell / (S * S) * v;
              },
              "{H_l, Sigma+-} = +-i (2l/S^2) Sigma+-");
      bracket("H", "S" + g, zero, "{H, S+-} = 0");
      bracket("sqrtL2", "S" + g, times(-e * I), "{sqrt(L^2), S+-} = -+i S+-");
    } else if (s.kind == SystemKind::HO) {
      bracket("H_l", "Sigma" + g,
              [cv, e, I](const PhasePoint& x, const Frozen& f, cplx v) {
                const double S = kappa_sin(cv, x.r);
                return -e * I * 4.0 * f.ell / (S * S) * v;
              },
              "{H_l, Sigma+-} = -+2i (dH_l/dl) Sigma+-");
      const double Om = s.Omega(), k = s.kappa();
      bracket("H_l", "Pi" + g,
              [cv, e, I, Om, k](const PhasePoint& x, const Frozen&, cplx v) {
                const double T = kappa_tan(cv, x.r);
                return e * I * 2.0 * Om * (k * T * T + 1.0) * v;
              },
              "{H_l, Pi+-} = +-i(4 kappa dH/dOmega + 2 Omega) Pi+-");
      bracket("H", "S" + g, zero, "{H, S+-} = 0");
      bracket("sqrtL2", "S" + g, times(2.0 * e * I), "{sqrt(L^2), S+-} = +-2i S+-");
      bracket("H", "Lambda" + g, [e, I](const PhasePoint&, const Frozen& f, cplx v) { return e * 4.0 * I * std::sqrt(f.kappa_Ebar) * v; },
              "{Hbar_l, Lambda+-} = +-4i sqrt(kappa Ebar) Lambda+-", true);
    } else {
      bracket("Lz2", "phiLambda" + g, [e, I](const PhasePoint&, const Frozen& f, cplx v) { return e * 4.0 * I * f.m * v; },
              "{L_z^2, phiLambda+-} = +-4i m phiLambda+-");
      bracket("L2", "thetaSigma" + g,
              [e, I](const PhasePoint& x, const Frozen& f, cplx v) {
                const double st = std::sin(x.theta);
                return -e * 4.0 * I * f.m / (st * st) * v;
              },
              "{L^2, thetaSigma+-} = -+4i m/sin^2 thetaSigma+-");
      bracket("L2", "thetaLambda" + g, [e, I](const PhasePoint&, const Frozen& f, cplx v) { return e * 4.0 * I * f.ell * v; },
              "{L^2, thetaLambda+-} = +-4i l thetaLambda+-");
      bracket("H", "Ltp" + g, zero, "{H, L_thetaphi+-} = 0");
      bracket("L2", "Ltp" + g, zero, "{L^2, L_thetaphi+-} = 0");
      bracket("sqrtLz2", "Ltp" + g, times(2.0 * e * I), "{sqrt(L_z^2), L_thetaphi+-} = +-2i L_thetaphi+-");
      bracket("H", "S" + g, zero, "{H, S+-} = 0");
      bracket("Lz2", "S" + g, zero, "{L_z^2, S+-} = 0");
      bracket("sqrtL2", "S" + g, times(2.0 * e * I), "{sqrt(L^2), S+-} = +-2i S+-");
    }
  }
  if (!s.central())
    rep.findings.push_back(to_string(s.kind) + " " + kt + ": {sqrt(L_z^2), L_thetaphi+-} and {sqrt(L^2), S+-} come out as +-2i, "
                           "the conjugate of the -+2i labels");
  if (s.kind == SystemKind::KC) {
    std::mt19937_64 rng(seed);
    double worst = 0;
    for (int i = 0; i < kBracketPoints; ++i) {
      const PhasePoint x = random_phase_point(s, rng);
      const Frozen f = frozen_at(s, x);
      const cplx prod = observable(s, "Sigma+")(s, x) * observable(s, "Sigma-")(s, x);
      const double rhs = observable(s, "H_l")(s, x).real() + s.q * s.q / (4.0 * f.ell * f.ell) - s.kappa() * f.ell * f.ell;
      worst = std::max(worst, std::abs(prod - rhs) / std::max(1.0, std::abs(rhs)));
    }
    rep.add("Sigma+ Sigma- = H_l + q^2/4l^2 - kappa l^2" + kt, "Sigma+ Sigma- = H_l + q^2/4l^2", worst, 1e-12);
    rep.findings.push_back("KC " + kt + ": Sigma+ Sigma- carries -kappa l^2 beyond H_l + q^2/4l^2; {H_l, Sigma+-} = +-i(2l/S^2) Sigma+-, "
                           "so S+- pairs Sigma+- with the polar ladder of opposite sign");
  }
  if (s.kind == SystemKind::HO) {
    std::mt19937_64 rng(seed);
    double worst = 0;
    for (int i = 0; i < kBracketPoints; ++i) {
      const PhasePoint x = random_phase_point(s, rng);
      for (double e : {1.0, -1.0}) {
        const cplx sig = observable(s, "Sigma" + sg(e))(s, x);
        const cplx ab = observable(s, "a" + sg(-e))(s, x) * observable(s, "b" + sg(-e))(s, x);
        worst = std::max(worst, std::abs(sig - ab) / std::max(1.0, std::abs(sig)));
      }
    }
    rep.add("Sigma+- = a-+ b-+" + kt, "Sigma+- = -H_l + (1 + C^2) l^2/S^2 +- 2i l p_r/T", worst, 1e-12);
    rep.findings.push_back("HO " + kt + ": Sigma+- as written equals a-+ b-+, the conjugate pairing of the factors");
    if (s.kappa() != 0.0) {
      std::mt19937_64 r2(seed + 7);
      const LadderSelection sel = select_ladder_variant(s, r2, kBracketPoints);
      rep.add("energy ladder variant: C(2r), S(2r)" + kt, "{Hbar_l, Lambda+-} = +-4i sqrt(kappa Ebar) Lambda+-", sel.plain_residual, kBracketTolerance);
      char buf[240];
      std::snprintf(buf, sizeof buf,
                    "HO %s: energy ladder uses C(2r), S(2r) (worst bracket residual %.2e); the squared reading C(2r)^2, S(2r)^2 "
                    "fails with %.2e",
                    kt.c_str(), sel.plain_residual, sel.squared_residual);
      rep.findings.push_back(buf);
    }
  }

  // flow
  const PhasePoint x0 = verify_detail::flow_start(s);
  const Trajectory tr = flow(s, x0, t_end);
  rep.add("energy drift over t=" + fmt_param(t_end) + kt, "H is constant along the flow", tr.energy_drift, 1e-7);
  std::vector<std::string> constants = {"L2", "S+", "S-"};
  if (s.central())
    constants.push_back("Lz");
  else
    for (const char* c : {"Lz2", "Ltp+", "Ltp-"}) constants.push_back(c);
  for (const auto& name : constants) {
    const DriftReport d = conservation_check(s, observable(s, name), tr);
    rep.add("drift of " + name + " over t=" + fmt_param(t_end) + kt, "constant of motion", std::max(d.drift, d.phase_drift), 1e-5);
  }
  if (s.central()) {
    const DriftReport d = conservation_check(s, observable(s, "Sigma+"), tr);
    rep.add_outcome("Sigma+ alone rotates with constant modulus" + kt, "Sigma+ is not a constant of motion", d.modulus_drift, 1e-5,
                    d.modulus_drift < 1e-5 && d.phase_drift > 1e-3);
  }
  if (s.kind == SystemKind::HO) {
    const Frozen f = frozen_at(s, x0);
    if (s.kappa() > 0 && f.kappa_Ebar > 0) {
      const double expected = 4.0 * std::sqrt(f.kappa_Ebar);
      for (double e : {1.0, -1.0}) {
        const double rate = phase_rate(s, observable(s, "Lambda" + sg(e)), tr);
        rep.add("phase rate of Lambda" + sg(e) + kt, "arg Lambda+- advances at -+4 sqrt(kappa Ebar)", std::abs(rate + e * expected) / expected, 1e-2);
      }
    } else if (s.kappa() == 0.0) {
      for (const char* name : {"Pi+", "Pi-"}) {
        const DriftReport d = conservation_check(s, observable(s, name), tr);
        rep.add(std::string("modulus drift of ") + name + kt, "flat Pi+- are energy ladder functions", d.modulus_drift, 1e-5);
      }
      bracket("H", "Pi+", times(2.0 * I * s.Omega()), "{H, Pi+-} = +-2i Omega Pi+- at kappa = 0");
      bracket("H", "Pi-", times(-2.0 * I * s.Omega()), "{H, Pi+-} = +-2i Omega Pi+- at kappa = 0");
    } else {
      rep.findings.push_back("HO " + kt + ": energy-ladder phase rate not applicable for kappa <= 0");
    }
  }
  return rep;
}

// ---------------------------------------------------------------- flat limit

namespace verify_detail {

struct FlatGaps {
  double radial = 0;   // H_l, Sigma_KC, a, b, Sigma_HO coefficients, l <= 4
  double ladder = 0;   // HO energy ladder coefficients, n <= 5
  double kc_energy = 0;
  double ho_energy = 0;
};

inline FlatGaps flat_gaps(double k, const GridPtr& g, int n_max) {
  const double w = 2.0, q = 2.0;
  const SystemSpec kc0 = SystemSpec::kc(0.0, q, 30.0), ho0 = SystemSpec::ho(0.0, w, 30.0);
  const SystemSpec kc = SystemSpec::kc(k, q, 30.0), ho = SystemSpec::ho(k, w, 30.0);
  FlatGaps f;
  for (int l = 0; l <= 4; ++l) {
    f.radial = std::max(f.radial, coefficient_gap(radial_hamiltonian(kc, l), radial_hamiltonian(kc0, l), g));
    f.radial = std::max(f.radial, coefficient_gap(radial_hamiltonian(ho, l), radial_hamiltonian(ho0, l), g));
    for (Sign sn : {Sign::plus, Sign::minus}) {
      f.radial = std::max(f.radial, coefficient_gap(kc_sigma(kc, l + 1, sn), kc_sigma(kc0, l + 1, sn), g));
      for (HOFactor h : {HOFactor::a, HOFactor::b}) f.radial = std::max(f.radial, coefficient_gap(ho_ab(ho, l, w, h, sn), ho_ab(ho0, l, w, h, sn), g));
      if (sn == Sign::plus || l >= 2)
        f.radial = std::max(f.radial, coefficient_gap(collapse(ho_shift(ho, l, sn)), collapse(ho_shift(ho0, l, sn)), g));
    }
  }
  for (int n = 0; n <= n_max; ++n) {
    for (Sign sn : {Sign::plus, Sign::minus})
      f.ladder = std::max(f.ladder, coefficient_gap(collapse(ho_ladder(ho, n, sn)), collapse(ho_ladder(ho0, n, sn)), g));
    f.kc_energy = std::max(f.kc_energy, std::abs(kc_energy(kc, n) - kc_energy(kc0, n)));
    f.ho_energy = std::max(f.ho_energy, std::abs(ho_energy(ho, n) - ho_energy(ho0, n)));
  }
  return f;
}

}  // namespace verify_detail

/**
 * kappa = +-1e-6 against kappa = 0 over the scope used elsewhere (l <= 4, n <= 5): operator
 * coefficients on (0, 1], closed-form and oracle energies, and classical observables at r < 1.
 * Continuity rows: the deviations shrink tenfold from kappa = 1e-6 to 1e-7, and
 * (E(kappa) - E(0))/kappa equals dE/dkappa.
 */
inline VerificationReport flat_limit_suite(std::uint64_t seed, double tol = 1e-5, int n_max = 5) {
  VerificationReport rep;
  rep.title = "flat limit";
  const double w = 2.0, q = 2.0;
  const SystemSpec kc0 = SystemSpec::kc(0.0, q, 30.0), ho0 = SystemSpec::ho(0.0, w, 30.0);
  const GridPtr g = make_grid_on(Coordinate::r, kc0.curv, 0.0, 1.0, 64);
  const std::string ns = "n <= " + std::to_string(n_max);
  for (double k : {1e-6, -1e-6}) {
    const std::string kt = kappa_tag(k);
    const SystemSpec kc = SystemSpec::kc(k, q, 30.0), ho = SystemSpec::ho(k, w, 30.0);
    const verify_detail::FlatGaps f = verify_detail::flat_gaps(k, g, n_max);
    rep.add("radial factor and shift coefficients on (0, 1], l <= 4" + kt, "kappa-dependent operators reduce to their flat forms", f.radial, tol);
    rep.add("energy ladder coefficients on (0, 1], " + ns + kt, "Lambda+- reduces to the flat ladder", f.ladder, tol);
    rep.add("KC energies " + ns + kt, "E_n reduces to -q^2/4(n+1)^2", f.kc_energy, tol);
    rep.add("HO energies " + ns + kt, "E_n reduces to w(n + 3/2)", f.ho_energy, tol);
    double ow = 0;
    {
      const auto a = radial_levels(SystemSpec::kc(k, q, 200.0), 0, n_max + 1), b = radial_levels(SystemSpec::kc(0.0, q, 200.0), 0, n_max + 1);
      for (int n = 0; n <= n_max; ++n) ow = std::max(ow, std::abs(a[n].energy - b[n].energy));
      const int c = n_max / 2 + 1;
      const auto x = radial_levels(SystemSpec::ho(k, w, 20.0), 0, c), y = radial_levels(SystemSpec::ho(0.0, w, 20.0), 0, c);
      for (int i = 0; i < c; ++i) ow = std::max(ow, std::abs(x[i].energy - y[i].energy));
    }
    rep.add("oracle levels l = 0, " + ns + kt, "numerical spectra approach the flat spectra", ow, tol);
    std::mt19937_64 rng(seed);
    double cw = 0;
    const std::vector<std::string> names_kc = {"H", "Sigma+", "Sigma-", "S+", "S-"};
    const std::vector<std::string> names_ho = {"H", "Sigma+", "Sigma-", "a+", "a-", "b+", "b-", "Pi+", "Pi-", "S+", "S-", "Lambda+", "Lambda-"};
    for (int i = 0; i < kBracketPoints; ++i) {
      PhasePoint x = random_phase_point(kc0, rng);
      x.r = 0.1 + 0.9 * (x.r / 5.0);
      for (const auto& nm : names_kc)
        cw = std::max(cw, std::abs(observable(kc, nm)(kc, x) - observable(kc0, nm)(kc0, x)) / std::max(1.0, std::abs(observable(kc0, nm)(kc0, x))));
      for (const auto& nm : names_ho)
        cw = std::max(cw, std::abs(observable(ho, nm)(ho, x) - observable(ho0, nm)(ho0, x)) / std::max(1.0, std::abs(observable(ho0, nm)(ho0, x))));
    }
    rep.add("classical observables at r < 1" + kt, "phase-space functions reduce to their flat forms", cw, tol);
  }
  // continuity: linear approach to the flat values
  const verify_detail::FlatGaps a = verify_detail::flat_gaps(1e-6, g, n_max), b = verify_detail::flat_gaps(1e-7, g, n_max);
  double ratio_gap = 0;
  for (auto [x, y] : {std::pair{a.radial, b.radial}, {a.ladder, b.ladder}, {a.kc_energy, b.kc_energy}, {a.ho_energy, b.ho_energy}})
    ratio_gap = std::max(ratio_gap, std::abs(x / y - 10.0) / 10.0);
  rep.add("deviations shrink linearly from kappa = 1e-6 to 1e-7", "continuity at kappa = 0", ratio_gap, 0.05);
  const double kd = 1e-3;
  const SystemSpec kcp = SystemSpec::kc(kd, q, 30.0), hop = SystemSpec::ho(kd, w, 30.0);
  double sw = 0;
  for (int n = 0; n <= n_max; ++n) {
    sw = std::max(sw, std::abs((kc_energy(kcp, n) - kc_energy(kc0, n)) / kd - n * (n + 2.0)) / (1.0 + n * (n + 2.0)));
    sw = std::max(sw, std::abs((ho_energy(hop, n) - ho_energy(ho0, n)) / kd - (n * (n + 3.0) + 1.5)) / (n * (n + 3.0) + 1.5));
  }
  rep.add("dE/dkappa = n(n+2) (KC) and n(n+3) + 3/2 (HO), " + ns, "energies are linear in kappa", sw, 1e-9);
  const double worst_slope = std::max({n_max * (n_max + 2.0), n_max * (n_max + 3.0) + 1.5, (n_max + 3.0) * (n_max + 3.0)});
  char buf[260];
  std::snprintf(buf, sizeof buf,
                "flat limit: deviations at kappa = 1e-6 equal kappa times the analytic kappa-derivative; over %s the largest slope is "
                "%.4g, so an absolute 1e-5 bound holds only where the slope is below 10",
                ns.c_str(), worst_slope);
  rep.findings.push_back(buf);
  return rep;
}

// ---------------------------------------------------------------- per system

/** Every suite for the configured system, one block per curvature. */
inline VerificationReport verify_system(const VerifyConfig& c) {
  c.validate();
  VerificationReport rep;
  rep.title = "verify " + to_string(c.kind);
  rep.append(trig_suite(c.kappas));
  for (double k : c.kappas) {
    const SystemSpec s = system_for(c, k, cutoff_or(c, c.kind == SystemKind::KC || c.kind == SystemKind::Evans ? 60.0 : 20.0));
    switch (c.kind) {
      case SystemKind::KC:
        rep.append(kc_operator_suite(s, c.grid_n, c.tol));
        rep.append(kc_spectrum_suite(s));
        rep.append(kc_oracle_overlap_suite(s));
        rep.append(kc_admissibility_suite(s));
        break;
      case SystemKind::HO:
        rep.append(ho_operator_suite(s, c.grid_n, c.tol));
        rep.append(ho_spectrum_suite(s));
        rep.append(ho_state_suite(s));
        break;
      case SystemKind::SW:
      case SystemKind::Evans: rep.append(superintegrable_suite(s, c.tol)); break;
    }
    rep.append(classical_suite(s, c.seed, c.t_end));
  }
  return rep;
}

}  // namespace curvsym
