#include <gtest/gtest.h>

#include <cmath>

#include "curvsym/checks.hpp"
#include "curvsym/oracle.hpp"
#include "curvsym/spectra.hpp"

using namespace curvsym;

namespace {

double overlap(const GridPtr& g, const Function1D& a, const Function1D& b) {
  const GridFunction A = sample(g, a), B = sample(g, b);
  return std::abs(inner(A, B)) / (l2_norm(A) * l2_norm(B));
}

GridPtr radial_grid(const SystemSpec& s, double hi, int n = 400) {
  return make_grid_on(Coordinate::r, s.curv, 0.0, std::min(hi, s.radial_domain().hi), n);
}

/** -R'' - (2/T) R' + [l(l+1)/S^2 + V] R - E R, relative to max |E R|, on interior sample points. */
double radial_equation_residual(const SystemSpec& s, double ell, const Function1D& R, double E, double lo, double hi) {
  double num = 0.0, den = 0.0;
  for (int i = 1; i < 40; ++i) {
    const double r = lo + (hi - lo) * i / 40.0;
    const Series f = R(r, 2);
    const double S = kappa_sin(s.curv, r), T = kappa_tan(s.curv, r);
    const double V = s.oscillator() ? T * T * s.Omega2() / 4.0 : -s.q / T;
    const cplx lhs = -f.derivative(2) - 2.0 / T * f.derivative(1) + (ell * (ell + 1.0) / (S * S) + V) * f.c[0];
    num = std::max(num, std::abs(lhs - E * f.c[0]));
    den = std::max(den, std::abs(E * f.c[0]));
  }
  return num / den;
}

}  // namespace

TEST(GaussJacobi, MomentsAndOrdering) {
  const double a = 0.4, b = 1.7;
  const GaussJacobi g = gauss_jacobi(9, a, b);
  const double mu0 = std::exp((a + b + 1) * std::log(2.0) + std::lgamma(a + 1) + std::lgamma(b + 1) - std::lgamma(a + b + 2));
  EXPECT_NEAR(g.weights.sum(), mu0, 1e-13 * mu0);
  EXPECT_NEAR(g.weights.dot(g.nodes), mu0 * (b - a) / (a + b + 2), 1e-13 * mu0);
  for (int i = 0; i < 9; ++i) {
    EXPECT_GT(g.nodes[i], -1.0);
    EXPECT_LT(g.nodes[i], 1.0);
    if (i) {
      EXPECT_GT(g.nodes[i], g.nodes[i - 1]);
    }
  }
  EXPECT_THROW(gauss_jacobi(1, 0, 0), ConfigError);
  EXPECT_THROW(gauss_jacobi(8, -1.0, 0), ConfigError);
}

TEST(Oracle, FlatKCHydrogenLevels) {
  const auto r = eigensolve(liouville_transform(SystemSpec::kc(0.0, 2.0, 400.0), 0), 3);
  EXPECT_NEAR(r.values[0], -1.0, 1e-6);
  EXPECT_NEAR(r.values[1], -0.25, 1e-6);
  EXPECT_NEAR(r.values[2], -1.0 / 9.0, 1e-6);
  EXPECT_LT(r.max_drift, 1e-8);
}

TEST(Oracle, FlatHOLevels) {
  const auto r = eigensolve(liouville_transform(SystemSpec::ho(0.0, 2.0, 20.0), 0), 3);
  EXPECT_NEAR(r.values[0], 3.0, 1e-6);
  EXPECT_NEAR(r.values[1], 7.0, 1e-6);
  EXPECT_NEAR(r.values[2], 11.0, 1e-6);
}

TEST(Oracle, ThetaProblemSW) {
  const SystemSpec s = SystemSpec::sw(0.1, 2.0, 0.3, 0.4, 0.3);
  const double m = 0.7, ell = m + 0.3;
  const auto r = eigensolve(liouville_transform_theta(s, m), 1);
  EXPECT_NEAR(r.values[0], ell * (ell + 1.0), 1e-7);
}

TEST(Oracle, OffsetConsistency) {
  struct Case {
    SystemSpec s;
    double ell;
    double hi;
  };
  const std::vector<Case> cases = {{SystemSpec::kc(0.1, 2.0), 1.0, 8.0},
                                   {SystemSpec::kc(-0.01, 2.0, 80.0), 0.0, 30.0},
                                   {SystemSpec::ho(-0.05, 2.0, 20.0), 2.0, 5.0},
                                   {SystemSpec::ho(0.3, 2.0), 1.0, 2.5}};
  for (const auto& c : cases) {
    const auto r = eigensolve(liouville_transform(c.s, c.ell), 2);
    for (int i = 0; i < 2; ++i) {
      // the untransformed radial operator reproduces E = lambda - kappa
      EXPECT_LT(radial_equation_residual(c.s, c.ell, r.vectors[i], r.values[i], 0.05, c.hi), 1e-7) << to_string(c.s.kind);
      EXPECT_GT(radial_equation_residual(c.s, c.ell, r.vectors[i], r.values[i] + c.s.kappa(), 0.05, c.hi), 1e-5);
    }
  }
}

TEST(Oracle, KCSpectrumMatchesClosedForm) {
  for (double k : {-0.01, 0.0, 0.1}) {
    const SystemSpec s = SystemSpec::kc(k, 2.0, 200.0);
    std::vector<double> analytic, numeric;
    for (int ell = 0; ell <= 5; ++ell) {
      const auto lv = radial_levels(s, ell, 6 - ell);
      for (int n = ell; n <= 5; ++n) {
        if (!kc_admissible(s, n)) {
          EXPECT_FALSE(lv[n - ell].converged) << "kappa " << k << " n " << n;
          continue;
        }
        ASSERT_TRUE(lv[n - ell].converged) << "kappa " << k << " n " << n << " l " << ell;
        analytic.push_back(kc_energy(s, n));
        numeric.push_back(lv[n - ell].energy);
      }
    }
    const auto rep = compare_spectrum(analytic, numeric, 1e-6);
    EXPECT_TRUE(rep.pass()) << "kappa " << k << " max " << rep.max_residual();
  }
}

TEST(Oracle, HOEnergyFormulaAdjudication) {
  for (double k : {-0.05, 0.1}) {
    const SystemSpec s = SystemSpec::ho(k, 2.0, 20.0);
    std::vector<double> shifted, short_form, numeric;
    for (int ell = 0; ell <= 5; ++ell) {
      const int count = (5 - ell) / 2 + 1;
      const auto lv = radial_levels(s, ell, count);
      for (int i = 0; i < count; ++i) {
        const int n = ell + 2 * i;
        ASSERT_TRUE(lv[i].converged);
        shifted.push_back(ho_energy(s, n));
        short_form.push_back(ho_energy_short_form(s, n));
        numeric.push_back(lv[i].energy);
      }
    }
    EXPECT_TRUE(compare_spectrum(shifted, numeric, 1e-6).pass()) << k;
    const auto bad = compare_spectrum(short_form, numeric, 1e-6);
    EXPECT_FALSE(bad.pass());
    for (const auto& row : bad.rows) EXPECT_NEAR(row.residual, 1.5 * std::abs(k), 1e-6);
  }
}

TEST(Oracle, SWAngularSpectra) {
  for (auto kind : {SystemKind::SW, SystemKind::Evans}) {
    const SystemSpec s = kind == SystemKind::SW ? SystemSpec::sw(0.1, 2.0, 0.3, 0.4, 0.6) : SystemSpec::evans(0.1, 2.0, 0.3, 0.4, 0.6);
    const auto phi = eigensolve(liouville_transform_phi(s), 3);
    for (int p = 0; p <= 2; ++p) {
      const double m = s.k1 + s.k2 + 2.0 * p;
      EXPECT_NEAR(phi.values[p], m * m, 1e-6);
      const auto th = eigensolve(liouville_transform_theta(s, m), 3);
      for (int g = 0; g <= 2; ++g) {
        const double ell = m + s.k3 + 2.0 * g;
        EXPECT_NEAR(th.values[g], ell * (ell + 1.0), 1e-6) << "p " << p << " g " << g;
      }
    }
  }
}

TEST(Oracle, KCGroundStateIsExponential) {
  const SystemSpec s = SystemSpec::kc(0.0, 2.0, 60.0);
  const auto lv = radial_levels(s, 0, 1);
  const auto g = radial_grid(s, 40.0);
  EXPECT_GT(overlap(g, lv[0].vector, make_function([](const auto& r) { return exp(-r); }, "e^-r")), 1.0 - 1e-6);
  EXPECT_GT(overlap(g, lv[0].vector, highest_weight_radial(s, 0)), 1.0 - 1e-6);
}

TEST(Oracle, HOLadderActionsMatchOracle) {
  for (double k : {-0.05, 0.1}) {
    const SystemSpec s = SystemSpec::ho(k, 2.0, 20.0);
    const auto g = radial_grid(s, 12.0);
    for (int ell : {0, 1}) {
      const auto lv = radial_levels(s, ell, 3);
      Function1D R = highest_weight_radial(s, ell);
      EXPECT_GT(overlap(g, R, lv[0].vector), 1.0 - 1e-6);
      for (int i = 0; i < 2; ++i) {
        R = apply(ho_ladder(s, ell + 2 * i, Sign::plus), R);
        EXPECT_GT(overlap(g, R, lv[i + 1].vector), 1.0 - 1e-6) << "kappa " << k << " l " << ell << " step " << i;
      }
    }
    // Sigma- lowers l by two at fixed n
    const auto lv1 = radial_levels(s, 1, 2);
    const Function1D down = apply(ho_shift(s, 3, Sign::minus), highest_weight_radial(s, 3));
    EXPECT_GT(overlap(g, down, lv1[1].vector), 1.0 - 1e-8);
  }
}

TEST(Oracle, KCShiftActionsMatchOracle) {
  const SystemSpec s = SystemSpec::kc(0.1, 2.0);
  const auto g = radial_grid(s, 1e9);
  const int n = 3;
  Function1D R = highest_weight_radial(s, n);
  for (int ell = n; ell >= 0; --ell) {
    const auto lv = radial_levels(s, ell, n - ell + 1);
    EXPECT_GT(overlap(g, R, lv[n - ell].vector), 1.0 - 1e-6) << "l " << ell;
    if (ell > 0) R = apply(kc_sigma(s, ell, Sign::minus), R);
  }
}

TEST(Oracle, BasisRadialFactorsMatchOracle) {
  for (const SystemSpec& s : {SystemSpec::kc(0.1, 2.0), SystemSpec::ho(0.1, 2.0)}) {
    const int n = 3;
    const auto basis = build_basis(s, n);
    const auto g = radial_grid(s, 12.0);
    for (const auto& b : basis) {
      const int ell = int(b.qn.ell);
      const int idx = s.kind == SystemKind::KC ? n - ell : (n - ell) / 2;
      const auto lv = radial_levels(s, ell, idx + 1);
      EXPECT_GT(overlap(g, b.psi.radial, lv[idx].vector), 1.0 - 1e-6) << to_string(b.qn);
    }
  }
}

TEST(Oracle, SuperintegrableFactorsMatchOracle) {
  const SystemSpec sw = SystemSpec::sw(0.1, 2.0, 0.3, 0.4, 0.6);
  const SystemSpec ev = SystemSpec::evans(0.1, 2.0, 0.3, 0.4, 0.6);
  const auto gphi = make_grid_on(Coordinate::phi, sw.curv, 0.0, 0.5 * std::numbers::pi, 200);
  const auto gth = make_grid_on(Coordinate::theta, sw.curv, 0.0, 0.5 * std::numbers::pi, 200);
  const auto phi = eigensolve(liouville_transform_phi(sw), 3);
  for (int p = 0; p <= 2; ++p) {
    const auto st = build_superintegrable_state(sw, p, 0, 0);
    EXPECT_GT(overlap(gphi, st.azimuthal, phi.vectors[p]), 1.0 - 1e-6) << "p " << p;
  }
  for (int p = 0; p <= 1; ++p) {
    const double m = sw.k1 + sw.k2 + 2.0 * p;
    const auto th = eigensolve(liouville_transform_theta(sw, m), 3);
    for (int g = 0; g <= 2; ++g) {
      const auto st = build_superintegrable_state(sw, p, g, 0);
      EXPECT_GT(overlap(gth, st.polar, th.vectors[g]), 1.0 - 1e-6) << "p " << p << " g " << g;
    }
  }
  // theta Sigma+ raises m by two at fixed l
  {
    const double m = sw.k1 + sw.k2;
    const auto from = build_superintegrable_state(sw, 0, 1, 0);
    const auto th = eigensolve(liouville_transform_theta(sw, m + 2.0), 1);
    EXPECT_GT(overlap(gth, apply(sw_theta_shift(sw, m, Sign::plus), from.polar), th.vectors[0]), 1.0 - 1e-6);
  }
  for (const SystemSpec& s : {sw, ev}) {
    const auto g = radial_grid(s, 12.0);
    for (int h = 0; h <= 2; ++h) {
      const auto st = build_superintegrable_state(s, 0, 0, h);
      const QuantumNumbers q = shifted_quantum_numbers(s, 0, 0, h);
      const auto lv = radial_levels(s, q.ell, h + 1);
      EXPECT_GT(overlap(g, st.radial, lv[h].vector), 1.0 - 1e-6) << to_string(s.kind) << " h " << h;
      EXPECT_NEAR(lv[h].energy, system_energy(s, q.n), 1e-6);
    }
  }
}

TEST(Oracle, ContinuumLevelsExcluded) {
  const SystemSpec s = SystemSpec::kc(-0.01, 2.0, 100.0);
  const auto lv = radial_levels(s, 0, 5);
  for (int n = 0; n < 5; ++n) EXPECT_EQ(lv[n].converged, kc_admissible(s, n)) << n;
}

TEST(Oracle, CompareSpectrumReport) {
  const auto same = compare_spectrum({1.0, 2.0}, {1.0, 2.0}, 1e-12);
  EXPECT_TRUE(same.pass());
  EXPECT_EQ(same.max_residual(), 0.0);
  EXPECT_FALSE(compare_spectrum({1.0}, {1.1}, 1e-3).pass());
  EXPECT_THROW(compare_spectrum({1.0}, {}, 1e-3), ConfigError);
}
