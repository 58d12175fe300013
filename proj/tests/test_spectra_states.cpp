#include <gtest/gtest.h>

#include <cmath>

#include "curvsym/checks.hpp"
#include "curvsym/spectra.hpp"
#include "curvsym/symmetries.hpp"

using namespace curvsym;

TEST(KCEnergy, Values) {
  EXPECT_DOUBLE_EQ(kc_energy(SystemSpec::kc(0.0, 2.0), 0), -1.0);
  EXPECT_DOUBLE_EQ(kc_energy(SystemSpec::kc(1.0, 2.0), 1), 2.75);
  EXPECT_DOUBLE_EQ(kc_energy(SystemSpec::kc(-0.01, 2.0), 0), -1.0);
}

TEST(KCEnergy, Admissibility) {
  const SystemSpec s = SystemSpec::kc(-0.01, 2.0);
  EXPECT_TRUE(kc_admissible(SystemSpec::kc(0.0, 2.0), 50));
  EXPECT_TRUE(kc_admissible(s, 2));
  EXPECT_FALSE(kc_admissible(s, 3));
  EXPECT_THROW(kc_energy(s, 3), AdmissibilityError);
  for (int n = 0; n < 6; ++n) {
    const auto f = kc_admissibility_forms(SystemSpec::kc(-0.003, 1.0), n);
    EXPECT_EQ(f.cutoff_form, f.derivative_form) << n;
  }
}

TEST(KCEnergy, MonotoneOverAdmissibleRange) {
  for (double k : {-0.01, 0.0, 0.1}) {
    const SystemSpec s = SystemSpec::kc(k, 2.0);
    for (int n = 0; n < 20 && kc_admissible(s, n + 1); ++n) EXPECT_GT(kc_energy(s, n + 1), kc_energy(s, n)) << k << " " << n;
  }
}

TEST(HOEnergy, Values) {
  EXPECT_DOUBLE_EQ(ho_energy(SystemSpec::ho(0.0, 2.0), 0), 3.0);
  EXPECT_NEAR(ho_energy(SystemSpec::ho(1e-9, 2.0), 0), 3.0, 1e-6);
  EXPECT_NEAR(ho_energy(SystemSpec::ho(0.1, 2.0), 1), 5.55, 1e-13);
  const SystemSpec s = SystemSpec::ho(-0.05, 2.0);
  EXPECT_NEAR(ho_energy(s, 0), ho_energy_expanded(s, 0), 1e-13);
}

TEST(HOEnergy, MainTextDiffersByConstant) {
  for (double k : {-0.1, 0.2}) {
    const SystemSpec s = SystemSpec::ho(k, 2.0);
    for (int n = 0; n < 3; ++n) EXPECT_NEAR(ho_energy(s, n) - ho_energy_short_form(s, n), 1.5 * k, 1e-12);
  }
}

TEST(HOEnergy, Admissibility) {
  EXPECT_TRUE(ho_admissible(SystemSpec::ho(0.1, 2.0), 10));
  EXPECT_TRUE(ho_admissible(SystemSpec::ho(-0.2, 2.0), 3));
  EXPECT_FALSE(ho_admissible(SystemSpec::ho(-0.2, 2.0), 4));
  EXPECT_THROW(ho_energy(SystemSpec::ho(-0.2, 2.0), 4), AdmissibilityError);
}

TEST(HOEnergy, MonotoneOverAdmissibleRange) {
  for (double k : {-0.2, 0.0, 0.3}) {
    const SystemSpec s = SystemSpec::ho(k, 2.0);
    for (int n = 0; n < 20 && ho_admissible(s, n + 1); ++n) EXPECT_GT(ho_energy(s, n + 1), ho_energy(s, n));
  }
}

TEST(QuantumNumbersSW, TildeRules) {
  const SystemSpec s = SystemSpec::sw(0.1, 2.0, 0.3, 0.4, 0.6);
  const QuantumNumbers q = shifted_quantum_numbers(s, 1, 2, 1);
  EXPECT_DOUBLE_EQ(q.m, 2.7);
  EXPECT_DOUBLE_EQ(q.ell, 7.3);
  EXPECT_DOUBLE_EQ(q.n, 9.3);
  const SystemSpec e = SystemSpec::evans(0.1, 2.0, 0.3, 0.4, 0.6);
  EXPECT_DOUBLE_EQ(shifted_quantum_numbers(e, 1, 2, 1).n, 8.3);
  EXPECT_THROW(shifted_quantum_numbers(s, -1, 0, 0), ParamError);
}

TEST(HighestWeight, CentralStatesAreEigenstates) {
  for (const SystemSpec& s : {SystemSpec::kc(0.1, 2.0), SystemSpec::kc(-0.01, 2.0, 80.0), SystemSpec::ho(0.2, 2.0),
                              SystemSpec::ho(-0.1, 2.0, 10.0)}) {
    const TensorGrid g = make_tensor_grid(s, 64, 32, 32);
    for (int n = 0; n <= 2; ++n)
      EXPECT_LT(full_eigen_residual(s, highest_weight(s, n), system_energy(s, n), g), 1e-8) << to_string(s.kind) << n;
  }
}

TEST(HighestWeight, SuperintegrableMinimumIsEigenstate) {
  for (const SystemSpec& s : {SystemSpec::sw(0.1, 2.0, 0.3, 0.4, 0.6), SystemSpec::evans(0.1, 2.0, 0.3, 0.4, 0.6),
                              SystemSpec::sw(-0.1, 2.0, 0.3, 0.4, 0.6, 10.0)}) {
    const TensorGrid g = make_tensor_grid(s, 64, 32, 32);
    const double n = s.k1 + s.k2 + s.k3;
    EXPECT_LT(full_eigen_residual(s, highest_weight(s, n), system_energy(s, n), g), 1e-8) << to_string(s.kind);
  }
}

TEST(HighestWeight, EvansMinimumAnnihilated) {
  const SystemSpec s = SystemSpec::evans(0.1, 2.0, 0.3, 0.4, 0.6);
  const ProductState psi = highest_weight(s, 0);
  const TensorGrid g = make_tensor_grid(s, 48, 48, 48);
  const double m = s.k1 + s.k2, l = m + s.k3;
  EXPECT_LT(annihilation_residual(g.phi, map_of(sw_phi_ladder(s, m, Sign::minus)), psi.azimuthal), 1e-8);
  EXPECT_LT(annihilation_residual(g.theta, map_of(sw_theta_ladder(s, l, m, Sign::minus)), psi.polar), 1e-8);
  EXPECT_LT(annihilation_residual(g.theta, map_of(sw_theta_shift(s, m, Sign::plus)), psi.polar), 1e-8);
  EXPECT_LT(annihilation_residual(g.r, map_of(kc_sigma(s, l + 1, Sign::plus)), psi.radial), 1e-8);
}

TEST(HighestWeight, NormalizabilityTransitionKappaNegative) {
  const SystemSpec s = SystemSpec::kc(-0.01, 2.0, 400.0);
  // n = 2 admissible, n = 3 not
  EXPECT_TRUE(radially_normalizable(s, highest_weight_radial(s, 2)));
  EXPECT_FALSE(radially_normalizable(s, highest_weight_radial(s, 3)));
  EXPECT_THROW(highest_weight(s, 3), AdmissibilityError);
}

TEST(Basis, KCFlatLevelOne) {
  const SystemSpec s = SystemSpec::kc(0.0, 2.0, 40.0);
  const TensorGrid g = make_tensor_grid(s, 96, 48, 32);
  const auto basis = build_basis(s, 1, g);
  ASSERT_EQ(int(basis.size()), 4);
  EXPECT_EQ(degeneracy(s, 1), 4);
  std::vector<DenseField> f;
  for (const auto& b : basis) f.push_back(to_dense(b.psi, g));
  for (size_t i = 0; i < f.size(); ++i) {
    EXPECT_NEAR(f[i].norm(), 1.0, 1e-8);
    for (size_t j = i + 1; j < f.size(); ++j) EXPECT_LT(std::abs(inner(f[i], f[j])), 1e-8) << i << j;
  }
}

TEST(Basis, KCStatesAreEigenstates) {
  const SystemSpec s = SystemSpec::kc(0.1, 2.0);
  const TensorGrid g = make_tensor_grid(s, 64, 32, 32);
  const auto basis = build_basis(s, 2, g);
  EXPECT_EQ(int(basis.size()), 9);
  for (const auto& b : basis) EXPECT_LT(full_eigen_residual(s, b.psi, kc_energy(s, 2), g), 1e-7) << to_string(b.qn);
}

TEST(Basis, HOStatesAreEigenstates) {
  for (double k : {0.2, 0.0, -0.1}) {
    const SystemSpec s = SystemSpec::ho(k, 2.0, 10.0);
    const TensorGrid g = make_tensor_grid(s, 64, 32, 32);
    for (int n = 0; n <= 3; ++n) {
      const auto basis = build_basis(s, n, g);
      EXPECT_EQ(int(basis.size()), degeneracy(s, n));
      for (const auto& b : basis) EXPECT_LT(full_eigen_residual(s, b.psi, ho_energy(s, n), g), 1e-7) << k << to_string(b.qn);
    }
  }
}

TEST(Basis, HOOrthonormal) {
  const SystemSpec s = SystemSpec::ho(0.2, 2.0);
  const TensorGrid g = make_tensor_grid(s, 64, 48, 48);
  const auto basis = build_basis(s, 2, g);
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = 0; j < basis.size(); ++j) {
      const cplx v = inner(to_dense(basis[i].psi, g), to_dense(basis[j].psi, g));
      EXPECT_NEAR(std::abs(v), i == j ? 1.0 : 0.0, 1e-8);
    }
}

TEST(Basis, SuperintegrableStatesAreEigenstates) {
  for (const SystemSpec& s : {SystemSpec::sw(0.1, 2.0, 0.3, 0.4, 0.6), SystemSpec::evans(0.1, 2.0, 0.3, 0.4, 0.6)}) {
    const TensorGrid g = make_tensor_grid(s, 64, 48, 48);
    for (auto [p, gg, h] : {std::tuple{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 2}, {0, 0, 2}}) {
      const QuantumNumbers q = shifted_quantum_numbers(s, p, gg, h);
      const ProductState psi = build_superintegrable_state(s, p, gg, h);
      EXPECT_LT(full_eigen_residual(s, psi, system_energy(s, q.n), g), 1e-7) << to_string(s.kind) << to_string(q);
    }
  }
}

namespace {
double overlap(const ProductState& a, const ProductState& b, const TensorGrid& g) {
  const DenseField x = to_dense(a, g), y = to_dense(b, g);
  return std::abs(inner(x, y)) / (x.norm() * y.norm());
}
}  // namespace

TEST(Basis, SymmetriesMapBetweenBuiltStates) {
  for (const SystemSpec& s : {SystemSpec::sw(0.1, 2.0, 0.3, 0.4, 0.6), SystemSpec::evans(0.1, 2.0, 0.3, 0.4, 0.6)}) {
    const TensorGrid g = make_tensor_grid(s, 96, 96, 96);
    const int h = s.kind == SystemKind::SW ? 1 : 2;
    const QuantumNumbers q = shifted_quantum_numbers(s, 0, 1, h);
    const ProductState psi = build_superintegrable_state(s, 0, 1, h);
    // L_thetaphi+ : (p, g) -> (p + 1, g - 1)
    const ProductState up = apply(symmetry_compose(s, SymmetryKind::L_thetaphi, Sign::plus, {q.ell, q.m}), psi);
    EXPECT_GT(overlap(up, build_superintegrable_state(s, 1, 0, h), g), 1 - 1e-6) << to_string(s.kind);
    // S_rtheta+ : (g, h) -> (g + 1, h - 1) for SW and (g + 1, h - 2) for Evans
    const ProductState sr = apply(symmetry_compose(s, SymmetryKind::S_rtheta, Sign::plus, {q.ell, q.m}), psi);
    EXPECT_GT(overlap(sr, build_superintegrable_state(s, 0, 2, 0), g), 1 - 1e-6) << to_string(s.kind);
  }
}
