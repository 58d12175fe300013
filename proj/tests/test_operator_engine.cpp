#include <gtest/gtest.h>

#include <cmath>

#include "curvsym/checks.hpp"
#include "curvsym/factorizations.hpp"
#include "curvsym/operators.hpp"

using namespace curvsym;

namespace {
GridPtr unit_grid(int n = 64) { return make_grid_on(Coordinate::phi, Curvature::make(1.0), 0.2, 2.0, n); }
}  // namespace

TEST(Taylor, ArithmeticAndDerivatives) {
  const RealSeries x = RealSeries::variable(0.7, 6);
  const RealSeries f = exp(x) * sin(x) / (x * x + 1.0);
  const double h = 1e-4;
  auto g = [](double t) { return std::exp(t) * std::sin(t) / (t * t + 1.0); };
  EXPECT_NEAR(f.value(), g(0.7), 1e-15);
  EXPECT_NEAR(f.derivative(1), (g(0.7 + h) - g(0.7 - h)) / (2 * h), 1e-7);
  EXPECT_NEAR(f.derivative(2), (g(0.7 + h) - 2 * g(0.7) + g(0.7 - h)) / (h * h), 1e-5);
}

TEST(Taylor, PowLogSqrtConsistency) {
  const RealSeries x = RealSeries::variable(1.3, 8);
  const RealSeries a = pow(x, 2.5), b = exp(log(x) * 2.5), c = sqrt(x) * x * x;
  for (int k = 0; k <= 8; ++k) {
    EXPECT_NEAR(a.derivative(k), b.derivative(k), 1e-10 * (1 + std::abs(b.derivative(k))));
    EXPECT_NEAR(a.derivative(k), c.derivative(k), 1e-10 * (1 + std::abs(c.derivative(k))));
  }
}

TEST(Taylor, HyperbolicAndTan) {
  const RealSeries x = RealSeries::variable(0.4, 5);
  const RealSeries d = cosh(x) * cosh(x) - sinh(x) * sinh(x);
  EXPECT_NEAR(d.value(), 1.0, 1e-15);
  for (int k = 1; k <= 5; ++k) EXPECT_NEAR(d.derivative(k), 0.0, 1e-12);
  const RealSeries t = tan(x) - sin(x) / cos(x);
  for (int k = 0; k <= 5; ++k) EXPECT_NEAR(t.derivative(k), 0.0, 1e-12);
}

TEST(DiffOp, FirstOrderAction) {
  // (x d + 2) x^3 = 5 x^3
  DiffOp op = first_order(real_fn([](const auto& x) { return x; }), constant_fn(2.0), "x d + 2");
  Function1D f = make_function([](const auto& x) { return x * x * x; }, "x^3");
  Function1D target = make_function([](const auto& x) { return x * x * x * 5.0; }, "5x^3");
  EXPECT_LT(relative_residual(unit_grid(), apply(op, f), target, target), 1e-14);
}

TEST(DiffOp, ComposeMatchesSequentialApplication) {
  DiffOp A = first_order(real_fn([](const auto& x) { return sin(x); }), real_fn([](const auto& x) { return x * x; }), "A");
  DiffOp B = second_order(constant_fn(-1.0), real_fn([](const auto& x) { return cos(x) / sin(x); }),
                          real_fn([](const auto& x) { return exp(x); }), "B");
  const auto fns = test_functions({0.2, 2.0});
  const DiffOp AB = compose(A, B);
  EXPECT_EQ(AB.order(), 3);
  EXPECT_LT(identity_residual(unit_grid(), map_of(AB), then(map_of(A), map_of(B)), fns), 1e-13);
}

TEST(DiffOp, ChainCollapseAgrees) {
  DiffOp A = first_order(constant_fn(1.0), real_fn([](const auto& x) { return x; }), "A");
  DiffOp B = first_order(constant_fn(-1.0), real_fn([](const auto& x) { return x; }), "B");
  OperatorChain c = chain_of({A, B}, "AB", 0.5);
  const auto fns = test_functions({0.2, 2.0});
  EXPECT_LT(identity_residual(unit_grid(), map_of(c), map_of(collapse(c)), fns), 1e-13);
}

TEST(DiffOp, CollocationMatchesTaylorRoute) {
  GridPtr g = unit_grid(96);
  DiffOp B = second_order(constant_fn(-1.0), real_fn([](const auto& x) { return 1.0 / x; }), constant_fn(0.3), "B");
  Function1D f = make_function([](const auto& x) { return exp(x * -0.5) * cos(x); }, "f");
  const GridFunction col = apply(B, sample(g, f));
  const GridFunction ad = sample(g, apply(B, f));
  EXPECT_LT(relative_residual(col, ad, ad), 1e-8);
}

TEST(DiffOp, ShiftedAndScaled) {
  DiffOp A = first_order(constant_fn(1.0), constant_fn(0.0), "d");
  Function1D f = make_function([](const auto& x) { return exp(x); }, "e^x");
  Function1D expect = make_function([](const auto& x) { return exp(x) * 6.0; }, "6e^x");
  EXPECT_LT(relative_residual(unit_grid(), apply(scaled(shifted(A, 2.0), 2.0), f), expect, expect), 1e-14);
}

TEST(DiffOp, PoleCoefficientRaisesOnGrid) {
  GridPtr g = make_grid_on(Coordinate::r, Curvature::make(1.0), 0.0, 3.0, 17);
  DiffOp bad = multiplication(real_fn([](const auto& x) { return sqrt(x - 2.0); }), "sqrt(x-2)");
  GridFunction one = GridFunction::sample(g, [](double) { return 1.0; });
  EXPECT_THROW(apply(bad, one), PoleError);
}

TEST(Function1D, ComplexModes) {
  DiffOp d = first_order(constant_fn(cplx(0, -1)), SeriesFn{}, "-i d");
  Function1D mode{complex_fn([](const RealSeries& x) {
                    RealSeries a = x * 3.0, c = cos(a), s = sin(a);
                    Series out(x.order);
                    for (int i = 0; i <= x.order; ++i) out.c[i] = cplx(c.c[i], s.c[i]);
                    return out;
                  }),
                  "e^{3i x}"};
  EXPECT_LT(eigen_residual(unit_grid(), map_of(d), mode, 3.0), 1e-14);
}
