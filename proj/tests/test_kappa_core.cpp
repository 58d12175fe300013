#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curvsym/grid.hpp"
#include "curvsym/kappa_trig.hpp"
#include "curvsym/operators.hpp"

using namespace curvsym;

TEST(KappaTrig, FlatBranchIsIdentityLike) {
  const auto v = eval_trig(Curvature::make(0.0, 10.0), 1.0);
  EXPECT_DOUBLE_EQ(v.c, 1.0);
  EXPECT_DOUBLE_EQ(v.s, 1.0);
  EXPECT_DOUBLE_EQ(v.t, 1.0);
}

TEST(KappaTrig, SphericalQuarterPeriod) {
  const Curvature cv = Curvature::make(1.0);
  const auto v = eval_trig(cv, std::numbers::pi / 4);
  EXPECT_NEAR(v.c, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(v.s, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(v.t, 1.0, 1e-14);
  EXPECT_NEAR(cv.quarter_period(), std::numbers::pi / 2, 1e-15);
}

TEST(KappaTrig, HyperbolicValues) {
  const auto v = eval_trig(Curvature::make(-4.0, 10.0), 0.5);
  EXPECT_NEAR(v.c, std::cosh(1.0), 1e-14);
  EXPECT_NEAR(v.s, std::sinh(1.0) / 2.0, 1e-14);
}

TEST(KappaTrig, TangentPoleRaises) {
  const Curvature cv = Curvature::make(1.0);
  EXPECT_THROW(kappa_tan(cv, std::numbers::pi / 2), PoleError);
  const auto v = eval_trig(cv, std::numbers::pi / 2);
  EXPECT_TRUE(std::isnan(v.t));
}

TEST(KappaTrig, OutsideDomainRaises) {
  EXPECT_THROW(eval_trig(Curvature::make(1.0), 4.0), DomainError);
  EXPECT_THROW(eval_trig(Curvature::make(0.0, 5.0), -0.1), DomainError);
}

TEST(KappaTrig, CutoffRequiredForNonPositiveKappa) {
  EXPECT_FALSE(Curvature::make(0.0).has_cutoff());
  EXPECT_THROW(make_grid(Coordinate::r, Curvature::make(0.0), 32), ConfigError);
  EXPECT_THROW(Curvature::make(-0.5, -1.0), ConfigError);
}

TEST(KappaTrig, PythagoreanIdentityAllBranches) {
  for (double k : {-2.0, -1e-9, 0.0, 1e-9, 0.7}) {
    const Curvature cv = k > 0 ? Curvature::make(k) : Curvature::make(k, 5.0);
    for (double r : {1e-3, 0.3, 1.1, 2.2}) {
      const auto v = eval_trig(cv, r);
      EXPECT_NEAR(v.c * v.c + k * v.s * v.s, 1.0, 1e-13) << k << " " << r;
    }
  }
}

TEST(KappaTrig, DerivativeRelations) {
  for (double k : {-0.8, 0.0, 0.6}) {
    const Curvature cv = k > 0 ? Curvature::make(k) : Curvature::make(k, 5.0);
    const double r = 0.9;
    const auto d = trig_derivatives(cv, r);
    const RealSeries x = RealSeries::variable(r, 2);
    EXPECT_NEAR(d.dc, kappa_cos(cv, x).derivative(1), 1e-13);
    EXPECT_NEAR(d.ds, kappa_sin(cv, x).derivative(1), 1e-13);
    EXPECT_NEAR(d.dt, kappa_tan(cv, x).derivative(1), 1e-12);
  }
}

TEST(KappaTrig, SeriesBranchIsContinuous) {
  for (double r : {0.5, 1.0, 2.0}) {
    for (double k : {1e-12, -1e-12}) {
      const Curvature cv = k > 0 ? Curvature::make(k) : Curvature::make(k, 5.0);
      const auto v = eval_trig(cv, r);
      const auto f = eval_trig(Curvature::make(0.0, 5.0), r);
      EXPECT_NEAR(v.s, f.s, 1e-11);
      EXPECT_NEAR(v.c, f.c, 1e-11);
      EXPECT_NEAR(v.t, f.t, 1e-11);
    }
  }
}

TEST(KappaTrig, BranchBoundaryAgreement) {
  // both sides of |kappa| r^2 = 1e-8 against an extended-precision reference
  const double k = 1e-8;
  for (double r : {0.99, 1.01}) {
    const auto v = eval_trig(Curvature::make(k), r);
    const long double a = std::sqrt(static_cast<long double>(k)) * r;
    EXPECT_NEAR(v.s, static_cast<double>(std::sin(a) / std::sqrt(static_cast<long double>(k))), 1e-15);
    EXPECT_NEAR(v.c, static_cast<double>(std::cos(a)), 1e-15);
  }
}

TEST(KappaTrig, LogCosOverKappaFlatLimit) {
  const double r = 1.3;
  EXPECT_NEAR(log_cos_over_kappa(Curvature::make(0.0, 5.0), r), -r * r / 2, 1e-15);
  const double k = 0.2;
  EXPECT_NEAR(log_cos_over_kappa(Curvature::make(k), r), std::log(std::cos(std::sqrt(k) * r)) / k, 1e-13);
  const double tiny = 1e-6;
  EXPECT_NEAR(log_cos_over_kappa(Curvature::make(tiny), r), std::log(std::cos(std::sqrt(tiny) * r)) / tiny, 1e-9);
}

TEST(KappaTrig, VolumeWeight) {
  const Curvature cv = Curvature::make(1.0);
  EXPECT_NEAR(volume_weight(cv, 1.0), std::sin(1.0) * std::sin(1.0), 1e-15);
}

TEST(Grid, SinIntegralOverTheta) {
  GridPtr g = make_grid(Coordinate::theta, Curvature::make(1.0), 64);
  auto one = GridFunction::sample(g, [](double) { return 1.0; });
  EXPECT_NEAR(weighted_norm(one), 2.0, 1e-13);
}

TEST(Grid, RadialMeasureFlat) {
  GridPtr g = make_grid(Coordinate::r, Curvature::make(0.0, 2.0), 64);
  auto one = GridFunction::sample(g, [](double) { return 1.0; });
  EXPECT_NEAR(weighted_norm(one), 8.0 / 3.0, 1e-12);
}

TEST(Grid, SmallGridRejected) { EXPECT_THROW(make_grid(Coordinate::phi, Curvature::make(1.0), 8), ConfigError); }

TEST(Grid, NoCutoffRejected) {
  Curvature cv;
  cv.kappa = -1.0;
  EXPECT_THROW(make_grid(Coordinate::r, cv, 32), ConfigError);
}

TEST(Grid, DifferentiatePolynomialExactly) {
  GridPtr g = make_grid(Coordinate::r, Curvature::make(0.0, 3.0), 32);
  auto f = GridFunction::sample(g, [](double r) { return r * r; });
  auto d = differentiate(f);
  for (int i = 0; i < g->n(); ++i) EXPECT_NEAR(d.values[i].real(), 2 * g->nodes[i], 1e-10);
}

TEST(Grid, DifferentiateExponentialSpectrally) {
  GridPtr g = make_grid(Coordinate::r, Curvature::make(0.0, 3.0), 48);
  auto f = GridFunction::sample(g, [](double r) { return std::exp(-r); });
  auto d = differentiate(f);
  double err = 0;
  for (int i = 0; i < g->n(); ++i) err = std::max(err, std::abs(d.values[i].real() + std::exp(-g->nodes[i])));
  EXPECT_LT(err, 1e-10);
}

TEST(Grid, InterpolationReproducesSmoothFunction) {
  GridPtr g = make_grid(Coordinate::phi, Curvature::make(1.0), 64);
  auto f = GridFunction::sample(g, [](double x) { return std::cos(3 * x); });
  for (double x : {0.1, 1.7, 5.9}) EXPECT_NEAR(interpolate(f, x).real(), std::cos(3 * x), 1e-10);
}

TEST(Grid, ThetaOrthogonality) {
  GridPtr g = make_grid(Coordinate::theta, Curvature::make(1.0), 64);
  auto p1 = GridFunction::sample(g, [](double t) { return std::cos(t); });
  auto p0 = GridFunction::sample(g, [](double) { return 1.0; });
  EXPECT_NEAR(std::abs(inner(p0, p1)), 0.0, 1e-14);
  EXPECT_NEAR(weighted_norm(p1), 2.0 / 3.0, 1e-13);
}
