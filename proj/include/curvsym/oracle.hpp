#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "curvsym/errors.hpp"
#include "curvsym/kappa_trig.hpp"
#include "curvsym/operators.hpp"
#include "curvsym/report.hpp"
#include "curvsym/system.hpp"

// Independent eigensolver: Lagrange-mesh discretization at Gauss-Jacobi nodes. Uses only the
// kappa-trig layer and the system parameters, never the factorization catalog.

namespace curvsym {

using RealFn = std::function<RealSeries(const RealSeries&)>;

/** Gauss-Jacobi rule for (1-t)^alpha (1+t)^beta on (-1, 1), nodes ascending. */
struct GaussJacobi {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::VectorXd barycentric;
};

/** Golub-Welsch via the symmetric Jacobi matrix. */
inline GaussJacobi gauss_jacobi(int n, double alpha, double beta) {
  if (n < 2) throw ConfigError("gauss_jacobi needs n >= 2");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw ConfigError("Jacobi exponents must exceed -1");
  Eigen::VectorXd diag(n), off(n);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag[k] = k == 0 ? (beta - alpha) / (ab + 2.0) : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    const int m = k + 1;
    const double t = 2.0 * m + ab;
    const double b2 = m == 1 ? 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
                             : 4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (t * t * (t + 1.0) * (t - 1.0));
    off[k] = std::sqrt(b2);
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    J(k, k) = diag[k];
    if (k + 1 < n) J(k, k + 1) = J(k + 1, k) = off[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
  const double log_mu0 = (ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0);
  GaussJacobi g;
  g.nodes = es.eigenvalues();
  // Christoffel numbers 1 / sum_k p_k(t)^2 over orthonormal p_k keep relative accuracy at the ends
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = g.nodes[i];
    double prev = 0.0, cur = std::exp(-0.5 * log_mu0), sum = cur * cur;
    for (int k = 0; k + 1 < n; ++k) {
      const double next = ((t - diag[k]) * cur - (k > 0 ? off[k - 1] : 0.0) * prev) / off[k];
      prev = cur;
      cur = next;
      sum += cur * cur;
    }
    g.weights[i] = 1.0 / sum;
  }
  // barycentric weights 1/prod(t_i - t_j), scaled by the largest magnitude
  Eigen::VectorXd logw(n);
  Eigen::VectorXd sgn(n);
  for (int i = 0; i < n; ++i) {
    double lw = 0.0, sg = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = g.nodes[i] - g.nodes[j];
      lw -= std::log(std::abs(d));
      if (d < 0) sg = -sg;
    }
    logw[i] = lw;
    sgn[i] = sg;
  }
  const double mx = logw.maxCoeff();
  g.barycentric.resize(n);
  for (int i = 0; i < n; ++i) g.barycentric[i] = sgn[i] * std::exp(logw[i] - mx);
  return g;
}

/**
 * -u'' + W u = lambda u on (lo, hi). The solution branch is fixed by the gauge
 * u = (x - lo)^gamma_left (hi - x)^gamma_right v with v smooth, the exponents being the
 * local indicial roots of W. The reported value is lambda + offset; the original unknown is u / back.
 */
struct SelfAdjointProblem {
  Coordinate coordinate = Coordinate::r;
  Interval domain;
  double gamma_left = 0;
  double gamma_right = 0;
  RealFn W;
  double offset = 0;
  RealFn back;
  std::string label;
};

namespace detail {

template <typename T>
T log_rho(const SelfAdjointProblem& p, const T& x) {
  return log(x - p.domain.lo) * p.gamma_left + log(p.domain.hi - x) * p.gamma_right;
}
inline double log_rho(const SelfAdjointProblem& p, double x) {
  return p.gamma_left * std::log(x - p.domain.lo) + p.gamma_right * std::log(p.domain.hi - x);
}

/** W - rho''/rho at x. */
inline double residual_potential(const SelfAdjointProblem& p, double x) {
  const double a = x - p.domain.lo, b = p.domain.hi - x;
  const double gl = p.gamma_left, gr = p.gamma_right;
  const double rho2 = gl * (gl - 1.0) / (a * a) + gr * (gr - 1.0) / (b * b) - 2.0 * gl * gr / (a * b);
  return p.W(RealSeries::variable(x, 0)).value() - rho2;
}

}  // namespace detail

/** Discretized problem at one resolution. */
struct Discretization {
  GaussJacobi rule;
  Eigen::VectorXd x;       // physical nodes
  Eigen::VectorXd scale;   // sqrt(w_i f_i)
  Eigen::MatrixXd H;       // symmetric matrix
};

inline constexpr double kSymmetryTolerance = 1e-12;

/** Builds the symmetric Lagrange-mesh matrix with n nodes. */
inline Discretization discretize(const SelfAdjointProblem& p, int n) {
  // Jacobi exponents 2 gamma - 1 absorb simple poles of W - rho''/rho into a smooth f
  const double a = 2.0 * p.gamma_right - 1.0, b = 2.0 * p.gamma_left - 1.0;
  if (a == b && n % 2 == 1) ++n;  // keep the midpoint off the node set
  Discretization d;
  d.rule = gauss_jacobi(n, a, b);
  const double lo = p.domain.lo, h = p.domain.hi - p.domain.lo;
  d.x.resize(n);
  d.scale.resize(n);
  Eigen::VectorXd wf(n), wres(n);
  for (int i = 0; i < n; ++i) {
    const double t = d.rule.nodes[i];
    const double x = lo + 0.5 * h * (t + 1.0);
    d.x[i] = x;
    const double lr = detail::log_rho(p, x);
    const double lw = a * std::log1p(-t) + b * std::log1p(t);
    wf[i] = d.rule.weights[i] * std::exp(2.0 * lr - lw);
    d.scale[i] = std::sqrt(wf[i]);
    wres[i] = detail::residual_potential(p, x);
    if (!std::isfinite(wf[i]) || !std::isfinite(wres[i])) throw ConvergenceError("non-finite mesh data in " + p.label);
  }
  Eigen::MatrixXd D(n, n);
  const auto& t = d.rule.nodes;
  const auto& lam = d.rule.barycentric;
  for (int k = 0; k < n; ++k) {
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      D(k, i) = lam[i] / lam[k] / (t[k] - t[i]);
      diag -= D(k, i);
    }
    D(k, k) = diag;
  }
  const double s = 4.0 / (h * h);
  Eigen::MatrixXd K = D.transpose() * wf.asDiagonal() * D;
  d.H.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d.H(i, j) = s * K(i, j) / (d.scale[i] * d.scale[j]);
  const double asym = (d.H - d.H.transpose()).cwiseAbs().maxCoeff() / std::max(1.0, d.H.cwiseAbs().maxCoeff());
  if (asym > kSymmetryTolerance) throw ConvergenceError("mesh matrix not symmetric in " + p.label);
  d.H = 0.5 * (d.H + d.H.transpose());
  d.H.diagonal() += wres;
  return d;
}

/** Eigenvector of a discretized problem as a smooth function u(x) = rho(x) v(x). */
inline Function1D mesh_function(const SelfAdjointProblem& p, const Discretization& d, const Eigen::VectorXd& v, bool transformed_back) {
  const Eigen::VectorXd t = d.rule.nodes, lam = d.rule.barycentric;
  const double lo = p.domain.lo, h = p.domain.hi - p.domain.lo;
  SelfAdjointProblem prob = p;
  return make_function(
      [t, lam, v, lo, h, prob, transformed_back](const auto& x) {
        const auto tt = (x - lo) * (2.0 / h) - 1.0;
        auto num = tt * 0.0, den = tt * 0.0;
        for (int i = 0; i < t.size(); ++i) {
          const auto c = lam[i] / (tt - t[i]);
          num = num + c * v[i];
          den = den + c;
        }
        auto out = num / den * exp(detail::log_rho(prob, x));
        if (transformed_back) out = out / prob.back(x);
        return out;
      },
      prob.label + " eigenvector");
}

/** Converged eigenpairs. */
struct EigenResult {
  std::vector<double> values;         // physical E = lambda + offset
  std::vector<Function1D> vectors;    // original unknown (u / back)
  std::vector<Function1D> liouville;  // u
  std::vector<double> tail_mass;      // fraction of u^2 in the outer 5% of the domain
  int nodes = 0;
  double max_drift = 0;
};

namespace detail {

inline double tail_fraction(const Discretization& d, const Eigen::VectorXd& u, const Interval& dom) {
  double total = 0.0, tail = 0.0;
  const double cut = dom.lo + 0.95 * (dom.hi - dom.lo);
  for (int i = 0; i < u.size(); ++i) {
    const double m = u[i] * u[i];
    total += m;
    if (d.x[i] > cut) tail += m;
  }
  return total > 0 ? tail / total : 1.0;
}

}  // namespace detail

/**
 * Lowest k eigenpairs; resolution doubles until every value moves by < rel_tol relative.
 * ConvergenceError when n_max is reached first.
 */
inline EigenResult eigensolve(const SelfAdjointProblem& p, int k, int n0 = 48, int n_max = 768, double rel_tol = 1e-8) {
  if (k < 1) throw ConfigError("eigensolve needs k >= 1");
  int n = std::max(n0, 4 * k + 4);
  Eigen::VectorXd prev;
  for (; n <= n_max; n *= 2) {
    const Discretization d = discretize(p, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.H);
    if (es.info() != Eigen::Success) throw ConvergenceError("eigen decomposition failed for " + p.label);
    Eigen::VectorXd vals = es.eigenvalues().head(k);
    for (int i = 0; i < k; ++i) {
      const Eigen::VectorXd u = es.eigenvectors().col(i);
      vals[i] = u.dot(d.H * u) / u.squaredNorm();  // Rayleigh quotient
    }
    if (prev.size() == k) {
      double drift = 0.0;
      bool ok = true;
      for (int i = 0; i < k; ++i) {
        const double dv = std::abs(vals[i] - prev[i]);
        drift = std::max(drift, dv / std::max(1.0, std::abs(vals[i])));
        if (dv > rel_tol * std::max(1.0, std::abs(vals[i]))) ok = false;
      }
      if (ok) {
        EigenResult r;
        r.nodes = static_cast<int>(d.x.size());
        r.max_drift = drift;
        for (int i = 0; i < k; ++i) {
          Eigen::VectorXd u = es.eigenvectors().col(i);
          // sign: largest component positive
          Eigen::Index imax;
          u.cwiseAbs().maxCoeff(&imax);
          if (u[imax] < 0) u = -u;
          const Eigen::VectorXd v = u.cwiseQuotient(d.scale);
          r.values.push_back(vals[i] + p.offset);
          r.liouville.push_back(mesh_function(p, d, v, false));
          r.vectors.push_back(mesh_function(p, d, v, true));
          r.tail_mass.push_back(detail::tail_fraction(d, u, p.domain));
        }
        return r;
      }
    }
    prev = vals;
  }
  throw ConvergenceError("no convergence up to " + std::to_string(n_max) + " nodes for " + p.label);
}

// ---------------------------------------------------------------- transforms

namespace detail {

inline RealFn kappa_sin_fn(const Curvature& cv) {
  return [cv](const RealSeries& r) { return kappa_sin(cv, r); };
}

}  // namespace detail

/**
 * Radial problem: u = S R gives -u'' + [l(l+1)/S^2 + V] u = (E + kappa) u.
 * Exponents l + 1 at the origin; at the far end l + 1 (KC-type, kappa > 0),
 * 1/2 + omega/2k (oscillator, kappa > 0) or 1 (Dirichlet at R_cut).
 */
inline SelfAdjointProblem liouville_transform(const SystemSpec& s, double ell) {
  if (ell < 0) throw ParamError("liouville_transform needs l >= 0");
  const Curvature cv = s.curv;
  const double k = s.kappa();
  const bool osc = s.oscillator();
  const double q = s.q, omega2 = s.Omega2();
  SelfAdjointProblem p;
  p.coordinate = Coordinate::r;
  if (k > 0)
    p.domain = {0.0, osc ? cv.quarter_period() : cv.r_max};
  else {
    if (!cv.has_cutoff()) throw ConfigError("kappa <= 0 requires an R_cut");
    p.domain = {0.0, cv.r_max};
  }
  p.W = [cv, ell, osc, q, omega2](const RealSeries& r) {
    const RealSeries S = kappa_sin(cv, r);
    const RealSeries T = kappa_tan(cv, r);
    const RealSeries V = osc ? T * T * (omega2 / 4.0) : -q / T;
    return ell * (ell + 1.0) / (S * S) + V;
  };
  p.offset = -k;
  p.back = detail::kappa_sin_fn(cv);
  p.gamma_left = ell + 1.0;
  if (k > 0)
    p.gamma_right = osc ? 0.5 + s.omega / (2.0 * k) : ell + 1.0;
  else
    p.gamma_right = 1.0;  // Dirichlet at R_cut
  p.label = "radial " + to_string(s.kind) + " l=" + std::to_string(ell);
  return p;
}

/**
 * Polar problem at fixed m: u = sqrt(sin) P gives
 * -u'' + [(m^2 - 1/4)/sin^2 + k3(k3-1)/cos^2 - 1/4] u = l(l+1) u.
 * Exponents |m| + 1/2 at theta = 0; |m| + 1/2 at pi (central) or k3 at pi/2.
 */
inline SelfAdjointProblem liouville_transform_theta(const SystemSpec& s, double m) {
  const bool central = s.central();
  const double c3 = central ? 0.0 : s.k3 * (s.k3 - 1.0);
  const double am = std::abs(m);
  SelfAdjointProblem p;
  p.coordinate = Coordinate::theta;
  p.domain = {0.0, central ? std::numbers::pi : 0.5 * std::numbers::pi};
  p.W = [am, c3](const RealSeries& x) {
    const RealSeries sn = sin(x), cs = cos(x);
    return (am * am - 0.25) / (sn * sn) + c3 / (cs * cs) - 0.25;
  };
  p.offset = 0.0;
  p.back = [](const RealSeries& x) { return sqrt(sin(x)); };
  p.gamma_left = am + 0.5;
  p.gamma_right = central ? am + 0.5 : s.k3;
  p.label = "theta m=" + std::to_string(m);
  return p;
}

/**
 * Azimuthal problem on the octant: -u'' + [k2(k2-1)/sin^2 + k1(k1-1)/cos^2] u = m^2 u,
 * exponents k2 at 0 and k1 at pi/2.
 */
inline SelfAdjointProblem liouville_transform_phi(const SystemSpec& s) {
  if (s.central()) throw ParamError("azimuthal oracle needs SW or Evans");
  const double a = s.k2 * (s.k2 - 1.0), b = s.k1 * (s.k1 - 1.0);
  SelfAdjointProblem p;
  p.coordinate = Coordinate::phi;
  p.domain = {0.0, 0.5 * std::numbers::pi};
  p.W = [a, b](const RealSeries& x) {
    const RealSeries sn = sin(x), cs = cos(x);
    return a / (sn * sn) + b / (cs * cs);
  };
  p.offset = 0.0;
  p.back = [](const RealSeries& x) { return x * 0.0 + 1.0; };
  p.gamma_left = s.k2;
  p.gamma_right = s.k1;
  p.label = "phi";
  return p;
}

// ---------------------------------------------------------------- radial spectra with truncation control

/** One oracle eigenvalue with its truncation diagnostics. */
struct OracleLevel {
  double energy = 0;
  double tail_mass = 0;
  double r_cut = 0;
  bool converged = false;
  Function1D vector;
};

inline constexpr double kOracleTailTolerance = 1e-10;

/**
 * Lowest k radial levels at angular momentum l. For kappa <= 0 the cutoff grows by 1.5 per pass
 * until each level has outer-5% mass below 1e-10; levels that never localize stay unconverged.
 */
inline std::vector<OracleLevel> radial_levels(const SystemSpec& s, double ell, int k, double r_cut_max = 3000.0) {
  std::vector<OracleLevel> out(k);
  SystemSpec t = s;
  for (int pass = 0; pass < 40; ++pass) {
    EigenResult r;
    try {
      r = eigensolve(liouville_transform(t, ell), k);
    } catch (const ConvergenceError&) {
      // delocalized levels stop resolving on long cutoffs
      if (pass == 0)
        for (auto& lv : out) lv = {std::numeric_limits<double>::quiet_NaN(), 1.0, t.curv.r_max, false, {}};
      break;
    }
    bool all = true;
    for (int i = 0; i < k; ++i) {
      if (out[i].converged) continue;
      if (t.kappa() > 0 || r.tail_mass[i] < kOracleTailTolerance) {
        out[i] = {r.values[i], r.tail_mass[i], t.curv.r_max, true, r.vectors[i]};
      } else {
        out[i] = {r.values[i], r.tail_mass[i], t.curv.r_max, false, r.vectors[i]};
        all = false;
      }
    }
    if (all || t.kappa() > 0) break;
    const double next = t.curv.r_max * 1.5;
    if (next > r_cut_max) break;
    t = t.with_cutoff(next);
  }
  return out;
}

// ---------------------------------------------------------------- comparison

/** Per-entry absolute deviations against tol; relative deviations are kept on the rows. */
inline VerificationReport compare_spectrum(const std::vector<double>& analytic, const std::vector<double>& numeric, double tol,
                                           const std::string& label = "E") {
  if (analytic.size() != numeric.size()) throw ConfigError("compare_spectrum needs equal lengths");
  VerificationReport rep;
  rep.title = "spectrum comparison";
  for (size_t i = 0; i < analytic.size(); ++i) {
    const double d = std::abs(analytic[i] - numeric[i]);
    auto& row = rep.add(label + "[" + std::to_string(i) + "]", "closed-form level vs independent eigensolve", d, tol);
    row.relative = d / std::max(1e-300, std::abs(analytic[i]));
  }
  return rep;
}

}  // namespace curvsym
