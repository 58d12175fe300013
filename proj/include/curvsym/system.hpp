#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "curvsym/errors.hpp"
#include "curvsym/kappa_trig.hpp"

namespace curvsym {

enum class SystemKind { KC, HO, SW, Evans };

inline std::string to_string(SystemKind k) {
  switch (k) {
    case SystemKind::KC: return "kc";
    case SystemKind::HO: return "ho";
    case SystemKind::SW: return "sw";
    case SystemKind::Evans: return "evans";
  }
  return "?";
}

inline SystemKind parse_system(const std::string& s) {
  if (s == "kc") return SystemKind::KC;
  if (s == "ho") return SystemKind::HO;
  if (s == "sw") return SystemKind::SW;
  if (s == "evans") return SystemKind::Evans;
  throw ConfigError("unknown system '" + s + "'");
}

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/**
 * One of the four curved systems with its couplings. KC and Evans carry the Coulomb
 * coupling q; HO and SW the frequency omega; SW and Evans the barriers k1, k2, k3.
 */
struct SystemSpec {
  SystemKind kind = SystemKind::KC;
  Curvature curv;
  double q = 0.0;
  double omega = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;

  double kappa() const { return curv.kappa; }
  double Omega2() const { return omega * omega - curv.kappa * curv.kappa; }
  double Omega() const { return std::sqrt(Omega2()); }
  bool central() const { return kind == SystemKind::KC || kind == SystemKind::HO; }
  /** HO-type radial problem (HO, SW) as opposed to KC-type (KC, Evans). */
  bool oscillator() const { return kind == SystemKind::HO || kind == SystemKind::SW; }

  void validate() const {
    if (!std::isfinite(curv.kappa)) throw ParamError("kappa must be finite");
    if (oscillator()) {
      if (!(omega > std::abs(curv.kappa))) throw ParamError("omega must exceed |kappa|");
    } else {
      if (!(q > 0)) throw ParamError("q must be positive");
    }
    if (!central() && !(k1 > 0 && k2 > 0 && k3 > 0)) throw ParamError("k1, k2, k3 must be positive");
  }

  /** Radial interval: (0, pi/sqrt(k)) for KC-type, (0, pi/(2 sqrt(k))) for HO-type, (0, R_cut) for k <= 0. */
  Interval radial_domain() const {
    if (curv.kappa > 0) return {0.0, oscillator() ? curv.quarter_period() : curv.r_max};
    if (!curv.has_cutoff()) throw ConfigError("kappa <= 0 requires an R_cut");
    return {0.0, curv.r_max};
  }
  Interval theta_domain() const { return {0.0, central() ? std::numbers::pi : 0.5 * std::numbers::pi}; }
  Interval phi_domain() const { return {0.0, central() ? 2.0 * std::numbers::pi : 0.5 * std::numbers::pi}; }

  /** Same system at another curvature (R_cut kept when the new kappa is not positive). */
  SystemSpec with_kappa(double kappa) const {
    SystemSpec s = *this;
    s.curv = kappa > 0 ? Curvature::make(kappa) : Curvature::make(kappa, curv.kappa > 0 ? default_cutoff() : curv.r_max);
    return s;
  }
  SystemSpec with_cutoff(double r_cut) const {
    SystemSpec s = *this;
    if (curv.kappa <= 0) s.curv = Curvature::make(curv.kappa, r_cut);
    return s;
  }

  static double default_cutoff() { return 60.0; }

  static SystemSpec kc(double kappa, double q, double r_cut = default_cutoff()) {
    SystemSpec s;
    s.kind = SystemKind::KC;
    s.curv = kappa > 0 ? Curvature::make(kappa) : Curvature::make(kappa, r_cut);
    s.q = q;
    s.validate();
    return s;
  }
  static SystemSpec ho(double kappa, double omega, double r_cut = 20.0) {
    SystemSpec s;
    s.kind = SystemKind::HO;
    s.curv = kappa > 0 ? Curvature::make(kappa) : Curvature::make(kappa, r_cut);
    s.omega = omega;
    s.validate();
    return s;
  }
  static SystemSpec sw(double kappa, double omega, double k1, double k2, double k3, double r_cut = 20.0) {
    SystemSpec s = ho(kappa, omega, r_cut);
    s.kind = SystemKind::SW;
    s.k1 = k1;
    s.k2 = k2;
    s.k3 = k3;
    s.validate();
    return s;
  }
  static SystemSpec evans(double kappa, double q, double k1, double k2, double k3, double r_cut = default_cutoff()) {
    SystemSpec s = kc(kappa, q, r_cut);
    s.kind = SystemKind::Evans;
    s.k1 = k1;
    s.k2 = k2;
    s.k3 = k3;
    s.validate();
    return s;
  }
};

/** Radial potential: -q/T (KC, Evans) or (omega_eff^2 - kappa^2)/4 T^2 (HO, SW). */
template <typename T>
T radial_potential(const SystemSpec& s, const T& r, double omega_eff) {
  if (s.oscillator()) {
    const T t = kappa_tan(s.curv, r);
    return t * t * ((omega_eff * omega_eff - s.kappa() * s.kappa()) / 4.0);
  }
  return -s.q / kappa_tan(s.curv, r);
}

template <typename T>
T radial_potential(const SystemSpec& s, const T& r) {
  return radial_potential(s, r, s.omega);
}

}  // namespace curvsym
