// curvsym command-line driver: verify, spectrum, states, classical, sweep.
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "curvsym/verify.hpp"

namespace {

using namespace curvsym;

struct RunConfig {
  std::string system = "kc";
  std::vector<std::string> kappa{"-0.1", "0", "0.1"};
  std::string kappa_range = "1e-7..1";
  double q = 2.0, omega = 2.0, k1 = 0.3, k2 = 0.4, k3 = 0.6;
  int grid_n = 128;
  double r_cut = 0.0;
  double tol = 1e-8;
  double spectrum_tol = 1e-6;
  std::uint64_t seed = 1;
  std::string out = ".";
  double t_end = 100.0;
  int n_max = 5;
  int points_per_decade = 2;
};

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::vector<double> parse_kappas(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const std::string& item : items) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad kappa value '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("kappa list is empty");
  return out;
}

VerifyConfig to_verify(const RunConfig& rc) {
  VerifyConfig c;
  c.kind = parse_system(rc.system);
  c.kappas = parse_kappas(rc.kappa);
  c.q = rc.q;
  c.omega = rc.omega;
  c.k1 = rc.k1;
  c.k2 = rc.k2;
  c.k3 = rc.k3;
  c.grid_n = rc.grid_n;
  c.r_cut = rc.r_cut;
  c.tol = rc.tol;
  c.seed = rc.seed;
  c.t_end = rc.t_end;
  c.validate();
  if (rc.n_max < 0) throw ConfigError("n-max must be non-negative");
  if (!(rc.spectrum_tol > 0)) throw ConfigError("spectrum tolerance must be positive");
  for (double k : c.kappas) system_for(c, k, 1.0).validate();
  return c;
}

std::filesystem::path out_dir(const RunConfig& rc) {
  std::filesystem::path p(rc.out);
  std::filesystem::create_directories(p);
  return p;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + p.string());
  return f;
}

std::string file_tag(const VerifyConfig& c, double k) { return to_string(c.kind) + "_kappa" + fmt_param(k); }

bool kepler_type(const VerifyConfig& c) { return c.kind == SystemKind::KC || c.kind == SystemKind::Evans; }

// ---------------------------------------------------------------- verify

int cmd_verify(const RunConfig& rc) {
  const VerifyConfig c = to_verify(rc);
  const VerificationReport rep = verify_system(c);
  const auto path = out_dir(rc) / ("verify_" + to_string(c.kind) + ".json");
  write_json(rep, path.string());
  std::cout << rep.rows.size() - rep.failures() << "/" << rep.rows.size() << " identities pass; report " << path.string() << "\n";
  for (const auto& r : rep.rows)
    if (!r.pass) std::cout << "FAIL " << r.identity << " residual " << fmt(r.residual) << " tol " << fmt(r.tol) << "\n";
  return rep.pass() ? 0 : 1;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const RunConfig& rc) {
  const VerifyConfig c = to_verify(rc);
  const auto dir = out_dir(rc);
  bool ok = true;
  for (double k : c.kappas) {
    const SystemSpec s = system_for(c, k, cutoff_or(c, kepler_type(c) ? 200.0 : 20.0));
    const bool central = s.central();
    const double lmin = central ? 0.0 : s.k1 + s.k2 + s.k3;
    const int step = (!central && s.kind == SystemKind::SW) ? 2 : 1;
    std::vector<OracleLevel> even, odd;
    if (s.kind == SystemKind::HO) {
      even = radial_levels(s, 0, rc.n_max / 2 + 1);
      if (rc.n_max >= 1) odd = radial_levels(s, 1, (rc.n_max - 1) / 2 + 1);
    } else {
      even = radial_levels(s, lmin, rc.n_max + 1);
    }
    auto f = open_out(dir / ("spectrum_" + file_tag(c, k) + ".csv"));
    f << "n,E_analytic,E_numeric,|Δ|,admissible\n";
    for (int i = 0; i <= rc.n_max; ++i) {
      const double n = central ? double(i) : lmin + step * i;
      const OracleLevel& L = s.kind == SystemKind::HO ? (i % 2 ? odd[i / 2] : even[i / 2]) : even[i];
      const bool adm = system_admissible(s, n);
      const double ea = adm ? system_energy(s, n) : NAN;  // no bound state to assign an energy to
      const double en = L.converged ? L.energy : NAN;
      const double d = std::abs(ea - en);
      if (adm && !(d <= rc.spectrum_tol)) ok = false;
      if (!adm && L.converged && s.kappa() <= 0) ok = false;
      f << fmt_param(n) << "," << fmt(ea) << "," << fmt(en) << "," << fmt(L.converged ? d : NAN) << "," << (adm ? 1 : 0) << "\n";
    }
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- states

int cmd_states(const RunConfig& rc) {
  const VerifyConfig c = to_verify(rc);
  const auto dir = out_dir(rc);
  const int samples = 200;
  for (double k : c.kappas) {
    const SystemSpec s = system_for(c, k, cutoff_or(c, kepler_type(c) ? 30.0 : 6.0));
    std::vector<std::pair<std::string, ProductState>> states;
    double theta0 = std::numbers::pi / 3.0, phi0 = std::numbers::pi / 4.0;
    if (s.central()) {
      const std::vector<std::array<int, 3>> qn = s.kind == SystemKind::KC
                                                     ? std::vector<std::array<int, 3>>{{0, 0, 0}, {1, 0, 0}, {1, 1, 1}, {2, 1, 0}}
                                                     : std::vector<std::array<int, 3>>{{0, 0, 0}, {1, 1, 1}, {2, 0, 0}, {2, 2, 2}};
      for (auto [n, l, m] : qn)
        if (system_admissible(s, n))
          states.push_back({"n" + std::to_string(n) + "l" + std::to_string(l) + "m" + std::to_string(m), build_central_state(s, n, l, m)});
    } else {
      theta0 = std::numbers::pi / 4.0;
      phi0 = std::numbers::pi / 8.0;
      for (auto [p, g, h] : {std::array<int, 3>{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) {
        const QuantumNumbers qn = shifted_quantum_numbers(s, p, g, h);
        if (!system_admissible(s, qn.n)) continue;
        states.push_back({"p" + std::to_string(p) + "g" + std::to_string(g) + "h" + std::to_string(h),
                          p + g + h == 0 ? highest_weight(s, qn.n) : build_superintegrable_state(s, p, g, h)});
      }
    }
    const double hi = s.kappa() > 0 ? s.radial_domain().hi : s.curv.r_max;
    auto f = open_out(dir / ("states_" + file_tag(c, k) + ".csv"));
    f << "r";
    for (const auto& [label, psi] : states) f << ",re_" << label << ",im_" << label;
    f << "\n";
    std::vector<cplx> angular;
    for (const auto& st : states) angular.push_back(st.second.scale * st.second.polar.value(theta0) * st.second.azimuthal.value(phi0));
    for (int i = 0; i < samples; ++i) {
      const double r = hi * (i + 0.5) / samples;
      f << fmt(r);
      for (size_t j = 0; j < states.size(); ++j) {
        const cplx v = states[j].second.radial.value(r) * angular[j];
        f << "," << fmt(v.real()) << "," << fmt(v.imag());
      }
      f << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------- classical

int cmd_classical(const RunConfig& rc) {
  const VerifyConfig c = to_verify(rc);
  const auto dir = out_dir(rc);
  bool ok = true;
  for (double k : c.kappas) {
    const SystemSpec s = system_for(c, k, cutoff_or(c, 1e6));
    const PhasePoint x0 = verify_detail::flow_start(s);
    const Trajectory tr = flow(s, x0, c.t_end);
    const ClassicalObservable sp = observable(s, "S+"), sm = observable(s, "S-");
    const bool ladder = s.oscillator() && s.kappa() > 0 && frozen_at(s, x0).kappa_Ebar > 0;
    const ClassicalObservable ph = observable(s, ladder ? "Lambda+" : "S+");
    const PolarSeries phase = polar_series(s, ph, tr);
    const double H0 = hamiltonian(s, x0);
    const cplx sp0 = sp(s, x0), sm0 = sm(s, x0);
    double dH = 0, dsp = 0, dsm = 0;
    auto f = open_out(dir / ("classical_" + file_tag(c, k) + ".csv"));
    f << "t,r,p_r,theta,p_theta,phi,p_phi,H,|S+|,|S-|,phase_" << ph.label << ",drift_H,drift_S+,drift_S-\n";
    for (size_t i = 0; i < tr.t.size(); ++i) {
      const PhasePoint& x = tr.x[i];
      const double H = hamiltonian(s, x);
      const cplx a = sp(s, x), b = sm(s, x);
      dH = std::max(dH, std::abs(H - H0) / std::max(std::abs(H0), 1e-300));
      dsp = std::max(dsp, std::abs(a - sp0) / std::max(std::abs(sp0), 1e-300));
      dsm = std::max(dsm, std::abs(b - sm0) / std::max(std::abs(sm0), 1e-300));
      f << fmt(tr.t[i]) << "," << fmt(x.r) << "," << fmt(x.p_r) << "," << fmt(x.theta) << "," << fmt(x.p_theta) << "," << fmt(x.phi) << ","
        << fmt(x.p_phi) << "," << fmt(H) << "," << fmt(std::abs(a)) << "," << fmt(std::abs(b)) << "," << fmt(phase.phase[i]) << ","
        << fmt(dH) << "," << fmt(dsp) << "," << fmt(dsm) << "\n";
    }
    if (!(std::max({dH, dsp, dsm}) < 1e-5)) ok = false;
    std::cout << to_string(s.kind) << kappa_tag(k) << " drift H " << fmt(dH) << " S+ " << fmt(dsp) << " S- " << fmt(dsm) << "\n";
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- sweep

std::pair<double, double> parse_range(const std::string& text) {
  const auto pos = text.find("..");
  if (pos == std::string::npos) throw ConfigError("kappa range must look like lo..hi");
  try {
    const double lo = std::stod(text.substr(0, pos)), hi = std::stod(text.substr(pos + 2));
    if (!(lo > 0 && hi > lo)) throw ConfigError("kappa range needs 0 < lo < hi");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ConfigError("bad kappa range '" + text + "'");
  }
}

struct Continuity {
  double energy = 0, coefficient = 0, classical = 0;
};

Continuity continuity(const VerifyConfig& c, double k, int n_max, const GridPtr& g, const std::vector<PhasePoint>& pts) {
  const SystemSpec s = system_for(c, k, 30.0), s0 = system_for(c, 0.0, 30.0);
  Continuity out;
  // closed forms as functions of kappa; normalizability is not required here
  auto energy = [](const SystemSpec& x, double n) {
    return x.oscillator() ? ho_energy_expanded(x, n) : x.kappa() * n * (n + 2.0) - x.q * x.q / (4.0 * (n + 1.0) * (n + 1.0));
  };
  for (int n = 0; n <= n_max; ++n) {
    const double nn = s.central() ? double(n) : c.k1 + c.k2 + c.k3 + n;
    out.energy = std::max(out.energy, std::abs(energy(s, nn) - energy(s0, nn)));
  }
  for (int l = 0; l <= 4; ++l)
    out.coefficient = std::max(out.coefficient, verify_detail::coefficient_gap(radial_hamiltonian(s, l), radial_hamiltonian(s0, l), g));
  for (const auto& x : pts) out.classical = std::max(out.classical, std::abs(hamiltonian(s, x) - hamiltonian(s0, x)));
  return out;
}

int cmd_sweep(const RunConfig& rc) {
  const VerifyConfig c = to_verify(rc);
  const auto [lo, hi] = parse_range(rc.kappa_range);
  if (rc.points_per_decade < 1) throw ConfigError("points-per-decade must be positive");
  if (c.kind != SystemKind::KC && c.kind != SystemKind::Evans && !(c.omega > hi)) throw ConfigError("omega must exceed the largest |kappa|");
  const int steps = std::max(1, int(std::lround(std::log10(hi / lo) * rc.points_per_decade)));
  std::vector<double> ks;
  for (int i = 0; i <= steps; ++i) ks.push_back(lo * std::pow(hi / lo, double(i) / steps));
  const SystemSpec s0 = system_for(c, 0.0, 30.0);
  const GridPtr g = make_grid_on(Coordinate::r, s0.curv, 0.0, 1.0, 64);
  std::mt19937_64 rng(c.seed);
  std::vector<PhasePoint> pts;
  for (int i = 0; i < 20; ++i) {
    PhasePoint x = random_phase_point(s0, rng);
    x.r = 0.1 + 0.9 * (x.r / 5.0);
    pts.push_back(x);
  }
  auto f = open_out(out_dir(rc) / ("sweep_" + to_string(c.kind) + ".csv"));
  f << "kappa,energy_residual,coefficient_residual,classical_residual\n";
  bool monotone = true;
  for (double sign : {-1.0, 1.0}) {
    Continuity prev;
    for (double a : ks) {
      const double k = sign * a;
      const Continuity cur = continuity(c, k, rc.n_max, g, pts);
      if (cur.energy < prev.energy || cur.coefficient < prev.coefficient || cur.classical < prev.classical) monotone = false;
      prev = cur;
      f << fmt(k) << "," << fmt(cur.energy) << "," << fmt(cur.coefficient) << "," << fmt(cur.classical) << "\n";
    }
  }
  std::cout << "continuity residuals " << (monotone ? "monotone" : "NOT monotone") << " in |kappa|\n";
  return monotone ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig rc;
  CLI::App app{"Curved-space superintegrable systems: operator identities, spectra, states and classical checks"};
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--system", rc.system, "kc, ho, sw or evans")->check(CLI::IsMember({"kc", "ho", "sw", "evans"}));
  app.add_option("--kappa", rc.kappa, "comma-separated curvatures")->delimiter(',');
  app.add_option("--q", rc.q, "Coulomb strength");
  app.add_option("--omega", rc.omega, "oscillator frequency");
  app.add_option("--k1", rc.k1);
  app.add_option("--k2", rc.k2);
  app.add_option("--k3", rc.k3);
  app.add_option("--grid-n", rc.grid_n, "collocation nodes");
  app.add_option("--r-cut", rc.r_cut, "radial cutoff for kappa <= 0 (0 selects per-check defaults)");
  app.add_option("--tol", rc.tol, "operator identity tolerance");
  app.add_option("--spectrum-tol", rc.spectrum_tol, "spectrum tolerance");
  app.add_option("--seed", rc.seed, "seed for random phase points");
  app.add_option("--out", rc.out, "output directory");
  app.add_option("--t-end", rc.t_end, "trajectory length");
  app.add_option("--n-max", rc.n_max, "highest level for spectrum and sweep");
  app.add_option("--kappa-range", rc.kappa_range, "sweep range lo..hi over |kappa|");
  app.add_option("--points-per-decade", rc.points_per_decade, "sweep density");

  int (*handler)(const RunConfig&) = nullptr;
  app.add_subcommand("verify", "check every identity and write a JSON report")->callback([&] { handler = cmd_verify; });
  app.add_subcommand("spectrum", "closed-form against numerical energies, CSV per kappa")->callback([&] { handler = cmd_spectrum; });
  app.add_subcommand("states", "sampled eigenfunctions, CSV per kappa")->callback([&] { handler = cmd_states; });
  app.add_subcommand("classical", "trajectory with conserved quantities, CSV per kappa")->callback([&] { handler = cmd_classical; });
  app.add_subcommand("sweep", "flat-limit continuity residuals over a kappa range")->callback([&] { handler = cmd_sweep; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return handler(rc);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ParamError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
