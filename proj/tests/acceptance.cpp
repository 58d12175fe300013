// Acceptance run: one PASS/FAIL line per criterion with its runtime.
// Usage: acceptance [--xfail N]... ; exit 0 iff every criterion not listed passes and every listed one fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "curvsym/verify.hpp"

namespace {

using namespace curvsym;

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;  // failing rows and findings
};

Outcome from_report(const VerificationReport& rep, bool want_findings = false) {
  Outcome o;
  o.pass = rep.pass() && !rep.rows.empty();
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu/%zu rows pass, max residual %.3g", rep.rows.size() - rep.failures(), rep.rows.size(), rep.max_residual());
  o.summary = buf;
  for (const auto& r : rep.rows)
    if (!r.pass) {
      std::snprintf(buf, sizeof buf, "residual %.3g > tol %.3g: ", r.residual, r.tol);
      o.details.push_back(buf + r.identity);
    }
  if (want_findings)
    for (const auto& f : rep.findings) o.details.push_back("finding: " + f);
  return o;
}

const std::vector<double> kStandardKappas{-0.1, 0.0, 0.1};

Outcome criterion1() { return from_report(trig_suite({-1.0, -0.1, 0.0, 0.1, 1.0}, 64)); }

Outcome criterion2() {
  VerificationReport rep;
  for (double k : kStandardKappas) rep.append(kc_operator_suite(SystemSpec::kc(k, 2.0, 60.0), 128, 1e-8, 4));
  return from_report(rep);
}

Outcome criterion3() {
  VerificationReport rep;
  for (double k : {-0.01, 0.0, 0.1}) rep.append(kc_spectrum_suite(SystemSpec::kc(k, 2.0, 200.0), 5, 1e-6));
  return from_report(rep);
}

Outcome criterion4() {
  const SystemSpec s = SystemSpec::kc(-0.01, 2.0, 400.0);
  Outcome o = from_report(kc_admissibility_suite(s, 5));
  std::set<int> both;
  for (int n = 0; n <= 5; ++n) {
    const bool ineq = kc_admissibility_forms(s, n).cutoff_form;
    const bool normalizable = radial_tail_fraction(s, highest_weight_radial(s, n)) < kTailTolerance;
    if (ineq && normalizable) both.insert(n);
  }
  const bool exact = both == std::set<int>{0, 1, 2};
  if (!exact) o.details.push_back("admissible set differs from {0, 1, 2}");
  o.pass = o.pass && exact;
  o.summary += exact ? "; admissible set {0, 1, 2}" : "; admissible set wrong";
  return o;
}

Outcome criterion5() {
  VerificationReport rep;
  for (double k : {-0.05, 0.1}) rep.append(ho_spectrum_suite(SystemSpec::ho(k, 2.0, 20.0), 5, 1e-6));
  Outcome o = from_report(rep, true);
  size_t recorded = 0;
  for (const auto& f : rep.findings) recorded += f.find("3 kappa/2") != std::string::npos ? 1 : 0;
  if (recorded != 2) {
    o.pass = false;
    o.details.push_back("constant-offset finding missing from the report");
  }
  return o;
}

Outcome criterion6() {
  VerificationReport rep;
  for (double k : kStandardKappas) {
    const SystemSpec s = SystemSpec::ho(k, 2.0, 20.0);
    rep.append(ho_operator_suite(s, 128, 1e-7, 4));
    rep.append(ho_state_suite(s));
  }
  return from_report(rep);
}

Outcome criterion7() {
  VerificationReport rep;
  for (double k : kStandardKappas) {
    rep.append(superintegrable_suite(SystemSpec::sw(k, 2.0, 0.3, 0.4, 0.6, 10.0), 1e-8, 2));
    rep.append(superintegrable_suite(SystemSpec::evans(k, 2.0, 0.3, 0.4, 0.6, 60.0), 1e-8, 2));
  }
  return from_report(rep);
}

Outcome criterion8() {
  VerificationReport rep;
  for (double k : kStandardKappas) {
    rep.append(classical_suite(SystemSpec::kc(k, 2.0, 60.0), 1));
    rep.append(classical_suite(SystemSpec::ho(k, 2.0, 20.0), 1));
    rep.append(classical_suite(SystemSpec::sw(k, 2.0, 0.3, 0.4, 0.6, 20.0), 1));
    rep.append(classical_suite(SystemSpec::evans(k, 2.0, 0.3, 0.4, 0.6, 60.0), 1));
  }
  const VerificationReport ho2 = classical_suite(SystemSpec::ho(0.2, 2.0, 20.0), 1);
  bool rate = false;
  for (const auto& r : ho2.rows) rate = rate || r.identity.find("phase rate") != std::string::npos;
  rep.append(ho2);
  Outcome o = from_report(rep);
  if (!rate) {
    o.pass = false;
    o.details.push_back("no phase-rate row for kappa = 0.2");
  }
  return o;
}

Outcome criterion9() { return from_report(flat_limit_suite(1, 1e-5, 5), true); }

Outcome criterion10() {
  Outcome o;
  o.pass = true;
  for (SystemKind kind : {SystemKind::KC, SystemKind::HO, SystemKind::SW, SystemKind::Evans}) {
    VerifyConfig c;
    c.kind = kind;
    c.seed = 7;
    const std::string a = dump(verify_system(c)), b = dump(verify_system(c));
    if (a != b) {
      o.pass = false;
      o.details.push_back(to_string(kind) + " reports differ");
    }
  }
  o.summary = o.pass ? "reports byte-identical for kc, ho, sw, evans" : "reports differ";
  return o;
}

struct Criterion {
  int id;
  double budget_s;  // runtime bound; 0 means none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> xfail;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--xfail" && i + 1 < argc) {
      xfail.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--xfail N]...\n");
      return 2;
    }
  }
  const std::vector<Criterion> criteria{
      {1, 1, criterion1},   {2, 10, criterion2}, {3, 30, criterion3}, {4, 10, criterion4}, {5, 30, criterion5},
      {6, 60, criterion6},  {7, 60, criterion7}, {8, 60, criterion8}, {9, 30, criterion9}, {10, 0, criterion10},
  };
  bool ok = true;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget_s == 0 || secs < c.budget_s;
    const bool pass = o.pass && in_time;
    std::printf("criterion %d: %s (%.2f s%s) %s\n", c.id, pass ? "PASS" : "FAIL", secs, in_time ? "" : ", over budget", o.summary.c_str());
    if (!pass)
      for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    const bool expected_fail = xfail.count(c.id) > 0;
    if (pass == expected_fail) {
      ok = false;
      if (expected_fail) std::printf("    criterion %d was expected to fail\n", c.id);
    }
    std::fflush(stdout);
  }
  return ok ? 0 : 1;
}
