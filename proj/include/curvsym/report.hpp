#pragma once

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "curvsym/errors.hpp"

namespace curvsym {

/** One checked identity: residual against tolerance. */
struct ReportRow {
  std::string identity;
  std::string anchor;  // short statement of the identity being checked
  double residual = 0;
  double tol = 0;
  bool pass = false;
  double relative = std::nan("");  // relative deviation where meaningful; not serialized
};

/** Ordered list of checked identities plus free-form findings. */
struct VerificationReport {
  std::string title;
  std::vector<ReportRow> rows;
  std::vector<std::string> findings;

  /** Appends a row; NaN residuals fail. */
  ReportRow& add(std::string identity, std::string anchor, double residual, double tol) {
    rows.push_back({std::move(identity), std::move(anchor), residual, tol, std::isfinite(residual) && residual <= tol});
    return rows.back();
  }
  /** Appends a row whose pass/fail is decided by the caller. */
  ReportRow& add_outcome(std::string identity, std::string anchor, double residual, double tol, bool pass) {
    rows.push_back({std::move(identity), std::move(anchor), residual, tol, pass});
    return rows.back();
  }
  void append(const VerificationReport& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    findings.insert(findings.end(), other.findings.begin(), other.findings.end());
  }

  bool pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
  size_t failures() const {
    size_t n = 0;
    for (const auto& r : rows) n += r.pass ? 0 : 1;
    return n;
  }
  double max_residual() const {
    double m = 0;
    for (const auto& r : rows)
      if (std::isfinite(r.residual)) m = std::max(m, r.residual);
    return m;
  }
};

inline nlohmann::ordered_json to_json(const ReportRow& r) {
  nlohmann::ordered_json j;
  j["identity"] = r.identity;
  j["anchor"] = r.anchor;
  j["residual"] = std::isfinite(r.residual) ? nlohmann::ordered_json(r.residual) : nlohmann::ordered_json(nullptr);
  j["tol"] = r.tol;
  j["pass"] = r.pass;
  return j;
}

inline nlohmann::ordered_json to_json(const VerificationReport& rep) {
  nlohmann::ordered_json j;
  j["title"] = rep.title;
  j["pass"] = rep.pass();
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rep.rows) j["rows"].push_back(to_json(r));
  j["findings"] = rep.findings;
  return j;
}

inline std::string dump(const VerificationReport& rep) { return to_json(rep).dump(2) + "\n"; }

inline void write_json(const VerificationReport& rep, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << dump(rep);
}

}  // namespace curvsym
