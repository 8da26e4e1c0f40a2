#pragma once

#include <string>
#include <vector>

namespace tc {

struct Check {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass() const { return residual <= tol; }
};

struct VerificationReport {
  std::vector<Check> checks;

  void add(std::string name, double residual, double tol) {
    checks.push_back({std::move(name), residual, tol});
  }
  void merge(const VerificationReport& other, const std::string& prefix = "") {
    for (const auto& c : other.checks) checks.push_back({prefix + c.name, c.residual, c.tol});
  }
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }
  double worst() const {
    double w = 0.0;
    for (const auto& c : checks) w = c.residual > w ? c.residual : w;
    return w;
  }
};

}  // namespace tc
