#pragma once

#include <string>
#include <utility>
#include <vector>

#include "semiflow/lab/config.hpp"
#include "semiflow/trajectory.hpp"

namespace semiflow::lab {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // bound it was compared against
  std::string detail;
};

struct VerifyReport {
  std::string scenario;
  std::vector<CheckResult> checks;

  bool all_pass() const;
  std::string to_json() const;
};

struct VerifyOptions {
  /// (t1, t2) pairs for the semigroup check; pairs past t_end are skipped.
  std::vector<std::pair<double, double>> semigroup_pairs{{0.25, 0.5}, {0.5, 0.5}};
  bool semigroup = true;
  bool energy_balance = true;
  double balance_constant = 1.0;  // drift <= C dt^2
};

/// Structural checks on loaded trajectories: mass drift, energy-profile
/// monotonicity, defect sign and the remaining trajectory invariants.
std::vector<CheckResult> check_trajectories(const std::vector<Trajectory>& members);

/// Builds the scenario ensemble and runs every applicable check. Failures
/// (including construction errors) become report entries, never exceptions.
VerifyReport run_acceptance_suite(const ScenarioConfig& cfg, const VerifyOptions& options = {});

}  // namespace semiflow::lab
