#pragma once

#include <string>
#include <vector>

#include "semiflow/lab/config.hpp"
#include "semiflow/relative_energy.hpp"
#include "semiflow/selection.hpp"

namespace semiflow::lab {

TorusGrid make_grid(const ScenarioConfig& cfg);

/// Fields from the data generator; E0 is the data energy, plus delta under
/// the inflated policy.
InitialData generate_initial_data(const ScenarioConfig& cfg);

/// One solver path choice for the first segment.
struct SweepEntry {
  double eps = 0.0;
  double smoothing = 0.0;
};

/// eps x smoothing, extended by the jittered eps values of a
/// perturbed_ensemble generator.
std::vector<SweepEntry> solver_sweep(const ScenarioConfig& cfg);

/// Distinct eps values of the sweep, in first-seen order.
std::vector<double> sweep_eps(const ScenarioConfig& cfg);

SolverConfig solver_config(const ScenarioConfig& cfg, double eps, double horizon);

struct BuildOptions {
  bool close = true;  // glue fresh runs at every restart time
};

struct EnsembleBuild {
  Ensemble ensemble;
  std::vector<std::string> paths;     // eps schedule per member
  std::vector<std::string> excluded;  // reasons for dropped runs
};

/// Runs the sweep from the shared data and, when closing, continues every
/// member at each restart time with a fresh run for every other eps, so the
/// ensemble is closed under shift-and-continue at those times. Members from
/// distinct paths are kept even when their trajectories coincide. Aborted or
/// off-data runs are excluded with a logged reason; an empty result throws.
EnsembleBuild build_ensemble(const ScenarioConfig& cfg, const BuildOptions& options = {});

/// Fresh runs from `data` over `horizon` for each eps, plus `tails`, with
/// exact duplicates removed.
Ensemble build_restart_ensemble(const ScenarioConfig& cfg, const InitialData& data, double horizon,
                                const std::vector<Trajectory>& tails, const std::vector<double>& eps);

/// semiflow_select with the configured schedule and tolerance, evaluated up
/// to min(T_max, ensemble horizon).
Selector default_selector(const ScenarioConfig& cfg);

/// check_semigroup on the closed ensemble of `cfg`. The negative control
/// uses an unclosed base, withholds tails and restarts with `control_eps`.
SemigroupReport run_semigroup(const ScenarioConfig& cfg, double t1, double t2, bool negative_control = false,
                              const std::vector<double>& control_eps = {});

struct WeakStrongSweep {
  double t_ref = 0.0;
  double blowup_estimate = 0.0;
  std::vector<double> eps;
  std::vector<WeakStrongReport> reports;  // one per eps, same order
  bool all_pass = false;
  bool max_re_decreasing = false;  // strictly, in the configured eps order
};

/// Inviscid reference from the scenario data up to 0.6 of the blow-up
/// estimate, then one regularized run per configured eps compared against it.
WeakStrongSweep run_weak_strong(const ScenarioConfig& cfg, double c = 4.0);

}  // namespace semiflow::lab
