#include "semiflow/lab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "semiflow/lab/scenario.hpp"

namespace semiflow::lab {
namespace {

CheckResult at_most(std::string name, double value, double threshold, std::string detail = {}) {
  return CheckResult{std::move(name), value <= threshold, value, threshold, std::move(detail)};
}

CheckResult failure(std::string name, const std::string& what) {
  return CheckResult{std::move(name), false, std::nan(""), 0.0, what};
}

}  // namespace

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string VerifyReport::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["pass"] = all_pass();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e{{"name", c.name}, {"pass", c.pass}, {"threshold", c.threshold}, {"detail", c.detail}};
    e["value"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr);
    j["checks"].push_back(std::move(e));
  }
  return j.dump(2);
}

std::vector<CheckResult> check_trajectories(const std::vector<Trajectory>& members) {
  double mass = 0.0, mono = 0.0, defect = 0.0;
  std::size_t broken = 0;
  std::string first_broken;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const Trajectory& t = members[i];
    const double m0 = t.state(0).mass();
    for (const auto& s : t.states()) mass = std::max(mass, std::abs(s.mass() - m0) / std::abs(m0));
    mono = std::max(mono, t.energy().monotonicity_violation());
    for (double d : t.defect_left()) defect = std::max(defect, -d);
    for (double d : t.defect_right()) defect = std::max(defect, -d);
    const auto v = t.violations();
    if (!v.empty()) {
      if (broken++ == 0) first_broken = "member " + std::to_string(i) + ": " + v.front();
    }
  }
  return {
      at_most("mass_conservation", mass, kMassRelTol, "max relative mass drift"),
      at_most("energy_monotonicity", mono, EnergyProfile::kMonotoneTol, "largest energy increase"),
      at_most("defect_nonnegativity", defect, kDefectTol, "most negative defect, sign flipped"),
      at_most("trajectory_invariants", static_cast<double>(broken), 0.0, first_broken),
  };
}

VerifyReport run_acceptance_suite(const ScenarioConfig& cfg, const VerifyOptions& options) {
  VerifyReport report;
  report.scenario = cfg.name;
  auto& out = report.checks;

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    out.push_back(failure("config", e.what()));
    return report;
  }

  std::optional<EnsembleBuild> build;
  try {
    build.emplace(build_ensemble(cfg));
  } catch (const std::exception& e) {
    out.push_back(failure("build_ensemble", e.what()));
    return report;
  }
  const Ensemble& ens = build->ensemble;
  {
    std::ostringstream detail;
    detail << ens.size() << " members, " << build->excluded.size() << " excluded";
    for (const auto& why : build->excluded) detail << "; " << why;
    out.push_back(CheckResult{"build_ensemble", true, static_cast<double>(ens.size()), 1.0, detail.str()});
  }
  for (auto& c : check_trajectories(ens.members())) out.push_back(std::move(c));

  const InitialData& data = ens.data();
  if (cfg.inflated) {
    double worst = 0.0;
    for (const auto& t : ens.members()) worst = std::max(worst, std::abs(t.defect_left().front() - cfg.delta));
    out.push_back(at_most("inflated_initial_defect", worst, 1e-12 * std::max(1.0, std::abs(data.E0)),
                          "|defect(0-) - delta|"));
  }

  if (cfg.data.generator == Generator::equilibrium) {
    double dev = 0.0;
    for (const auto& t : ens.members()) {
      for (const auto& s : t.states()) {
        dev = std::max(dev, (s.rho - data.rho0).max_abs());
        dev = std::max(dev, (s.mom - data.mom0).max_abs());
      }
    }
    out.push_back(at_most("equilibrium_fixed_point", dev, 1e-10, "max node deviation"));
  }

  if (options.energy_balance) {
    try {
      const FluidState start{data.rho0, data.mom0};
      const SolverRun run = integrate_system(start, solver_config(cfg, cfg.eps.front(), cfg.t_end));
      const double bound = options.balance_constant * cfg.dt * cfg.dt;
      out.push_back(at_most("energy_balance", energy_balance_drift(run), bound, "max |E + D - E(0)| vs C dt^2"));
    } catch (const std::exception& e) {
      out.push_back(failure("energy_balance", e.what()));
    }
  }

  try {
    const SelectionResult sel = default_selector(cfg)(ens);
    const bool admissible = check_admissibility(ens.member(sel.index), ens);
    std::ostringstream detail;
    detail << "selected member " << sel.index << " (" << build->paths[sel.index] << ")";
    if (sel.multiple_survivors) detail << ", " << sel.survivors.size() << " survivors";
    out.push_back(CheckResult{"selection_admissible", admissible, admissible ? 0.0 : 1.0, 0.0, detail.str()});
  } catch (const std::exception& e) {
    out.push_back(failure("selection_admissible", e.what()));
  }

  if (options.semigroup) {
    for (const auto& [t1, t2] : options.semigroup_pairs) {
      std::ostringstream name;
      name << "semigroup_" << t1 << "_" << t2;
      if (t1 + t2 > cfg.t_end + 1e-12) continue;
      try {
        const SemigroupReport r = run_semigroup(cfg, t1, t2);
        out.push_back(at_most(name.str(), r.deviation, 1e-6, "trajectory distance of restart vs shifted selection"));
      } catch (const std::exception& e) {
        out.push_back(failure(name.str(), e.what()));
      }
    }
  }
  return report;
}

}  // namespace semiflow::lab
