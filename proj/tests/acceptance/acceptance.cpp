// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "semiflow/lab/io.hpp"
#include "semiflow/lab/scenario.hpp"
#include "semiflow/lab/verify.hpp"
#include "semiflow/rng.hpp"
#include "semiflow/spectral.hpp"

using namespace semiflow;
using namespace semiflow::lab;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = SEMIFLOW_CONFIG_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Ensembles shared by several criteria, built on first use.
const EnsembleBuild& scenario(const std::string& name) {
  static std::map<std::string, EnsembleBuild> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, build_ensemble(ScenarioConfig::load(kConfigs / (name + ".ini")))).first;
  return it->second;
}

const std::vector<std::string> kScenarios{"equilibrium", "equilibrium_inflated", "smooth_wave", "riemann", "wave_2d"};

Trajectory corrupted(const Trajectory& t) {
  const fs::path dir = fs::temp_directory_path() / "semiflow_acceptance_corrupt";
  fs::remove_all(dir);
  write_trajectory(dir, t);
  CsvTable profile = read_csv_table(dir / "energy_profile.csv");
  const std::size_t row = profile.rows.size() / 2;
  profile.rows[row][1] += 0.5;
  profile.rows[row][2] += 0.5;
  write_csv_table(dir / "energy_profile.csv", profile);
  Trajectory back = read_trajectory(dir);
  fs::remove_all(dir);
  return back;
}

double check_value(const std::vector<CheckResult>& checks, const std::string& name) {
  for (const auto& c : checks) {
    if (c.name == name) return c.value;
  }
  throw std::runtime_error("missing check " + name);
}

Outcome mass_conservation() {
  double worst = 0.0;
  std::size_t trajectories = 0;
  for (const auto& name : kScenarios) {
    for (const auto& m : scenario(name).ensemble.members()) {
      const double m0 = m.state(0).mass();
      for (const auto& s : m.states()) worst = std::max(worst, std::abs(s.mass() - m0) / m0);
      ++trajectories;
    }
  }
  return {worst <= 1e-10, "max relative drift " + sci(worst) + " over " + std::to_string(trajectories) + " trajectories"};
}

Outcome energy_balance() {
  ScenarioConfig cfg = ScenarioConfig::load(kConfigs / "smooth_wave.ini");
  const InitialData d = generate_initial_data(cfg);
  double drift[2];
  const double dts[2] = {2e-3, 1e-3};
  for (int i = 0; i < 2; ++i) {
    cfg.dt = dts[i];
    cfg.sample_stride = 1;
    drift[i] = energy_balance_drift(integrate_system(FluidState{d.rho0, d.mom0}, solver_config(cfg, 1e-3, 0.4)));
  }
  const double ratio = drift[0] / drift[1];
  const bool pass = drift[0] <= dts[0] * dts[0] && drift[1] <= dts[1] * dts[1] && ratio >= 3.5;
  return {pass, "drift " + sci(drift[0]) + " at dt=2e-3, " + sci(drift[1]) + " at dt=1e-3, ratio " + sci(ratio)};
}

Outcome energy_monotonicity() {
  double worst = 0.0;
  for (const auto& name : kScenarios) {
    for (const auto& m : scenario(name).ensemble.members()) worst = std::max(worst, m.energy().monotonicity_violation());
  }
  const Trajectory bad = corrupted(scenario("smooth_wave").ensemble.member(0));
  const double bad_violation = bad.energy().monotonicity_violation();
  const bool control_fails = !check_trajectories({bad}).empty() &&
                             check_value(check_trajectories({bad}), "energy_monotonicity") > 1e-8;
  return {worst <= 1e-8 && control_fails,
          "max increase " + sci(worst) + "; corrupted record increase " + sci(bad_violation) +
              (control_fails ? " (rejected)" : " (NOT rejected)")};
}

Outcome defect_nonnegativity() {
  double lowest = INFINITY;
  for (const auto& name : kScenarios) {
    for (const auto& m : scenario(name).ensemble.members()) {
      for (double v : m.defect_left()) lowest = std::min(lowest, v);
      for (double v : m.defect_right()) lowest = std::min(lowest, v);
    }
  }
  const ScenarioConfig cfg = ScenarioConfig::load(kConfigs / "equilibrium_inflated.ini");
  const double scale = std::max(1.0, scenario("equilibrium_inflated").ensemble.data().E0);
  double gap = 0.0;
  for (const auto& m : scenario("equilibrium_inflated").ensemble.members()) {
    gap = std::max(gap, std::abs(m.defect_left().front() - cfg.delta));
  }
  return {lowest >= -1e-8 && gap <= 1e-12 * scale,
          "min defect " + sci(lowest) + "; inflated defect(0-) - delta = " + sci(gap)};
}

double equilibrium_deviation(const Trajectory& t, double rho_m) {
  double dev = 0.0;
  for (const auto& s : t.states()) {
    for (std::size_t i = 0; i < s.rho.size(); ++i) dev = std::max(dev, std::abs(s.rho[i] - rho_m));
    for (int a = 0; a < s.grid().dim(); ++a) dev = std::max(dev, s.mom.component(a).max_abs());
  }
  return dev;
}

Outcome equilibrium_stability() {
  const EnsembleBuild& plain = scenario("equilibrium");
  const double rho_m = plain.ensemble.data().rho0[0];
  double dev = 0.0;
  double horizon = INFINITY;
  for (const auto& m : plain.ensemble.members()) {
    dev = std::max(dev, equilibrium_deviation(m, rho_m));
    horizon = std::min(horizon, m.horizon());
  }

  const ScenarioConfig cfg = ScenarioConfig::load(kConfigs / "equilibrium_inflated.ini");
  const Ensemble& ens = scenario("equilibrium_inflated").ensemble;
  const SelectionResult sel = default_selector(cfg)(ens);
  const Trajectory& chosen = ens.member(sel.index);
  const double chosen_dev = equilibrium_deviation(chosen, rho_m);

  // Same fields, energy lifted by 0.25 after the initial jump.
  auto left = chosen.energy().left();
  auto right = chosen.energy().right();
  for (std::size_t j = 0; j < left.size(); ++j) {
    if (j > 0) left[j] += 0.25;
    right[j] += 0.25;
  }
  const Trajectory higher = Trajectory::make(chosen.times(), chosen.states(), left, right, chosen.law(), "synthetic");
  std::vector<Trajectory> members = ens.members();
  members.push_back(higher);
  const Ensemble augmented(ens.data(), members);
  const bool rejected = !check_admissibility(higher, augmented);
  const SelectionResult again = default_selector(cfg)(augmented);
  const bool not_selected = again.index != augmented.size() - 1;

  const bool pass = dev <= 1e-10 && horizon >= 2.0 - 1e-12 && chosen_dev <= 1e-10 && rejected && not_selected;
  return {pass, "max deviation " + sci(dev) + " on [0, " + sci(horizon) + "]; inflated selection deviation " +
                    sci(chosen_dev) + "; higher-energy member " + (rejected ? "rejected" : "NOT rejected")};
}

Outcome weak_form_consistency() {
  ScenarioConfig cfg = ScenarioConfig::load(kConfigs / "smooth_wave.ini");
  cfg.restart_times.clear();
  cfg.sample_stride = 1;
  const double horizon = 0.8;
  const std::vector<std::pair<int, double>> levels{{64, 8e-3}, {128, 4e-3}, {256, 2e-3}};
  std::vector<std::vector<double>> residual(10, std::vector<double>(levels.size()));
  for (std::size_t l = 0; l < levels.size(); ++l) {
    cfg.n = levels[l].first;
    cfg.dt = levels[l].second;
    const InitialData d = generate_initial_data(cfg);
    const Trajectory t = to_trajectory(integrate_system(FluidState{d.rho0, d.mom0}, solver_config(cfg, 0.0, horizon)), d.E0);
    for (std::uint64_t f = 0; f < 10; ++f) {
      // Sine and cosine share each wavenumber so no function is orthogonal to
      // the reflection-symmetric initial data.
      const int k = 1 + static_cast<int>(f % 4);
      const double ta = -0.3 + 0.05 * static_cast<double>(f);
      const double tb = 0.5 + 0.025 * static_cast<double>(f);
      const TestFunction phi(TestFunction::Kind::scalar,
                             {TestTerm{1.0, ta, tb, {k, 0}, true, 0}, TestTerm{0.7, ta, tb, {k, 0}, false, 0}});
      residual[f][l] = weak_form_residual(t, phi, WeakEquation::continuity);
    }
  }
  // A residual already at round-off on the coarse level cannot show an order.
  constexpr double kFloor = 1e-12;
  double worst_order = INFINITY;
  int at_floor = 0;
  for (const auto& r : residual) {
    if (r.front() <= kFloor) ++at_floor;
    const double order = std::log2(r.front() / std::max(r.back(), 1e-300)) / 2.0;
    worst_order = std::min(worst_order, order);
  }
  return {worst_order >= 2.0 && at_floor == 0,
          "lowest observed order " + sci(worst_order) + " over 10 functions, " + std::to_string(at_floor) +
              " below the resolvable floor"};
}

Outcome weak_strong() {
  const WeakStrongSweep sweep = run_weak_strong(ScenarioConfig::load(kConfigs / "weak_strong.ini"), 4.0);
  std::ostringstream os;
  os << "max RE";
  for (const auto& r : sweep.reports) os << ' ' << sci(r.max_re);
  os << " for eps";
  for (double e : sweep.eps) os << ' ' << e;
  const double last = sweep.reports.empty() ? INFINITY : sweep.reports.back().max_re;
  const bool eps_ok = sweep.eps == std::vector<double>{1e-3, 5e-4, 2.5e-4};
  return {sweep.all_pass && sweep.max_re_decreasing && last <= 1e-3 && eps_ok,
          os.str() + (sweep.all_pass ? "; bound holds" : "; bound VIOLATED")};
}

Outcome selection_correctness() {
  const FunctionalSchedule schedule = FunctionalSchedule::enumerate(8, 4, 4);
  int agree = 0;
  int minimal = 0;
  int survivors = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Ensemble ens = oracle::random_ensemble(seed, 8);
    const SelectionResult r = semiflow_select(ens, schedule, 0.0);
    if (r.survivors == oracle::brute_force_cascade(ens, schedule, ens.horizon())) ++agree;
    const Ensemble adm = admissible_select(ens);
    for (const auto& m : adm.members()) {
      ++survivors;
      if (oracle::minimal_in(m, ens)) ++minimal;
    }
  }
  return {agree == 20 && minimal == survivors, std::to_string(agree) + "/20 agree with the exhaustive cascade; " +
                                                   std::to_string(minimal) + "/" + std::to_string(survivors) +
                                                   " admissible survivors minimal"};
}

Outcome semigroup() {
  double worst = 0.0;
  for (const std::string name : {"equilibrium", "smooth_wave", "riemann"}) {
    const ScenarioConfig cfg = ScenarioConfig::load(kConfigs / (name + ".ini"));
    for (auto [t1, t2] : {std::pair{0.25, 0.5}, std::pair{0.5, 0.5}}) {
      worst = std::max(worst, run_semigroup(cfg, t1, t2).deviation);
    }
  }
  const ScenarioConfig smooth = ScenarioConfig::load(kConfigs / "smooth_wave.ini");
  double control = INFINITY;
  for (auto [t1, t2] : {std::pair{0.25, 0.5}, std::pair{0.5, 0.5}}) {
    control = std::min(control, run_semigroup(smooth, t1, t2, true, {5e-3, 1e-2}).deviation);
  }
  return {worst <= 1e-6 && control > 1e-3,
          "max deviation " + sci(worst) + " on closed ensembles; negative control " + sci(control)};
}

Outcome algebra() {
  // Solver output: the smooth-wave path that switches eps at 0.25.
  const Ensemble& ens = scenario("smooth_wave").ensemble;
  const Trajectory& a = ens.member(0);
  const std::size_t k = *a.sample_index(0.25);
  std::size_t other = 0;
  for (std::size_t i = 1; i < ens.size() && other == 0; ++i) {
    const Trajectory& m = ens.member(i);
    if (m.state(k) == a.state(k) && !(shift(m, 0.25) == shift(a, 0.25))) other = i;
  }
  if (other == 0) return {false, "no member leaves the first path at 0.25"};
  const Trajectory b = shift(ens.member(other), 0.25);
  bool exact = true;
  try {
    exact = shift(continue_at(a, 0.25, b), 0.25) == b && continue_at(a, 0.5, shift(a, 0.5)) == a;
  } catch (const std::exception&) {
    exact = false;
  }

  bool rejected = false;
  auto left = b.energy().left();
  auto right = b.energy().right();
  for (auto* v : {&left, &right}) {
    for (double& e : *v) e += 1.0;
  }
  try {
    (void)continue_at(a, 0.25, Trajectory::make(b.times(), b.states(), left, right, b.law()));
  } catch (const std::invalid_argument&) {
    rejected = true;
  }

  int passed = 0;
  std::string first_failure;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const std::string why = oracle::random_algebra_check(seed);
    if (why.empty()) ++passed;
    else if (first_failure.empty()) first_failure = " (seed " + std::to_string(seed) + ": " + why + ")";
  }
  return {exact && rejected && passed == 1000,
          std::string("shift/continue on solver output ") + (exact ? "exact" : "NOT exact") + "; energy excess " +
              (rejected ? "rejected" : "NOT rejected") + "; " + std::to_string(passed) + "/1000 random checks" +
              first_failure};
}

Outcome closed_form_functionals() {
  const TorusGrid grid = TorusGrid::make(1, 16);
  auto energy_path = [&](std::vector<double> left, std::vector<double> right) {
    oracle::SyntheticPath p;
    for (std::size_t j = 0; j < left.size(); ++j) p.times.push_back(0.1 * static_cast<double>(j));
    p.left = std::move(left);
    p.right = std::move(right);
    p.a.assign(p.times.size(), 0.0);
    p.b = p.c = p.a;
    return oracle::synthetic_trajectory(grid, p);
  };
  const Beta beta{Beta::Kind::tanh, 6.0};
  double worst_closed = 0.0;
  const Trajectory flat = energy_path(std::vector<double>(11, 5.0), std::vector<double>(11, 5.0));
  std::vector<double> sl(11, 6.0), sr(11, 6.0);
  for (std::size_t j = 5; j < 11; ++j) {
    sr[j] = 4.0;
    if (j > 5) sl[j] = 4.0;
  }
  const Trajectory step = energy_path(sl, sr);
  for (double lambda : {0.25, 1.0, 2.0}) {
    const KrylovFunctional I{lambda, FunctionalForm::energy, 0, beta};
    const double c = beta(5.0) * (1.0 - std::exp(-lambda)) / lambda;
    const double s = (beta(6.0) * (1.0 - std::exp(-0.5 * lambda)) + beta(4.0) * (std::exp(-0.5 * lambda) - std::exp(-lambda))) / lambda;
    worst_closed = std::max(worst_closed, std::abs(evaluate_functional(I, flat, 1.0).value - c));
    worst_closed = std::max(worst_closed, std::abs(evaluate_functional(I, step, 1.0).value - s));
  }

  double worst_dense = 0.0;
  Xorshift64Star rng(2024);
  for (int i = 0; i < 50; ++i) {
    const Trajectory t = oracle::synthetic_trajectory(grid, oracle::random_path(rng.next(), 10.0, 1.0, 11));
    const KrylovFunctional I{rng.uniform(0.25, 2.0), static_cast<FunctionalForm>(i % 3),
                             static_cast<std::size_t>(rng.integer(0, 3)), Beta::for_energy(10.0)};
    const double T = rng.uniform(0.3, 1.0);
    worst_dense = std::max(worst_dense, std::abs(evaluate_functional(I, t, T).value - oracle::dense_functional(I, t, T)));
  }
  return {worst_closed <= 1e-8 && worst_dense <= 1e-7,
          "closed-form error " + sci(worst_closed) + "; dense-oracle error " + sci(worst_dense) + " on 50 profiles"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"mass_conservation", mass_conservation},
      {"energy_balance", energy_balance},
      {"energy_monotonicity", energy_monotonicity},
      {"defect_nonnegativity", defect_nonnegativity},
      {"equilibrium_stability", equilibrium_stability},
      {"weak_form_consistency", weak_form_consistency},
      {"weak_strong_uniqueness", weak_strong},
      {"selection_correctness", selection_correctness},
      {"semigroup_property", semigroup},
      {"shift_continuation_algebra", algebra},
      {"closed_form_functionals", closed_form_functionals},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << (i + 1) << ' ' << criteria[i].first << ": " << o.detail << " ["
              << std::fixed;
    std::cout.precision(1);
    std::cout << secs << "s]" << std::defaultfloat << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria pass\n";
  return failures == 0 ? 0 : 1;
}
