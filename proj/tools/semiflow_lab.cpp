#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "semiflow/lab/io.hpp"
#include "semiflow/lab/scenario.hpp"
#include "semiflow/lab/verify.hpp"

namespace fs = std::filesystem;
using namespace semiflow;
using namespace semiflow::lab;

namespace {

struct Common {
  std::string config;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "scenario config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "output directory")->required();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void status(const std::string& name, bool pass, const std::string& detail = {}) {
  std::cout << (pass ? "PASS " : "FAIL ") << name;
  if (!detail.empty()) std::cout << "  " << detail;
  std::cout << "\n";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

int run_solver(const Common& c) {
  const ScenarioConfig cfg = ScenarioConfig::load(c.config);
  const InitialData data = generate_initial_data(cfg);
  const auto sweep = solver_sweep(cfg);
  fs::create_directories(c.out);
  std::vector<SolverRun> runs;
  std::vector<std::string> names;
  bool ok = true;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const std::string name = "run_" + std::to_string(i);
    try {
      const FluidState start = mollify_initial_data(data.rho0, data.mom0, sweep[i].smoothing, cfg.law);
      runs.push_back(integrate_system(start, solver_config(cfg, sweep[i].eps, cfg.t_end)));
      names.push_back(name);
      write_run(fs::path(c.out) / name, runs.back());
      const double drift = energy_balance_drift(runs.back());
      status(name, true, "eps=" + fmt(sweep[i].eps) + " smoothing=" + fmt(sweep[i].smoothing) +
                             " energy drift=" + fmt(drift));
    } catch (const std::exception& e) {
      ok = false;
      status(name, false, e.what());
    }
  }
  TableSet tables;
  for (std::size_t i = 0; i < runs.size(); ++i) tables.runs.emplace_back(names[i], &runs[i]);
  emit_tables(tables, fs::path(c.out) / "tables");
  return ok ? 0 : 1;
}

int build_cmd(const Common& c) {
  const ScenarioConfig cfg = ScenarioConfig::load(c.config);
  const EnsembleBuild b = build_ensemble(cfg);
  const fs::path out(c.out);
  fs::create_directories(out);
  std::ostringstream paths, excluded;
  TableSet tables;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < b.ensemble.size(); ++i) names.push_back("member_" + std::to_string(i));
  for (std::size_t i = 0; i < b.ensemble.size(); ++i) {
    write_trajectory(out / "members" / names[i], b.ensemble.member(i));
    paths << names[i] << " " << b.paths[i] << "\n";
    tables.trajectories.emplace_back(names[i], &b.ensemble.member(i));
  }
  for (const auto& e : b.excluded) excluded << e << "\n";
  write_file(out / "paths.txt", paths.str());
  write_file(out / "excluded.txt", excluded.str());
  emit_tables(tables, out / "tables");
  bool ok = true;
  for (const auto& check : check_trajectories(b.ensemble.members())) {
    ok = ok && check.pass;
    status(check.name, check.pass, fmt(check.value) + " <= " + fmt(check.threshold));
  }
  std::cout << b.ensemble.size() << " members, " << b.excluded.size() << " excluded\n";
  return ok ? 0 : 1;
}

int select_cmd(const Common& c, const std::string& ensemble_dir) {
  const ScenarioConfig cfg = ScenarioConfig::load(c.config);
  std::optional<Ensemble> ens;
  if (ensemble_dir.empty()) {
    ens.emplace(build_ensemble(cfg).ensemble);
  } else {
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(fs::path(ensemble_dir) / "members")) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    std::vector<Trajectory> members;
    for (const auto& d : dirs) members.push_back(read_trajectory(d));
    ens.emplace(generate_initial_data(cfg), std::move(members));
  }
  const SelectionResult sel = default_selector(cfg)(*ens);
  TableSet tables;
  tables.selections.emplace_back("", &sel);
  tables.trajectories.emplace_back("selected", &ens->member(sel.index));
  emit_tables(tables, c.out);
  const bool admissible = check_admissibility(ens->member(sel.index), *ens);
  status("selection_admissible", admissible,
         "member " + std::to_string(sel.index) + ", " + std::to_string(sel.stages.size()) + " stages");
  if (sel.multiple_survivors) {
    std::cout << "note: " << sel.survivors.size() << " survivors" << (sel.duplicate_survivors ? " (identical)" : "")
              << "\n";
  }
  return admissible ? 0 : 1;
}

int verify_cmd(const Common& c, const std::vector<std::string>& trajectory_dirs, bool skip_semigroup) {
  const ScenarioConfig cfg = ScenarioConfig::load(c.config);
  VerifyReport report;
  if (trajectory_dirs.empty()) {
    VerifyOptions options;
    options.semigroup = !skip_semigroup;
    report = run_acceptance_suite(cfg, options);
  } else {
    // file-based mode: only the records given on the command line are checked
    report.scenario = cfg.name;
    std::vector<Trajectory> loaded;
    for (const auto& d : trajectory_dirs) {
      try {
        loaded.push_back(read_trajectory(d));
      } catch (const std::exception& e) {
        report.checks.push_back(CheckResult{"load " + d, false, std::nan(""), 0.0, e.what()});
      }
    }
    for (auto& check : check_trajectories(loaded)) report.checks.push_back(std::move(check));
  }
  fs::create_directories(c.out);
  write_file(fs::path(c.out) / "report.json", report.to_json() + "\n");
  for (const auto& check : report.checks) {
    status(check.name, check.pass, fmt(check.value) + " vs " + fmt(check.threshold) +
                                       (check.detail.empty() ? "" : "  (" + check.detail + ")"));
  }
  return report.all_pass() ? 0 : 1;
}

int weak_strong_cmd(const Common& c, double constant) {
  const ScenarioConfig cfg = ScenarioConfig::load(c.config);
  const WeakStrongSweep sweep = run_weak_strong(cfg, constant);
  TableSet tables;
  std::vector<std::string> names;
  for (double e : sweep.eps) names.push_back("eps_" + fmt(e));
  for (std::size_t i = 0; i < sweep.reports.size(); ++i) tables.weak_strong.emplace_back(names[i], &sweep.reports[i]);
  emit_tables(tables, c.out);
  std::cout << "reference horizon " << sweep.t_ref << " (blow-up estimate " << sweep.blowup_estimate << ")\n";
  for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
    status("bound eps=" + fmt(sweep.eps[i]), sweep.reports[i].pass, "max RE " + fmt(sweep.reports[i].max_re));
  }
  status("max RE decreasing in eps order", sweep.max_re_decreasing);
  return sweep.all_pass && sweep.max_re_decreasing ? 0 : 1;
}

int semigroup_cmd(const Common& c, double t1, double t2, bool negative, const std::vector<double>& control_eps) {
  const ScenarioConfig cfg = ScenarioConfig::load(c.config);
  std::vector<std::pair<double, double>> pairs;
  if (std::isnan(t1)) pairs = {{0.25, 0.5}, {0.5, 0.5}};
  else pairs = {{t1, t2}};
  std::vector<SemigroupReport> reports;
  std::vector<std::string> names;
  bool ok = true;
  for (const auto& [a, b] : pairs) {
    if (a + b > cfg.t_end + 1e-12) continue;
    reports.push_back(run_semigroup(cfg, a, b, negative, control_eps));
    names.push_back("semigroup_" + fmt(a) + "_" + fmt(b));
    const double dev = reports.back().deviation;
    // the negative control is expected to break the property
    const bool pass = negative ? dev > 1e-3 : dev <= 1e-6;
    ok = ok && pass;
    status(names.back(), pass, "deviation " + fmt(dev) + (negative ? " (negative control, expect > 1e-3)" : ""));
  }
  TableSet tables;
  for (std::size_t i = 0; i < reports.size(); ++i) tables.semigroups.emplace_back(names[i], &reports[i]);
  emit_tables(tables, c.out);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semiflow-lab: solver runs, ensembles, selection and invariant checks"};
  app.require_subcommand(1);

  Common run_c, build_c, select_c, verify_c, ws_c, sg_c;
  auto* run = app.add_subcommand("run-solver", "run the solver sweep and write run directories");
  add_common(run, run_c);

  auto* build = app.add_subcommand("build-ensemble", "build the closed ensemble and write its trajectories");
  add_common(build, build_c);

  std::string ensemble_dir;
  auto* select = app.add_subcommand("select", "run the selection cascade");
  add_common(select, select_c);
  select->add_option("--ensemble", ensemble_dir, "directory written by build-ensemble (default: build afresh)");

  std::vector<std::string> trajectory_dirs;
  bool skip_semigroup = false;
  auto* verify = app.add_subcommand("verify", "run the scenario checks, or check trajectory directories");
  add_common(verify, verify_c);
  verify->add_option("--trajectory", trajectory_dirs, "trajectory directory to check instead of the scenario");
  verify->add_flag("--skip-semigroup", skip_semigroup, "leave out the semigroup checks");

  double constant = 4.0;
  auto* ws = app.add_subcommand("weak-strong", "relative energy against a smooth reference");
  add_common(ws, ws_c);
  ws->add_option("--c", constant, "Gronwall constant deciding pass/fail");

  double t1 = std::nan(""), t2 = std::nan("");
  bool negative = false;
  std::vector<double> control_eps{5e-3, 1e-2};
  auto* sg = app.add_subcommand("semigroup", "restart-and-select consistency");
  add_common(sg, sg_c);
  auto* t1_opt = sg->add_option("--t1", t1, "restart time");
  sg->add_option("--t2", t2, "comparison horizon")->needs(t1_opt);
  t1_opt->needs(sg->get_option("--t2"));
  sg->add_flag("--negative-control", negative, "unclosed base, no tails, different restart sweep");
  sg->add_option("--control-eps", control_eps, "restart eps values for the negative control");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_solver(run_c);
    if (*build) return build_cmd(build_c);
    if (*select) return select_cmd(select_c, ensemble_dir);
    if (*verify) return verify_cmd(verify_c, trajectory_dirs, skip_semigroup);
    if (*ws) return weak_strong_cmd(ws_c, constant);
    if (*sg) return semigroup_cmd(sg_c, t1, t2, negative, control_eps);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
