#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "semiflow/lab/config.hpp"
#include "semiflow/lab/io.hpp"
#include "semiflow/lab/scenario.hpp"
#include "semiflow/lab/verify.hpp"
#include "semiflow/spectral.hpp"

using namespace semiflow;
using namespace semiflow::lab;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = SEMIFLOW_CONFIG_DIR;

const char* kTinyEquilibrium = R"(# small and fast
[scenario]
name = tiny_equilibrium
[grid]
dim = 1
n = 64
[data]
generator = equilibrium
mass = 2
[solver]
eps = 1e-3, 5e-4
dt = 1e-2
t_end = 1
sample_stride = 5
[selection]
restart_times = 0.25, 0.5
)";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("semiflow_test_lab_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_text(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioConfig tiny_config() { return ScenarioConfig::from_ini(IniDocument::parse(kTinyEquilibrium)); }

}  // namespace

TEST_CASE("ini parsing") {
  const IniDocument doc = IniDocument::parse("top = 1\n[a]\nx = 1.5 ; trailing\n# comment\n  y=  hello  \nz = 1, 2,3\n");
  CHECK(doc.get_string("", "top", "") == "1");
  CHECK(doc.get_double("a", "x", 0.0) == 1.5);
  CHECK(doc.get_string("a", "y", "") == "hello");
  CHECK(doc.get_list("a", "z", {}) == std::vector<double>{1, 2, 3});
  CHECK(doc.get_int("a", "missing", 7) == 7);
  CHECK_FALSE(doc.has("b", "x"));
  CHECK_THROWS((void)doc.get_double("a", "y", 0.0));
  CHECK_THROWS((void)doc.get_int("a", "x", 0));
  CHECK_THROWS((void)IniDocument::parse("[open\n"));
  CHECK_THROWS((void)IniDocument::parse("[a]\nno equals sign\n"));
  const IniDocument again = IniDocument::parse(doc.to_string());
  CHECK(again.section("a") == doc.section("a"));
}

TEST_CASE("scenario config round-trips and validates") {
  ScenarioConfig cfg = tiny_config();
  CHECK(cfg.name == "tiny_equilibrium");
  CHECK(cfg.n == 64);
  CHECK(cfg.eps == std::vector<double>{1e-3, 5e-4});
  CHECK(cfg.t_max == 1.0);
  const ScenarioConfig back = ScenarioConfig::from_ini(IniDocument::parse(cfg.to_ini().to_string()));
  CHECK(back.to_ini().to_string() == cfg.to_ini().to_string());
  CHECK(back.law.to_string() == cfg.law.to_string());

  auto broken = [](const std::string& extra) {
    return ScenarioConfig::from_ini(IniDocument::parse(std::string(kTinyEquilibrium) + extra));
  };
  CHECK_THROWS(broken("[grid]\ndim = 3\n"));
  CHECK_THROWS(broken("[solver]\neps =\n"));
  CHECK_THROWS(broken("[selection]\nrestart_times = 0.23\n"));
  CHECK_THROWS(broken("[selection]\nT_max = 5\n"));
  CHECK_THROWS(broken("[data]\ngenerator = vortex\n"));
  CHECK_THROWS(broken("[energy]\npolicy = generous\n"));
  CHECK_THROWS(broken("[energy]\npolicy = inflated\ndelta = -1\n"));
}

TEST_CASE("shipped configs load and generate admissible data") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(kConfigs)) {
    if (entry.path().extension() != ".ini") continue;
    INFO(entry.path().filename().string());
    const ScenarioConfig cfg = ScenarioConfig::load(entry.path());
    const InitialData d = generate_initial_data(cfg);
    CHECK(d.rho0.grid().dim() == cfg.dim);
    CHECK(static_cast<bool>(validate_data_membership(d.rho0, d.mom0, d.E0, cfg.law)));
    CHECK_FALSE(solver_sweep(cfg).empty());
    ++count;
  }
  CHECK(count >= 6);
}

TEST_CASE("perturbed generator jitters the solver path reproducibly") {
  const ScenarioConfig cfg = ScenarioConfig::load(kConfigs / "perturbed.ini");
  const auto a = solver_sweep(cfg);
  const auto b = solver_sweep(cfg);
  REQUIRE(a.size() == b.size());
  CHECK(a.size() == cfg.eps.size() * cfg.smoothing.size() + static_cast<std::size_t>(cfg.data.members));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].eps == b[i].eps);
  ScenarioConfig other = cfg;
  other.data.seed += 1;
  CHECK(solver_sweep(other).back().eps != a.back().eps);
  // The data itself is the base generator's, untouched by the seed.
  ScenarioConfig base = cfg;
  base.data.generator = cfg.data.base;
  CHECK(generate_initial_data(base).rho0 == generate_initial_data(cfg).rho0);
}

TEST_CASE("equilibrium ensemble has one identical member per eps") {
  ScenarioConfig cfg = ScenarioConfig::load(kConfigs / "equilibrium.ini");
  cfg.restart_times.clear();
  const EnsembleBuild b = build_ensemble(cfg);
  REQUIRE(b.ensemble.size() == 3);
  CHECK(b.excluded.empty());
  const int ell = default_sobolev_index(b.ensemble.data().rho0.grid());
  for (std::size_t i = 1; i < 3; ++i) {
    CHECK(trajectory_distance(b.ensemble.member(0), b.ensemble.member(i), b.ensemble.horizon(), ell) <= 1e-10);
  }
}

TEST_CASE("riemann sweep of four gives four dissipative members") {
  ScenarioConfig cfg = ScenarioConfig::load(kConfigs / "riemann.ini");
  cfg.eps = {2e-3, 1e-3, 5e-4, 2.5e-4};
  cfg.restart_times.clear();
  const EnsembleBuild b = build_ensemble(cfg);
  REQUIRE(b.ensemble.size() == 4);
  for (const auto& m : b.ensemble.members()) {
    CHECK(m.energy().is_nonincreasing());
    CHECK(m.violations().empty());
  }
  CHECK(b.paths.size() == 4);
}

TEST_CASE("inflated energy policy") {
  ScenarioConfig cfg = ScenarioConfig::load(kConfigs / "equilibrium_inflated.ini");
  cfg.restart_times.clear();
  cfg.t_end = cfg.t_max = 0.5;
  REQUIRE(cfg.inflated);
  REQUIRE(cfg.delta == 1.0);
  ScenarioConfig consistent = cfg;
  consistent.inflated = false;
  const double data_energy = generate_initial_data(consistent).E0;
  const EnsembleBuild b = build_ensemble(cfg);
  for (const auto& m : b.ensemble.members()) {
    CHECK(m.energy().left().front() == doctest::Approx(data_energy + 1.0).epsilon(1e-14));
    CHECK(std::abs(m.defect_left().front() - 1.0) <= 1e-12);
  }
}

TEST_CASE("closed ensemble is labelled by its eps paths") {
  const EnsembleBuild b = build_ensemble(tiny_config());
  // two eps at t = 0, each switching at 0.25 and at 0.5
  CHECK(b.ensemble.size() == 2 * 2 * 2);
  CHECK(std::count_if(b.paths.begin(), b.paths.end(),
                      [](const std::string& p) { return p.find("@0.25") != std::string::npos; }) == 4);
  BuildOptions open;
  open.close = false;
  CHECK(build_ensemble(tiny_config(), open).ensemble.size() == 2);
}

TEST_CASE("run and trajectory directories round-trip") {
  const fs::path dir = scratch("io");
  const ScenarioConfig cfg = ScenarioConfig::load(kConfigs / "smooth_wave.ini");
  const InitialData d = generate_initial_data(cfg);
  const SolverRun run = integrate_system(FluidState{d.rho0, d.mom0}, solver_config(cfg, 1e-3, 0.2));
  write_run(dir / "run", run);
  const SolverRun back = read_run(dir / "run");
  CHECK(back.times == run.times);
  CHECK(back.energy == run.energy);
  CHECK(back.dissipation == run.dissipation);
  REQUIRE(back.states.size() == run.states.size());
  for (std::size_t j = 0; j < run.states.size(); ++j) CHECK(back.states[j] == run.states[j]);
  CHECK(back.config.eps == run.config.eps);
  CHECK(back.config.law.to_string() == run.config.law.to_string());

  const Trajectory t = to_trajectory(run, d.E0 + 0.5, "smooth wave eps 1e-3");
  write_trajectory(dir / "traj", t);
  const Trajectory tb = read_trajectory(dir / "traj");
  CHECK(tb == t);
  CHECK(tb.provenance() == t.provenance());
  CHECK(tb.law().to_string() == t.law().to_string());
  const CsvTable profile = read_csv_table(dir / "traj" / "energy_profile.csv");
  CHECK(profile.header == std::vector<std::string>{"t", "E_left", "E_right"});
  CHECK(read_csv_table(dir / "traj" / "defect.csv").header ==
        std::vector<std::string>{"t", "defect_left", "defect_right"});

  CsvTable table{{"a", "b"}, {{1.0 / 3.0, -2e-300}, {4.5, 1e300}}};
  write_csv_table(dir / "table.csv", table);
  const CsvTable again = read_csv_table(dir / "table.csv");
  CHECK(again.header == table.header);
  CHECK(again.rows == table.rows);
  CHECK(again.column("b") == std::vector<double>{-2e-300, 1e300});
  CHECK_THROWS((void)again.column("c"));
  write_text(dir / "bad.csv", "a,b\n1,2x\n");
  CHECK_THROWS((void)read_csv_table(dir / "bad.csv"));
}

TEST_CASE("emit_tables") {
  SUBCASE("nothing to emit") {
    const fs::path dir = scratch("emit_empty");
    CHECK(emit_tables(TableSet{}, dir).empty());
    CHECK(read_manifest(dir).empty());
  }
  SUBCASE("one run") {
    const fs::path dir = scratch("emit_run");
    const ScenarioConfig cfg = tiny_config();
    const InitialData d = generate_initial_data(cfg);
    const SolverRun run = integrate_system(FluidState{d.rho0, d.mom0}, solver_config(cfg, 1e-3, 0.5));
    TableSet set;
    set.runs.emplace_back("", &run);
    const auto files = emit_tables(set, dir);
    CHECK(files == std::vector<std::string>{"energy.csv"});
    CHECK(read_text(dir / "energy.csv").rfind("t,E,dissipation\n", 0) == 0);
    CHECK(read_csv_table(dir / "energy.csv").column("E") == run.energy);
    CHECK(read_manifest(dir) == files);
  }
  SUBCASE("full scenario") {
    const fs::path dir = scratch("emit_full");
    const ScenarioConfig cfg = tiny_config();
    const EnsembleBuild b = build_ensemble(cfg);
    const SelectionResult sel = default_selector(cfg)(b.ensemble);
    const SemigroupReport sg = run_semigroup(cfg, 0.25, 0.5);
    const InitialData d = generate_initial_data(cfg);
    const SolverRun run = integrate_system(FluidState{d.rho0, d.mom0}, solver_config(cfg, 1e-3, 0.5));
    ReferenceSolution ref = ReferenceSolution::from_states(b.ensemble.member(0).times(), b.ensemble.member(0).states());
    const WeakStrongReport ws = weak_strong_check(b.ensemble.member(0), ref);
    TableSet set;
    set.runs.emplace_back("run", &run);
    set.trajectories.emplace_back("member_0", &b.ensemble.member(0));
    set.weak_strong.emplace_back("ws", &ws);
    set.selections.emplace_back("selection", &sel);
    set.semigroups.emplace_back("semigroup", &sg);
    const auto files = emit_tables(set, dir);
    CHECK(files.size() == 6);
    CHECK(read_manifest(dir) == files);
    for (const auto& f : files) CHECK(fs::exists(dir / f));
    CHECK(read_csv_table(dir / "ws" / "weak_strong.csv").header ==
          std::vector<std::string>{"tau", "RE", "bound", "pass"});
    const auto sel_json = nlohmann::json::parse(read_text(dir / "selection" / "selection.json"));
    CHECK(sel_json["selected"].get<std::size_t>() == sel.index);
    const auto sg_json = nlohmann::json::parse(read_text(dir / "semigroup" / "semigroup.json"));
    CHECK(sg_json["deviation"].get<double>() == sg.deviation);

    TableSet twice;
    twice.runs.emplace_back("x", &run);
    twice.runs.emplace_back("x", &run);
    CHECK_THROWS((void)emit_tables(twice, scratch("emit_twice")));
  }
}

TEST_CASE("identical configs give bit-identical results") {
  const ScenarioConfig cfg = ScenarioConfig::load(kConfigs / "perturbed.ini");
  ScenarioConfig small = cfg;
  small.t_end = small.t_max = 0.5;
  small.restart_times = {0.25};
  const EnsembleBuild a = build_ensemble(small);
  const EnsembleBuild b = build_ensemble(small);
  REQUIRE(a.ensemble.size() == b.ensemble.size());
  for (std::size_t i = 0; i < a.ensemble.size(); ++i) CHECK(a.ensemble.member(i) == b.ensemble.member(i));
  CHECK(a.paths == b.paths);
  const Selector select = default_selector(small);
  CHECK(select(a.ensemble).to_json() == select(b.ensemble).to_json());
  const VerifyReport ra = run_acceptance_suite(tiny_config());
  const VerifyReport rb = run_acceptance_suite(tiny_config());
  CHECK(ra.to_json() == rb.to_json());
}

TEST_CASE("acceptance suite on an equilibrium passes every check") {
  const VerifyReport r = run_acceptance_suite(tiny_config());
  for (const auto& c : r.checks) {
    INFO(c.name << ": " << c.value << " vs " << c.threshold << " " << c.detail);
    CHECK(c.pass);
  }
  CHECK(r.all_pass());
  CHECK(r.checks.size() >= 8);
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j["scenario"] == "tiny_equilibrium");
}

TEST_CASE("trajectory checks catch an energy increase") {
  const EnsembleBuild b = build_ensemble(tiny_config());
  const Trajectory& t = b.ensemble.member(0);
  auto left = t.energy().left();
  auto right = t.energy().right();
  left[10] += 0.5;
  right[10] += 0.5;
  const Trajectory bad = Trajectory::make_unchecked(t.times(), t.states(), left, right, t.law());
  bool monotonicity_failed = false;
  for (const auto& c : check_trajectories({t, bad})) {
    if (c.name == "energy_monotonicity") monotonicity_failed = !c.pass;
  }
  CHECK(monotonicity_failed);
  for (const auto& c : check_trajectories({t})) CHECK(c.pass);
}

#ifdef SEMIFLOW_LAB_EXE
namespace {

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(SEMIFLOW_LAB_EXE) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("command line tool") {
  const fs::path dir = scratch("cli");
  const fs::path config = write_text(dir / "tiny.ini", kTinyEquilibrium);
  const std::string common = "--config " + config.string() + " --out ";

  CHECK(run_cli("run-solver " + common + (dir / "runs").string(), dir / "run.log") == 0);
  CHECK(fs::exists(dir / "runs" / "tables" / "manifest.json"));

  REQUIRE(run_cli("build-ensemble " + common + (dir / "ens").string(), dir / "build.log") == 0);
  CHECK(fs::exists(dir / "ens" / "paths.txt"));
  CHECK(fs::exists(dir / "ens" / "members"));

  CHECK(run_cli("select " + common + (dir / "sel").string() + " --ensemble " + (dir / "ens").string(),
                dir / "select.log") == 0);
  CHECK(fs::exists(dir / "sel" / "selection.json"));

  CHECK(run_cli("verify " + common + (dir / "verify").string(), dir / "verify.log") == 0);
  const std::string log = read_text(dir / "verify.log");
  CHECK(log.find("FAIL") == std::string::npos);
  CHECK(log.find("PASS energy_monotonicity") != std::string::npos);
  CHECK(fs::exists(dir / "verify" / "report.json"));

  CHECK(run_cli("semigroup " + common + (dir / "sg").string() + " --t1 0.25 --t2 0.5", dir / "sg.log") == 0);

  // A hand-corrupted record: the energy rises at one sample.
  const fs::path member = *fs::directory_iterator(dir / "ens" / "members");
  const fs::path corrupt = dir / "corrupt";
  fs::copy(member, corrupt, fs::copy_options::recursive);
  CsvTable profile = read_csv_table(corrupt / "energy_profile.csv");
  profile.rows[10][1] += 0.5;
  profile.rows[10][2] += 0.5;
  write_csv_table(corrupt / "energy_profile.csv", profile);
  CHECK(run_cli("verify " + common + (dir / "v_ok").string() + " --trajectory " + member.string(), dir / "ok.log") == 0);
  CHECK(run_cli("verify " + common + (dir / "v_bad").string() + " --trajectory " + corrupt.string(), dir / "bad.log") ==
        1);
  CHECK(read_text(dir / "bad.log").find("FAIL energy_monotonicity") != std::string::npos);

  CHECK(run_cli("verify --config " + (dir / "missing.ini").string() + " --out " + (dir / "x").string(),
                dir / "missing.log") != 0);
  write_text(dir / "broken.ini", "[grid]\ndim = 5\n");
  CHECK(run_cli("verify --config " + (dir / "broken.ini").string() + " --out " + (dir / "x").string(),
                dir / "broken.log") == 2);
}
#endif
