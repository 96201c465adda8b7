#include "semiflow/lab/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "semiflow/field_io.hpp"
#include "semiflow/lab/config.hpp"

namespace fs = std::filesystem;

namespace semiflow::lab {
namespace {

std::string sample_name(const char* prefix, std::size_t j) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%05zu.csv", prefix, j);
  return buf;
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io: cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_states(const fs::path& dir, const std::vector<FluidState>& states) {
  for (std::size_t j = 0; j < states.size(); ++j) {
    write_field(dir / sample_name("rho", j), states[j].rho);
    write_field(dir / sample_name("mom", j), states[j].mom);
  }
}

std::vector<FluidState> read_states(const fs::path& dir, std::size_t count) {
  std::vector<FluidState> states;
  states.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    states.push_back({read_scalar_field(dir / sample_name("rho", j)), read_vector_field(dir / sample_name("mom", j))});
  }
  return states;
}

IniDocument config_echo(const SolverConfig& c) {
  IniDocument doc;
  doc.set("solver", "eps", num(c.eps));
  doc.set("solver", "m_order", std::to_string(c.m_order));
  doc.set("solver", "law", c.law.to_string());
  doc.set("solver", "dt", num(c.dt));
  doc.set("solver", "t_end", num(c.t_end));
  doc.set("solver", "sample_stride", std::to_string(c.sample_stride));
  doc.set("solver", "rho_floor", num(c.rho_floor));
  doc.set("solver", "cfl_limit", num(c.cfl_limit));
  return doc;
}

SolverConfig config_from_echo(const IniDocument& doc) {
  SolverConfig c;
  c.eps = doc.get_double("solver", "eps", c.eps);
  c.m_order = static_cast<int>(doc.get_int("solver", "m_order", c.m_order));
  c.law = PressureLaw::parse(doc.get_string("solver", "law", c.law.to_string()));
  c.dt = doc.get_double("solver", "dt", c.dt);
  c.t_end = doc.get_double("solver", "t_end", c.t_end);
  c.sample_stride = static_cast<int>(doc.get_int("solver", "sample_stride", c.sample_stride));
  c.rho_floor = doc.get_double("solver", "rho_floor", c.rho_floor);
  c.cfl_limit = doc.get_double("solver", "cfl_limit", c.cfl_limit);
  return c;
}

CsvTable times_table(const std::vector<double>& times) {
  CsvTable t{{"t"}, {}};
  for (double v : times) t.rows.push_back({v});
  return t;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::runtime_error("csv: bad number '" + cell + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<double> CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::out_of_range("csv: no column " + name);
  const auto c = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(c));
  return out;
}

CsvTable read_csv_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot read " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file " + path.string());
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split_numbers(line);
    if (row.size() != t.header.size()) throw std::runtime_error("csv: ragged row in " + path.string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_csv_table(const fs::path& path, const CsvTable& table) {
  std::ostringstream os;
  for (std::size_t c = 0; c < table.header.size(); ++c) os << (c ? "," : "") << table.header[c];
  os << "\n" << std::setprecision(17);
  for (const auto& r : table.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << r[c];
    os << "\n";
  }
  write_text(path, os.str());
}

void write_run(const fs::path& dir, const SolverRun& run) {
  fs::create_directories(dir);
  write_text(dir / "meta", config_echo(run.config).to_string());
  write_csv_table(dir / "times.csv", times_table(run.times));
  CsvTable energy{{"t", "E", "cumulative_dissipation"}, {}};
  for (std::size_t j = 0; j < run.times.size(); ++j) energy.rows.push_back({run.times[j], run.energy[j], run.dissipation[j]});
  write_csv_table(dir / "energy.csv", energy);
  write_states(dir, run.states);
}

SolverRun read_run(const fs::path& dir) {
  SolverRun run;
  run.config = config_from_echo(IniDocument::load(dir / "meta"));
  const CsvTable energy = read_csv_table(dir / "energy.csv");
  run.times = read_csv_table(dir / "times.csv").column("t");
  run.energy = energy.column("E");
  run.dissipation = energy.column("cumulative_dissipation");
  run.states = read_states(dir, run.times.size());
  return run;
}

void write_trajectory(const fs::path& dir, const Trajectory& t) {
  fs::create_directories(dir);
  IniDocument meta;
  meta.set("trajectory", "law", t.law().to_string());
  meta.set("trajectory", "samples", std::to_string(t.size()));
  write_text(dir / "meta", meta.to_string());
  write_text(dir / "provenance.txt", t.provenance());
  write_csv_table(dir / "times.csv", times_table(t.times()));

  const auto& left = t.energy().left();
  const auto& right = t.energy().right();
  CsvTable energy{{"t", "E", "cumulative_dissipation"}, {}};
  CsvTable profile{{"t", "E_left", "E_right"}, {}};
  CsvTable defect{{"t", "defect_left", "defect_right"}, {}};
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double tj = t.times()[j];
    energy.rows.push_back({tj, right[j], left.front() - right[j]});
    profile.rows.push_back({tj, left[j], right[j]});
    defect.rows.push_back({tj, t.defect_left()[j], t.defect_right()[j]});
  }
  write_csv_table(dir / "energy.csv", energy);
  write_csv_table(dir / "energy_profile.csv", profile);
  write_csv_table(dir / "defect.csv", defect);
  write_states(dir, t.states());
}

Trajectory read_trajectory(const fs::path& dir) {
  const IniDocument meta = IniDocument::load(dir / "meta");
  const auto law = meta.get("trajectory", "law");
  if (!law) throw std::runtime_error("io: " + (dir / "meta").string() + " has no trajectory law");
  const CsvTable profile = read_csv_table(dir / "energy_profile.csv");
  std::vector<double> times = profile.column("t");
  std::vector<FluidState> states = read_states(dir, times.size());
  std::string provenance = fs::exists(dir / "provenance.txt") ? read_text(dir / "provenance.txt") : std::string{};
  return Trajectory::make_unchecked(std::move(times), std::move(states), profile.column("E_left"),
                                    profile.column("E_right"), PressureLaw::parse(*law), std::move(provenance));
}

bool TableSet::empty() const {
  return runs.empty() && trajectories.empty() && weak_strong.empty() && selections.empty() && semigroups.empty();
}

std::vector<std::string> emit_tables(const TableSet& objects, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<std::string> files;
  auto target = [&](const std::string& name, const std::string& file) {
    const fs::path rel = name.empty() ? fs::path(file) : fs::path(name) / file;
    fs::create_directories((dir / rel).parent_path());
    if (std::find(files.begin(), files.end(), rel.generic_string()) != files.end()) {
      throw std::invalid_argument("emit_tables: duplicate output " + rel.generic_string());
    }
    files.push_back(rel.generic_string());
    return dir / rel;
  };

  for (const auto& [name, run] : objects.runs) {
    CsvTable energy{{"t", "E", "dissipation"}, {}};
    for (std::size_t j = 0; j < run->times.size(); ++j) energy.rows.push_back({run->times[j], run->energy[j], run->dissipation[j]});
    write_csv_table(target(name, "energy.csv"), energy);
  }
  for (const auto& [name, t] : objects.trajectories) {
    CsvTable energy{{"t", "E_left", "E_right"}, {}};
    CsvTable defect{{"t", "defect_left", "defect_right"}, {}};
    for (std::size_t j = 0; j < t->size(); ++j) {
      energy.rows.push_back({t->times()[j], t->energy().left()[j], t->energy().right()[j]});
      defect.rows.push_back({t->times()[j], t->defect_left()[j], t->defect_right()[j]});
    }
    write_csv_table(target(name, "energy.csv"), energy);
    write_csv_table(target(name, "defect.csv"), defect);
  }
  for (const auto& [name, r] : objects.weak_strong) write_text(target(name, "weak_strong.csv"), r->to_csv());
  for (const auto& [name, r] : objects.selections) write_text(target(name, "selection.json"), r->to_json());
  for (const auto& [name, r] : objects.semigroups) write_text(target(name, "semigroup.json"), r->to_json());

  nlohmann::json manifest;
  manifest["files"] = files;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  return files;
}

std::vector<std::string> read_manifest(const fs::path& dir) {
  const auto doc = nlohmann::json::parse(read_text(dir / "manifest.json"));
  return doc.at("files").get<std::vector<std::string>>();
}

}  // namespace semiflow::lab
