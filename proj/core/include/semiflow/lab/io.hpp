#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "semiflow/relative_energy.hpp"
#include "semiflow/selection.hpp"
#include "semiflow/solver.hpp"
#include "semiflow/trajectory.hpp"

namespace semiflow::lab {

// Run directory layout:
//   meta                  [solver] key = value echo of the config
//   times.csv             header `t`
//   energy.csv            header `t,E,cumulative_dissipation`
//   rho_NNNNN.csv         density field per sample (field_io format)
//   mom_NNNNN.csv         momentum field per sample
// Trajectory directories add energy_profile.csv (`t,E_left,E_right`),
// defect.csv (`t,defect_left,defect_right`) and provenance.txt; their meta
// carries the pressure law in a [trajectory] section. All numbers are written
// with 17 significant digits.

void write_run(const std::filesystem::path& dir, const SolverRun& run);
SolverRun read_run(const std::filesystem::path& dir);

void write_trajectory(const std::filesystem::path& dir, const Trajectory& t);
/// Loads without validation so damaged records can still be inspected.
Trajectory read_trajectory(const std::filesystem::path& dir);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv_table(const std::filesystem::path& path);
void write_csv_table(const std::filesystem::path& path, const CsvTable& table);

/// Named objects for emit_tables; the pointees must outlive the call.
struct TableSet {
  std::vector<std::pair<std::string, const SolverRun*>> runs;
  std::vector<std::pair<std::string, const Trajectory*>> trajectories;
  std::vector<std::pair<std::string, const WeakStrongReport*>> weak_strong;
  std::vector<std::pair<std::string, const SelectionResult*>> selections;
  std::vector<std::pair<std::string, const SemigroupReport*>> semigroups;

  bool empty() const;
};

/// Plot-ready outputs, one subdirectory per object name (the root when the
/// name is empty):
///   run         energy.csv `t,E,dissipation`
///   trajectory  energy.csv `t,E_left,E_right`, defect.csv `t,defect_left,defect_right`
///   weak-strong weak_strong.csv `tau,RE,bound,pass`
///   selection   selection.json
///   semigroup   semigroup.json
/// plus manifest.json `{"files": [...]}` listing every emitted file relative
/// to `dir`. Returns the same list.
std::vector<std::string> emit_tables(const TableSet& objects, const std::filesystem::path& dir);

std::vector<std::string> read_manifest(const std::filesystem::path& dir);

}  // namespace semiflow::lab
