#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semiflow/energy_profile.hpp"
#include "semiflow/fluid_state.hpp"
#include "semiflow/solver.hpp"
#include "semiflow/test_function.hpp"

namespace semiflow {

inline constexpr double kDefectTol = 1e-8;
inline constexpr double kMassRelTol = 1e-10;
inline constexpr double kSeamTol = 1e-6;
/// Two sample times are the same if they differ by at most this much.
inline constexpr double kTimeMatchTol = 1e-9;

/// Time-sampled dissipative-solution candidate [rho, m, E].
///
/// The defect is E - int e(rho, m) dx, kept for both energy limits at every
/// sample. make() rejects anything that breaks the structural constraints;
/// make_unchecked() exists for readers that must be able to load corrupted
/// records and report on them through violations().
class Trajectory {
 public:
  static Trajectory make(std::vector<double> times, std::vector<FluidState> states, std::vector<double> energy_left,
                         std::vector<double> energy_right, PressureLaw law, std::string provenance = {});
  static Trajectory make_unchecked(std::vector<double> times, std::vector<FluidState> states,
                                   std::vector<double> energy_left, std::vector<double> energy_right, PressureLaw law,
                                   std::string provenance = {});

  /// Human-readable list of broken invariants; empty for a valid trajectory.
  std::vector<std::string> violations() const;

  std::size_t size() const { return states_.size(); }
  const std::vector<double>& times() const { return energy_.times(); }
  double horizon() const { return energy_.horizon(); }
  const std::vector<FluidState>& states() const { return states_; }
  const FluidState& state(std::size_t j) const { return states_[j]; }
  const EnergyProfile& energy() const { return energy_; }
  const std::vector<double>& defect_left() const { return defect_left_; }
  const std::vector<double>& defect_right() const { return defect_right_; }
  const PressureLaw& law() const { return law_; }
  const std::string& provenance() const { return provenance_; }
  const TorusGrid& grid() const { return states_.front().grid(); }

  /// Index of the sample at time t, if there is one.
  std::optional<std::size_t> sample_index(double t) const;

  /// Equal states and energies, times within 1e-12; provenance ignored.
  friend bool operator==(const Trajectory& a, const Trajectory& b);

 private:
  Trajectory() = default;

  EnergyProfile energy_;
  std::vector<FluidState> states_;
  std::vector<double> defect_left_;
  std::vector<double> defect_right_;
  PressureLaw law_ = PressureLaw::isentropic(1.0, 2.0);
  std::string provenance_;
};

/// Packages a solver run. E0 is the trajectory's E(0-); NaN means the energy
/// of the run's first sample.
Trajectory to_trajectory(const SolverRun& run, double E0, std::string provenance = {});

/// S_T: samples from T on, re-based at 0. The new E(0-) is
/// eta * E(T-) + (1 - eta) * E(T+). T must be a sample time.
Trajectory shift(const Trajectory& t, double T, double eta = 1.0);

/// t1 on [0, T), t2 re-based at T afterwards. The seam sample takes t2's
/// state and right energy limit and records t2's E(0-) as the left limit.
/// Requires matching seam states (negative-Sobolev distance <= kSeamTol)
/// and t2.E(0-) <= t1.E(T-).
Trajectory continue_at(const Trajectory& t1, double T, const Trajectory& t2);

enum class WeakEquation { continuity, momentum, energy };

/// Signed value of the weak identity for continuity or momentum (zero for an
/// exact solution). The momentum form carries no defect terms.
double weak_form_value(const Trajectory& t, const TestFunction& phi, WeakEquation eq);

/// |weak_form_value| for continuity and momentum. For energy, the amount by
/// which int psi' E dt + psi(0) E(0-) falls below 0, with psi the time
/// factor of phi (coefficients must be nonnegative).
double weak_form_residual(const Trajectory& t, const TestFunction& phi, WeakEquation eq);

/// max_j (||rho1 - rho2||_{-ell} + ||m1 - m2||_{-ell}) over samples in
/// [0, T_max] plus int_0^T_max |E1 - E2| dt. Sample times must agree.
double trajectory_distance(const Trajectory& a, const Trajectory& b, double T_max, int ell);

/// Local Jensen gap of the finest (last) family member at time tau: cell
/// average of e(rho, m) minus e at the cell averages, constant on square
/// cells of side `cell`. Needs at least three members.
ScalarField defect_field_estimate(const std::vector<Trajectory>& family, double tau, double cell);

/// Defect of the extrapolated limit: the Aitken-extrapolated energy E(tau)
/// of the family minus the energy of the finest member's cell averages.
double extrapolated_global_defect(const std::vector<Trajectory>& family, double tau, double cell);

}  // namespace semiflow
