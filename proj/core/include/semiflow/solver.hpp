#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "semiflow/fluid_state.hpp"
#include "semiflow/pressure_law.hpp"

namespace semiflow {

struct SolverConfig {
  double eps = 0.0;                // hyperviscosity coefficient
  int m_order = 1;                 // viscous operator is Laplacian^(2 m_order)
  PressureLaw law = PressureLaw::isentropic(1.0, 2.0);
  double dt = 1e-3;
  double t_end = 1.0;
  int sample_stride = 1;
  double rho_floor = 1e-8;
  double cfl_limit = 0.5;          // bound on dt * max(|u| + c) / h

  /// Throws std::invalid_argument on inconsistent parameters.
  void validate() const;
  /// Number of time steps; t_end must be an integer multiple of dt.
  long long step_count() const;
};

/// Raised when a run leaves the admissible regime (vacuum or CFL breach).
class SolverAborted : public std::runtime_error {
 public:
  SolverAborted(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

struct SolverRun {
  SolverConfig config;
  std::vector<double> times;
  std::vector<FluidState> states;
  /// Cumulative eps * int_0^t ||Laplacian^m u||^2 at each sample.
  std::vector<double> dissipation;
  std::vector<double> energy;
};

/// Gaussian low-pass of width `smoothing` on both fields followed, if the
/// density minimum falls below 1e-3 of its mean, by a convex blend toward the
/// constant state (mean rho, mean m). Both steps never raise the energy.
FluidState mollify_initial_data(const ScalarField& rho0, const VectorField& mom0, double smoothing,
                                const PressureLaw& law);

/// Strang splitting: half viscous step, RK4 on the inviscid part in
/// energy-conserving split form, half viscous step. The viscous substep is
/// Crank-Nicolson on rho u_t = -eps Laplacian^(2m) u, which makes the
/// recorded dissipation match the energy loss exactly.
SolverRun integrate_system(const FluidState& init, const SolverConfig& config);

/// E(t_{j+1}) - E(t_j) + dissipation over [t_j, t_{j+1}] per sample interval.
std::vector<double> energy_balance_residual(const SolverRun& run);

/// max_j |E(t_j) + D(t_j) - E(0)|.
double energy_balance_drift(const SolverRun& run);

/// Largest dt meeting the configured CFL bound for `state` (no rounding).
double stable_time_step(const FluidState& state, const PressureLaw& law, double cfl_limit = 0.5);

/// Max of (|u| + sound speed) over the grid.
double max_wave_speed(const FluidState& state, const PressureLaw& law);

}  // namespace semiflow
