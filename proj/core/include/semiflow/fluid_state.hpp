#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "semiflow/grid.hpp"
#include "semiflow/pressure_law.hpp"

namespace semiflow {

/// Densities below this value are treated as exact vacuum.
inline constexpr double kVacuumFloor = 1e-10;
/// Largest momentum norm tolerated in a vacuum cell.
inline constexpr double kVacuumMomentum = 1e-8;
/// Relative slack on the energy inequality defining admissible data.
inline constexpr double kMembershipRelTol = 1e-8;

inline constexpr double kInfiniteEnergy = std::numeric_limits<double>::infinity();

struct FluidState {
  ScalarField rho;
  VectorField mom;

  const TorusGrid& grid() const { return rho.grid(); }
  double mass() const;
  /// Velocity m/rho, zero in vacuum cells.
  VectorField velocity() const;
  /// Reason the state violates the phase-space constraints, if any.
  std::optional<std::string> violation() const;

  friend bool operator==(const FluidState&, const FluidState&) = default;
};

/// |m|^2/(2 rho) with the convex extension: 0 when m = 0, +inf when rho = 0
/// and m != 0 (within the vacuum floors above).
double kinetic_energy_density(double rho, std::span<const double> mom);

/// e(rho, m) = kinetic part + P(rho).
double energy_density(double rho, std::span<const double> mom, const PressureLaw& law);

/// Pointwise energy density; +inf entries propagate.
ScalarField energy_density_field(const FluidState& s, const PressureLaw& law);

/// Integral of the energy density; +inf if any cell is vacuum with momentum.
double total_energy(const FluidState& s, const PressureLaw& law);

double pressure_potential(const PressureLaw& law, double rho);

enum class MembershipReason { ok, grid_mismatch, non_finite, negative_density, vacuum_momentum, energy_exceeds };

struct MembershipResult {
  bool member = false;
  MembershipReason reason = MembershipReason::ok;
  double data_energy = 0.0;

  explicit operator bool() const { return member; }
};

std::string to_string(MembershipReason reason);

/// Checks [rho0, m0, E0] against the data set: rho0 >= 0 and the data energy
/// does not exceed E0 (relative slack kMembershipRelTol).
MembershipResult validate_data_membership(const ScalarField& rho0, const VectorField& mom0, double E0,
                                          const PressureLaw& law);

/// Constant density M/|T^N| at rest, with its energy E_M.
std::pair<FluidState, double> equilibrium_state(double mass, const PressureLaw& law, const TorusGrid& grid);

}  // namespace semiflow
