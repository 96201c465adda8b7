#include "semiflow/fluid_state.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "semiflow/spectral.hpp"

namespace semiflow {
namespace {

double node_kinetic(const FluidState& s, std::size_t i) {
  double buf[2] = {0.0, 0.0};
  for (int a = 0; a < s.mom.dim(); ++a) buf[a] = s.mom.component(a)[i];
  return kinetic_energy_density(s.rho[i], std::span<const double>(buf, s.mom.dim()));
}

}  // namespace

double FluidState::mass() const { return integrate(rho); }

VectorField FluidState::velocity() const {
  VectorField u(grid());
  for (std::size_t i = 0; i < grid().size(); ++i) {
    if (rho[i] < kVacuumFloor) continue;
    for (int a = 0; a < mom.dim(); ++a) u.component(a)[i] = mom.component(a)[i] / rho[i];
  }
  return u;
}

std::optional<std::string> FluidState::violation() const {
  if (!(mom.grid() == rho.grid())) return "density and momentum on different grids";
  if (!rho.all_finite() || !mom.all_finite()) return "non-finite field values";
  for (std::size_t i = 0; i < grid().size(); ++i) {
    if (rho[i] < -kVacuumFloor) return "negative density at node " + std::to_string(i);
    if (rho[i] < kVacuumFloor && mom.norm_at(i) >= kVacuumMomentum) {
      return "vacuum with nonzero momentum at node " + std::to_string(i);
    }
  }
  return std::nullopt;
}

double kinetic_energy_density(double rho, std::span<const double> mom) {
  double m2 = 0.0;
  for (double m : mom) m2 += m * m;
  if (rho < kVacuumFloor) {
    return std::sqrt(m2) < kVacuumMomentum ? 0.0 : kInfiniteEnergy;
  }
  return 0.5 * m2 / rho;
}

double energy_density(double rho, std::span<const double> mom, const PressureLaw& law) {
  return kinetic_energy_density(rho, mom) + law.potential(rho);
}

ScalarField energy_density_field(const FluidState& s, const PressureLaw& law) {
  ScalarField e(s.grid());
  for (std::size_t i = 0; i < s.grid().size(); ++i) e[i] = node_kinetic(s, i) + law.potential(s.rho[i]);
  return e;
}

double total_energy(const FluidState& s, const PressureLaw& law) {
  return integrate(energy_density_field(s, law));
}

double pressure_potential(const PressureLaw& law, double rho) {
  if (rho < 0.0) throw std::invalid_argument("pressure_potential: rho must be >= 0");
  return law.potential(rho);
}

std::string to_string(MembershipReason reason) {
  switch (reason) {
    case MembershipReason::ok: return "ok";
    case MembershipReason::grid_mismatch: return "grid mismatch";
    case MembershipReason::non_finite: return "non-finite values";
    case MembershipReason::negative_density: return "negative density";
    case MembershipReason::vacuum_momentum: return "vacuum with momentum";
    case MembershipReason::energy_exceeds: return "energy exceeds E0";
  }
  return "unknown";
}

MembershipResult validate_data_membership(const ScalarField& rho0, const VectorField& mom0, double E0,
                                          const PressureLaw& law) {
  MembershipResult r;
  if (!(rho0.grid() == mom0.grid())) {
    r.reason = MembershipReason::grid_mismatch;
    return r;
  }
  if (!rho0.all_finite() || !mom0.all_finite() || !std::isfinite(E0)) {
    r.reason = MembershipReason::non_finite;
    return r;
  }
  for (std::size_t i = 0; i < rho0.size(); ++i) {
    if (rho0[i] < 0.0) {
      r.reason = MembershipReason::negative_density;
      return r;
    }
  }
  const FluidState s{rho0, mom0};
  r.data_energy = total_energy(s, law);
  if (!std::isfinite(r.data_energy)) {
    r.reason = MembershipReason::vacuum_momentum;
    return r;
  }
  if (r.data_energy > E0 + kMembershipRelTol * std::max(1.0, std::abs(E0))) {
    r.reason = MembershipReason::energy_exceeds;
    return r;
  }
  r.member = true;
  return r;
}

std::pair<FluidState, double> equilibrium_state(double mass, const PressureLaw& law, const TorusGrid& grid) {
  if (mass < 0.0) throw std::invalid_argument("equilibrium_state: mass must be >= 0");
  const double rho = mass / grid.volume();
  FluidState s{ScalarField(grid, rho), VectorField(grid, 0.0)};
  const double energy = total_energy(s, law);
  return {std::move(s), energy};
}

}  // namespace semiflow
