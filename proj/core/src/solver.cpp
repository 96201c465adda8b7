#include "semiflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "semiflow/spectral.hpp"

namespace semiflow {
namespace {

constexpr double kSolveTol = 1e-14;
constexpr int kSolveMaxIter = 500;

FluidState axpy(const FluidState& x, double a, const FluidState& k) {
  FluidState out = x;
  out.rho += a * k.rho;
  out.mom += a * k.mom;
  return out;
}

// Inviscid right-hand side in split form. With a skew-symmetric derivative
// the kinetic and pressure contributions cancel in the energy exactly.
FluidState inviscid_rhs(const FluidState& s, const PressureLaw& law) {
  const TorusGrid& grid = s.grid();
  const int dim = grid.dim();
  const VectorField u = s.velocity();

  ScalarField div_m(grid);
  for (int j = 0; j < dim; ++j) div_m += dealiased_derivative(s.mom.component(j), j);

  ScalarField enthalpy(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) enthalpy[i] = law.potential_derivative(s.rho[i]);

  FluidState rhs{-1.0 * div_m, VectorField(grid)};
  for (int i = 0; i < dim; ++i) {
    const ScalarField& ui = u.component(i);
    ScalarField acc = hadamard(ui, div_m);
    for (int j = 0; j < dim; ++j) {
      const ScalarField& mj = s.mom.component(j);
      acc += dealiased_derivative(hadamard(mj, ui), j);
      acc += hadamard(mj, dealiased_derivative(ui, j));
    }
    ScalarField& out = rhs.mom.component(i);
    out = -0.5 * acc;
    out -= hadamard(s.rho, dealiased_derivative(enthalpy, i));
  }
  return rhs;
}

// Solves (rho + a L) x = b with L = (-Laplacian)^(2m) by conjugate gradients,
// preconditioned with the constant-coefficient operator (mean rho + a L).
ScalarField viscous_solve(const ScalarField& rho, double a, int power, const ScalarField& b,
                          const ScalarField& guess) {
  const TorusGrid& grid = rho.grid();
  const int dim = grid.dim();
  const double rho_bar = integrate(rho) / grid.volume();
  const double pi2 = std::numbers::pi * std::numbers::pi;

  auto apply = [&](const ScalarField& x) { return hadamard(rho, x) + a * neg_laplacian_power(x, power); };
  auto precondition = [&](const ScalarField& r) {
    return apply_multiplier(r, [&](const ModeInfo& mode) -> std::complex<double> {
      double k2 = static_cast<double>(mode.k[0]) * mode.k[0];
      if (dim == 2) k2 += static_cast<double>(mode.k[1]) * mode.k[1];
      return 1.0 / (rho_bar + a * std::pow(pi2 * k2, power));
    });
  };

  const double b_norm = l2_norm(b);
  if (b_norm == 0.0) return ScalarField(grid);

  ScalarField x = guess;
  ScalarField r = b - apply(x);
  ScalarField z = precondition(r);
  ScalarField p = z;
  double rz = inner_product(r, z);
  for (int it = 0; it < kSolveMaxIter; ++it) {
    if (l2_norm(r) <= kSolveTol * b_norm) return x;
    const ScalarField ap = apply(p);
    const double alpha = rz / inner_product(p, ap);
    x += alpha * p;
    r -= alpha * ap;
    z = precondition(r);
    const double rz_next = inner_product(r, z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  if (l2_norm(r) <= 1e3 * kSolveTol * b_norm) return x;
  throw std::runtime_error("integrate_system: viscous solve did not converge");
}

// Crank-Nicolson step of rho u_t = -eps L u with rho frozen; returns the
// dissipated energy tau*eps*<L ubar, ubar> and updates the momentum.
double viscous_substep(FluidState& s, double tau, const SolverConfig& cfg) {
  if (cfg.eps == 0.0) return 0.0;
  const int power = 2 * cfg.m_order;
  const double a = 0.5 * tau * cfg.eps;
  const VectorField u = s.velocity();
  double dissipated = 0.0;
  for (int i = 0; i < s.grid().dim(); ++i) {
    const ScalarField& ui = u.component(i);
    const ScalarField rhs = hadamard(s.rho, ui) - a * neg_laplacian_power(ui, power);
    const ScalarField next = viscous_solve(s.rho, a, power, rhs, ui);
    const ScalarField mid = 0.5 * (ui + next);
    dissipated += tau * cfg.eps * inner_product(neg_laplacian_power(mid, power), mid);
    s.mom.component(i) = hadamard(s.rho, next);
  }
  return dissipated;
}

void check_admissible(const FluidState& s, const SolverConfig& cfg, double t) {
  if (!s.rho.all_finite() || !s.mom.all_finite()) {
    throw SolverAborted("non-finite values at t=" + std::to_string(t), t);
  }
  const double min_rho = s.rho.min();
  if (min_rho < cfg.rho_floor) {
    std::ostringstream msg;
    msg << "density " << min_rho << " fell below floor " << cfg.rho_floor << " at t=" << t;
    throw SolverAborted(msg.str(), t);
  }
  const double speed = max_wave_speed(s, cfg.law);
  const double courant = cfg.dt * speed / s.grid().spacing();
  if (courant > cfg.cfl_limit) {
    std::ostringstream msg;
    msg << "CFL number " << courant << " exceeds " << cfg.cfl_limit << " at t=" << t;
    throw SolverAborted(msg.str(), t);
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (!(eps >= 0.0)) throw std::invalid_argument("SolverConfig: eps must be >= 0");
  if (m_order < 1 || m_order > 3) throw std::invalid_argument("SolverConfig: m_order must be in 1..3");
  if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be > 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("SolverConfig: t_end must be > 0");
  if (sample_stride < 1) throw std::invalid_argument("SolverConfig: sample_stride must be >= 1");
  if (!(rho_floor > 0.0)) throw std::invalid_argument("SolverConfig: rho_floor must be > 0");
  if (!(cfl_limit > 0.0 && cfl_limit <= 0.5)) throw std::invalid_argument("SolverConfig: cfl_limit must be in (0, 0.5]");
  const long long steps = std::llround(t_end / dt);
  if (steps < 1 || std::abs(steps * dt - t_end) > 1e-9 * t_end) {
    throw std::invalid_argument("SolverConfig: t_end must be an integer multiple of dt");
  }
  if (steps % sample_stride != 0) {
    throw std::invalid_argument("SolverConfig: step count must be a multiple of sample_stride");
  }
}

long long SolverConfig::step_count() const { return std::llround(t_end / dt); }

double max_wave_speed(const FluidState& state, const PressureLaw& law) {
  double speed = 0.0;
  const VectorField u = state.velocity();
  for (std::size_t i = 0; i < state.grid().size(); ++i) {
    const double c = std::sqrt(std::max(0.0, law.pressure_derivative(std::max(state.rho[i], 0.0))));
    speed = std::max(speed, u.norm_at(i) + c);
  }
  return speed;
}

double stable_time_step(const FluidState& state, const PressureLaw& law, double cfl_limit) {
  const double speed = max_wave_speed(state, law);
  if (speed == 0.0) return std::numeric_limits<double>::infinity();
  return cfl_limit * state.grid().spacing() / speed;
}

FluidState mollify_initial_data(const ScalarField& rho0, const VectorField& mom0, double smoothing,
                                const PressureLaw& law) {
  if (!(smoothing >= 0.0)) throw std::invalid_argument("mollify_initial_data: smoothing must be >= 0");
  const double data_energy = total_energy(FluidState{rho0, mom0}, law);
  if (!std::isfinite(data_energy)) throw std::invalid_argument("mollify_initial_data: data has infinite energy");

  FluidState s{gaussian_filter(rho0, smoothing), VectorField(rho0.grid())};
  for (int a = 0; a < mom0.dim(); ++a) s.mom.component(a) = gaussian_filter(mom0.component(a), smoothing);

  const TorusGrid& grid = rho0.grid();
  const double rho_bar = integrate(s.rho) / grid.volume();
  if (!(rho_bar > 0.0)) throw std::invalid_argument("mollify_initial_data: total mass must be positive");
  const double target = 1e-3 * rho_bar;
  const double min_rho = s.rho.min();
  if (min_rho < target) {
    const double theta = (target - min_rho) / (rho_bar - min_rho);
    s.rho *= 1.0 - theta;
    for (auto& v : s.rho.values()) v += theta * rho_bar;
    for (int a = 0; a < s.mom.dim(); ++a) {
      ScalarField& c = s.mom.component(a);
      const double mean = integrate(c) / grid.volume();
      c *= 1.0 - theta;
      for (auto& v : c.values()) v += theta * mean;
    }
  }
  const double energy = total_energy(s, law);
  if (!(energy <= data_energy + kMembershipRelTol * std::max(1.0, data_energy))) {
    throw std::runtime_error("mollify_initial_data: smoothed data exceeds the data energy");
  }
  return s;
}

SolverRun integrate_system(const FluidState& init, const SolverConfig& config) {
  config.validate();
  if (auto why = init.violation()) throw std::invalid_argument("integrate_system: " + *why);
  if (init.rho.min() <= 0.0) throw std::invalid_argument("integrate_system: initial density must be positive");

  SolverRun run;
  run.config = config;
  const long long steps = config.step_count();
  const double dt = config.dt;

  FluidState s = init;
  double dissipation = 0.0;
  auto record = [&](long long step) {
    run.times.push_back(static_cast<double>(step) * dt);
    run.states.push_back(s);
    run.dissipation.push_back(dissipation);
    run.energy.push_back(total_energy(s, config.law));
  };
  record(0);

  for (long long step = 0; step < steps; ++step) {
    const double t = static_cast<double>(step) * dt;
    check_admissible(s, config, t);

    dissipation += viscous_substep(s, 0.5 * dt, config);

    const FluidState k1 = inviscid_rhs(s, config.law);
    const FluidState k2 = inviscid_rhs(axpy(s, 0.5 * dt, k1), config.law);
    const FluidState k3 = inviscid_rhs(axpy(s, 0.5 * dt, k2), config.law);
    const FluidState k4 = inviscid_rhs(axpy(s, dt, k3), config.law);
    s.rho += (dt / 6.0) * (k1.rho + 2.0 * k2.rho + 2.0 * k3.rho + k4.rho);
    s.mom += (dt / 6.0) * (k1.mom + 2.0 * k2.mom + 2.0 * k3.mom + k4.mom);
    if (!(s.rho.min() >= config.rho_floor)) check_admissible(s, config, t + dt);

    dissipation += viscous_substep(s, 0.5 * dt, config);

    if ((step + 1) % config.sample_stride == 0) record(step + 1);
  }
  return run;
}

std::vector<double> energy_balance_residual(const SolverRun& run) {
  std::vector<double> out;
  for (std::size_t j = 0; j + 1 < run.energy.size(); ++j) {
    out.push_back(run.energy[j + 1] - run.energy[j] + (run.dissipation[j + 1] - run.dissipation[j]));
  }
  return out;
}

double energy_balance_drift(const SolverRun& run) {
  double drift = 0.0;
  for (std::size_t j = 0; j < run.energy.size(); ++j) {
    drift = std::max(drift, std::abs(run.energy[j] + run.dissipation[j] - run.energy.front()));
  }
  return drift;
}

}  // namespace semiflow
