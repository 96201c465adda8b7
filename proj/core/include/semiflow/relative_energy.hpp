#pragma once

#include <string>
#include <utility>
#include <vector>

#include "semiflow/trajectory.hpp"

namespace semiflow {

/// Smooth comparison flow (r > 0, U) sampled at a set of times, with the
/// sup norm of the velocity gradient at each sample.
struct ReferenceSolution {
  std::vector<double> times;
  std::vector<ScalarField> r;
  std::vector<VectorField> U;
  std::vector<double> grad_sup;

  /// Packages a trajectory (or run) whose density stays positive.
  static ReferenceSolution from_states(const std::vector<double>& times, const std::vector<FluidState>& states);
  std::size_t size() const { return times.size(); }
};

/// max over nodes of the Frobenius norm of the spectral gradient of U.
double gradient_sup_norm(const VectorField& U);

/// int [ 1/2 rho |m/rho - U|^2 + P(rho) - P'(r)(rho - r) - P(r) ] dx, +inf on
/// vacuum cells carrying momentum.
double relative_energy(const FluidState& s, const ScalarField& r, const VectorField& U, const PressureLaw& law);

/// (energy_gap + re0) * exp(c * grad_integral).
double gronwall_bound(double re0, double energy_gap, double grad_integral, double c);

struct WeakStrongOptions {
  std::vector<double> c_grid{1.0, 2.0, 4.0, 8.0};
  double c = 4.0;                // constant that decides `pass`
  double eps = 0.0;              // regularization of the compared trajectory
  int m_order = 1;
  double tolerance = 1e-10;
};

struct WeakStrongReport {
  std::vector<double> times;
  std::vector<double> re;
  std::vector<double> bound;                   // for options.c
  std::vector<std::vector<double>> bound_by_c;  // one row per c_grid entry
  std::vector<bool> pass_by_c;
  double energy_gap = 0.0;
  double re0 = 0.0;
  double max_re = 0.0;
  bool pass = false;

  /// Columns tau,RE,bound,pass.
  std::string to_csv() const;
};

/// Per-sample relative energy against the reference and the Gronwall bound
/// with the regularization allowance (eps/4) int ||Laplacian^m U||^2 dt
/// added to the initial terms. Time integrals are upper sums.
WeakStrongReport weak_strong_check(const Trajectory& t, const ReferenceSolution& ref, const WeakStrongOptions& options = {});

/// The two remainder integrals of the relative energy inequality at one time:
/// int (1/r)(r(U_t + U.grad U) + grad p(r)).(rho U - m) and
/// int P''(r)(r - rho)(r_t + div(rU)).
std::pair<double, double> remainder_terms(const FluidState& s, const ScalarField& r, const VectorField& U,
                                          const ScalarField& r_t, const VectorField& U_t, const PressureLaw& law);

/// Gradient-catastrophe estimate 1 / max(-d_a(u_a +- c)) for the initial
/// state (infinite if no characteristic family compresses).
double blowup_time_estimate(const FluidState& s, const PressureLaw& law);

struct ManufacturedReference {
  ReferenceSolution reference;
  std::vector<FluidState> states;
  double t_ref = 0.0;
  double blowup_estimate = 0.0;
};

/// Runs the inviscid solver from `init` up to `fraction` of the blow-up
/// estimate, rounded down to a multiple of dt * stride.
ManufacturedReference manufacture_reference(const FluidState& init, const PressureLaw& law, double dt,
                                            int sample_stride, double fraction = 0.6);

/// Exact 1D simple wave for gamma = 3: the Riemann invariants u +- c each
/// obey Burgers' equation, u - c is held constant and u + c starts as
/// w_plus + amplitude sin(pi mode x).
class SimpleWave {
 public:
  SimpleWave(double a, double w_minus, double w_plus, double amplitude, int mode);

  PressureLaw law() const { return PressureLaw::isentropic(a_, 3.0); }
  double breaking_time() const;
  /// Density and velocity at time t (t below the breaking time).
  std::pair<ScalarField, VectorField> fields(const TorusGrid& grid, double t) const;
  /// Exact time derivatives of density and velocity.
  std::pair<ScalarField, VectorField> time_derivatives(const TorusGrid& grid, double t) const;
  FluidState state(const TorusGrid& grid, double t) const;

 private:
  double riemann_plus(double x, double t, double& slope) const;

  double a_;
  double w_minus_;
  double w_plus_;
  double amplitude_;
  int mode_;
};

}  // namespace semiflow
