#include "semiflow/relative_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "semiflow/spectral.hpp"

namespace semiflow {

ReferenceSolution ReferenceSolution::from_states(const std::vector<double>& times,
                                                 const std::vector<FluidState>& states) {
  if (times.size() != states.size() || states.empty()) {
    throw std::invalid_argument("ReferenceSolution: need one state per time");
  }
  ReferenceSolution ref;
  ref.times = times;
  for (const auto& s : states) {
    if (s.rho.min() <= 0.0) throw std::invalid_argument("ReferenceSolution: density must stay positive");
    ref.r.push_back(s.rho);
    ref.U.push_back(s.velocity());
    ref.grad_sup.push_back(gradient_sup_norm(ref.U.back()));
  }
  return ref;
}

double gradient_sup_norm(const VectorField& U) {
  const TorusGrid& grid = U.grid();
  ScalarField sq(grid);
  for (int i = 0; i < grid.dim(); ++i) {
    for (int j = 0; j < grid.dim(); ++j) {
      const ScalarField d = spectral_derivative(U.component(i), j, 1);
      sq += hadamard(d, d);
    }
  }
  return std::sqrt(sq.max());
}

double relative_energy(const FluidState& s, const ScalarField& r, const VectorField& U, const PressureLaw& law) {
  const TorusGrid& grid = s.grid();
  if (!(r.grid() == grid) || !(U.grid() == grid)) throw std::invalid_argument("relative_energy: grid mismatch");
  if (r.min() <= 0.0) throw std::invalid_argument("relative_energy: reference density must be positive");
  const int dim = grid.dim();
  double sum = 0.0;
  double rel[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rho = s.rho[i];
    for (int a = 0; a < dim; ++a) rel[a] = s.mom.component(a)[i] - rho * U.component(a)[i];
    const double kin = kinetic_energy_density(rho, std::span<const double>(rel, dim));
    if (!std::isfinite(kin)) return kInfiniteEnergy;
    const double ri = r[i];
    sum += kin + law.potential(rho) - law.potential_derivative(ri) * (rho - ri) - law.potential(ri);
  }
  return sum * grid.cell_volume();
}

double gronwall_bound(double re0, double energy_gap, double grad_integral, double c) {
  if (!std::isfinite(re0) || !std::isfinite(energy_gap) || !std::isfinite(grad_integral) || !std::isfinite(c)) {
    throw std::invalid_argument("gronwall_bound: inputs must be finite");
  }
  if (energy_gap < 0.0) throw std::invalid_argument("gronwall_bound: energy gap must be >= 0");
  return (energy_gap + re0) * std::exp(c * grad_integral);
}

WeakStrongReport weak_strong_check(const Trajectory& t, const ReferenceSolution& ref, const WeakStrongOptions& options) {
  if (ref.size() < t.size()) throw std::invalid_argument("weak_strong_check: reference horizon too short");
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (std::abs(ref.times[j] - t.times()[j]) > kTimeMatchTol * std::max(1.0, t.times()[j])) {
      throw std::invalid_argument("weak_strong_check: reference and trajectory samples differ");
    }
  }
  const PressureLaw& law = t.law();
  WeakStrongReport rep;
  rep.times = t.times();
  rep.energy_gap = std::max(0.0, t.defect_right().front());
  rep.re0 = relative_energy(t.state(0), ref.r[0], ref.U[0], law);

  // Upper sums of int ||grad U||_inf and of the regularization allowance.
  std::vector<double> grad_int(t.size(), 0.0);
  std::vector<double> allowance(t.size(), 0.0);
  std::vector<double> visc(t.size(), 0.0);
  if (options.eps > 0.0) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      double v = 0.0;
      for (int a = 0; a < t.grid().dim(); ++a) {
        const ScalarField lu = neg_laplacian_power(ref.U[j].component(a), options.m_order);
        v += inner_product(lu, lu);
      }
      visc[j] = v;
    }
  }
  for (std::size_t j = 1; j < t.size(); ++j) {
    const double dt = rep.times[j] - rep.times[j - 1];
    grad_int[j] = grad_int[j - 1] + dt * std::max(ref.grad_sup[j - 1], ref.grad_sup[j]);
    allowance[j] = allowance[j - 1] + 0.25 * options.eps * dt * std::max(visc[j - 1], visc[j]);
  }

  rep.bound_by_c.assign(options.c_grid.size(), {});
  rep.pass_by_c.assign(options.c_grid.size(), true);
  rep.pass = true;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double re = relative_energy(t.state(j), ref.r[j], ref.U[j], law);
    rep.re.push_back(re);
    rep.max_re = std::max(rep.max_re, re);
    const double base = rep.re0 + allowance[j];
    const double b = gronwall_bound(base, rep.energy_gap, grad_int[j], options.c);
    rep.bound.push_back(b);
    if (!(re <= b + options.tolerance)) rep.pass = false;
    for (std::size_t k = 0; k < options.c_grid.size(); ++k) {
      const double bk = gronwall_bound(base, rep.energy_gap, grad_int[j], options.c_grid[k]);
      rep.bound_by_c[k].push_back(bk);
      if (!(re <= bk + options.tolerance)) rep.pass_by_c[k] = false;
    }
  }
  return rep;
}

std::string WeakStrongReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "tau,RE,bound,pass\n";
  for (std::size_t j = 0; j < times.size(); ++j) {
    os << times[j] << ',' << re[j] << ',' << bound[j] << ',' << (re[j] <= bound[j] ? 1 : 0) << '\n';
  }
  return os.str();
}

std::pair<double, double> remainder_terms(const FluidState& s, const ScalarField& r, const VectorField& U,
                                          const ScalarField& r_t, const VectorField& U_t, const PressureLaw& law) {
  const TorusGrid& grid = s.grid();
  const int dim = grid.dim();
  ScalarField pr(grid);
  ScalarField p2(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    pr[i] = law.pressure(r[i]);
    p2[i] = law.potential_second_derivative(r[i]);
  }
  double momentum = 0.0;
  for (int a = 0; a < dim; ++a) {
    ScalarField res = hadamard(r, U_t.component(a));
    for (int b = 0; b < dim; ++b) {
      res += hadamard(r, hadamard(U.component(b), spectral_derivative(U.component(a), b, 1)));
    }
    res += spectral_derivative(pr, a, 1);
    ScalarField weight = hadamard(s.rho, U.component(a)) - s.mom.component(a);
    for (std::size_t i = 0; i < grid.size(); ++i) weight[i] /= r[i];
    momentum += inner_product(res, weight);
  }
  ScalarField cont = r_t;
  for (int a = 0; a < dim; ++a) cont += spectral_derivative(hadamard(r, U.component(a)), a, 1);
  const ScalarField weight = hadamard(p2, r - s.rho);
  return {momentum, inner_product(weight, cont)};
}

double blowup_time_estimate(const FluidState& s, const PressureLaw& law) {
  const TorusGrid& grid = s.grid();
  const VectorField u = s.velocity();
  ScalarField c(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) c[i] = std::sqrt(law.pressure_derivative(s.rho[i]));
  double rate = 0.0;
  for (int a = 0; a < grid.dim(); ++a) {
    const ScalarField du = spectral_derivative(u.component(a), a, 1);
    const ScalarField dc = spectral_derivative(c, a, 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rate = std::max(rate, -(du[i] + dc[i]));
      rate = std::max(rate, -(du[i] - dc[i]));
    }
  }
  return rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
}

ManufacturedReference manufacture_reference(const FluidState& init, const PressureLaw& law, double dt,
                                            int sample_stride, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("manufacture_reference: fraction in (0,1)");
  ManufacturedReference out;
  out.blowup_estimate = blowup_time_estimate(init, law);
  const double horizon = std::isfinite(out.blowup_estimate) ? fraction * out.blowup_estimate : 1.0;
  const double block = dt * sample_stride;
  const long long blocks = static_cast<long long>(std::floor(horizon / block + 1e-9));
  if (blocks < 1) throw std::invalid_argument("manufacture_reference: blow-up estimate shorter than one sample");
  SolverConfig cfg;
  cfg.eps = 0.0;
  cfg.law = law;
  cfg.dt = dt;
  cfg.sample_stride = sample_stride;
  cfg.t_end = static_cast<double>(blocks * sample_stride) * dt;
  const SolverRun run = integrate_system(init, cfg);
  out.t_ref = cfg.t_end;
  out.states = run.states;
  out.reference = ReferenceSolution::from_states(run.times, run.states);
  return out;
}

SimpleWave::SimpleWave(double a, double w_minus, double w_plus, double amplitude, int mode)
    : a_(a), w_minus_(w_minus), w_plus_(w_plus), amplitude_(amplitude), mode_(mode) {
  if (!(a > 0.0)) throw std::invalid_argument("SimpleWave: a must be > 0");
  if (!(w_plus - std::abs(amplitude) > w_minus)) throw std::invalid_argument("SimpleWave: density must stay positive");
  if (mode < 1) throw std::invalid_argument("SimpleWave: mode must be >= 1");
}

double SimpleWave::breaking_time() const { return 1.0 / (std::abs(amplitude_) * std::numbers::pi * mode_); }

double SimpleWave::riemann_plus(double x, double t, double& slope) const {
  const double w = std::numbers::pi * mode_;
  auto w0 = [&](double xi) { return w_plus_ + amplitude_ * std::sin(w * xi); };
  auto dw0 = [&](double xi) { return amplitude_ * w * std::cos(w * xi); };
  double xi = x - t * w0(x);
  for (int it = 0; it < 100; ++it) {
    const double f = xi + t * w0(xi) - x;
    const double step = f / (1.0 + t * dw0(xi));
    xi -= step;
    if (std::abs(step) < 1e-15) break;
  }
  const double d = dw0(xi);
  slope = d / (1.0 + t * d);
  return w0(xi);
}

std::pair<ScalarField, VectorField> SimpleWave::fields(const TorusGrid& grid, double t) const {
  if (grid.dim() != 1) throw std::invalid_argument("SimpleWave: one-dimensional only");
  const double k = std::sqrt(3.0 * a_);
  ScalarField rho(grid);
  VectorField u(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double slope = 0.0;
    const double wp = riemann_plus(grid.coordinate(static_cast<int>(i)), t, slope);
    rho[i] = (wp - w_minus_) / (2.0 * k);
    u.component(0)[i] = 0.5 * (wp + w_minus_);
  }
  return {rho, u};
}

std::pair<ScalarField, VectorField> SimpleWave::time_derivatives(const TorusGrid& grid, double t) const {
  if (grid.dim() != 1) throw std::invalid_argument("SimpleWave: one-dimensional only");
  const double k = std::sqrt(3.0 * a_);
  ScalarField rho_t(grid);
  VectorField u_t(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double slope = 0.0;
    const double wp = riemann_plus(grid.coordinate(static_cast<int>(i)), t, slope);
    const double wt = -wp * slope;
    rho_t[i] = wt / (2.0 * k);
    u_t.component(0)[i] = 0.5 * wt;
  }
  return {rho_t, u_t};
}

FluidState SimpleWave::state(const TorusGrid& grid, double t) const {
  auto [rho, u] = fields(grid, t);
  VectorField m(grid);
  m.component(0) = hadamard(rho, u.component(0));
  return FluidState{std::move(rho), std::move(m)};
}

}  // namespace semiflow
