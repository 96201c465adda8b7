#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "semiflow/relative_energy.hpp"
#include "semiflow/rng.hpp"
#include "semiflow/spectral.hpp"

using namespace semiflow;
using std::numbers::pi;
using X = std::array<double, 2>;

namespace {

const PressureLaw kLaw = PressureLaw::isentropic(1.0, 2.0);

double r_of(const X& x) { return 1.0 + 0.3 * std::cos(pi * x[0]) + 0.1 * std::sin(pi * x[1]); }
double U_of(const X& x, int a) { return a == 0 ? 0.4 * std::sin(pi * x[0]) : 0.2 * std::cos(pi * (x[0] + x[1])); }

struct Reference {
  ScalarField r;
  VectorField U;
};

Reference reference(const TorusGrid& g) {
  Reference ref{ScalarField::from_function(g, r_of), VectorField(g)};
  for (int a = 0; a < g.dim(); ++a) ref.U.component(a) = ScalarField::from_function(g, [&](const X& x) { return U_of(x, a); });
  return ref;
}

// (r + delta eta, r U + delta mu) with smooth eta, mu.
FluidState perturbed(const TorusGrid& g, double delta) {
  FluidState s{ScalarField::from_function(g, [&](const X& x) { return r_of(x) + delta * std::sin(2.0 * pi * x[0]); }),
               VectorField(g)};
  for (int a = 0; a < g.dim(); ++a) {
    s.mom.component(a) = ScalarField::from_function(
        g, [&](const X& x) { return r_of(x) * U_of(x, a) + delta * std::cos(pi * (x[0] - 2.0 * x[1]) + a); });
  }
  return s;
}

double dense_relative_energy(int dim, double delta) {
  return oracle::dense_domain_integral(dim, [&](double x0, double x1) {
    const X x{x0, x1};
    const double r = r_of(x);
    const double rho = r + delta * std::sin(2.0 * pi * x0);
    double kin = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double m = r * U_of(x, a) + delta * std::cos(pi * (x0 - 2.0 * x1) + a);
      const double rel = m / rho - U_of(x, a);
      kin += 0.5 * rho * rel * rel;
    }
    return kin + kLaw.potential(rho) - kLaw.potential_derivative(r) * (rho - r) - kLaw.potential(r);
  });
}

Trajectory trajectory_of(const std::vector<double>& times, const std::vector<FluidState>& states, double extra = 0.0,
                         const PressureLaw& law = kLaw) {
  std::vector<double> E;
  for (const auto& s : states) E.push_back(total_energy(s, law));
  E.front() += extra;
  for (std::size_t j = 1; j < E.size(); ++j) E[j] = std::min(E[j], E[j - 1]);
  std::vector<double> left = E;
  return Trajectory::make(times, states, left, E, law);
}

}  // namespace

TEST_CASE("relative energy vanishes at the reference state") {
  for (int dim : {1, 2}) {
    const TorusGrid g = TorusGrid::make(dim, 32);
    const Reference ref = reference(g);
    FluidState s{ref.r, VectorField(g)};
    for (int a = 0; a < dim; ++a) s.mom.component(a) = hadamard(ref.r, ref.U.component(a));
    CHECK(std::abs(relative_energy(s, ref.r, ref.U, kLaw)) <= 1e-14);
  }
}

TEST_CASE("gamma 2 relative energy without velocity is the squared density gap") {
  const TorusGrid g = TorusGrid::make(1, 64);
  const ScalarField r = ScalarField::from_function(g, [](const X& x) { return 1.0 + 0.5 * std::sin(pi * x[0]); });
  const ScalarField rho = ScalarField::from_function(g, [](const X& x) { return 1.2 + 0.3 * std::cos(3.0 * pi * x[0]); });
  double expected = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) expected += (rho[i] - r[i]) * (rho[i] - r[i]) * g.cell_volume();
  const double re = relative_energy(FluidState{rho, VectorField(g)}, r, VectorField(g), kLaw);
  CHECK(re == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("relative energy agrees with a dense quadrature oracle") {
  for (int dim : {1, 2}) {
    const TorusGrid g = TorusGrid::make(dim, dim == 1 ? 256 : 64);
    const Reference ref = reference(g);
    for (double delta : {0.05, 0.2}) {
      const double re = relative_energy(perturbed(g, delta), ref.r, ref.U, kLaw);
      CHECK(re > 0.0);
      CHECK(std::abs(re - dense_relative_energy(dim, delta)) <= 1e-10);
    }
  }
}

TEST_CASE("relative energy is quadratic in the perturbation") {
  const TorusGrid g = TorusGrid::make(2, 32);
  const Reference ref = reference(g);
  double prev = relative_energy(perturbed(g, 0.1), ref.r, ref.U, kLaw);
  for (double delta : {0.05, 0.025, 0.0125}) {
    const double re = relative_energy(perturbed(g, delta), ref.r, ref.U, kLaw);
    CHECK(prev / re == doctest::Approx(4.0).epsilon(0.05));
    prev = re;
  }
}

TEST_CASE("relative energy flags vacuum carrying momentum and rejects a bad reference") {
  const TorusGrid g = TorusGrid::make(1, 16);
  const Reference ref = reference(g);
  FluidState s = perturbed(g, 0.1);
  s.rho[3] = 0.0;
  s.mom.component(0)[3] = 0.5;
  CHECK(relative_energy(s, ref.r, ref.U, kLaw) == std::numeric_limits<double>::infinity());
  ScalarField bad = ref.r;
  bad[0] = 0.0;
  CHECK_THROWS((void)relative_energy(perturbed(g, 0.1), bad, ref.U, kLaw));
}

TEST_CASE("gronwall bound") {
  CHECK(gronwall_bound(0.0, 0.0, 3.7, 4.0) == 0.0);
  CHECK(gronwall_bound(1.0, 0.0, 0.0, 4.0) == 1.0);
  CHECK(gronwall_bound(0.5, 0.25, 2.0, 1.0) == doctest::Approx(0.75 * std::exp(2.0)).epsilon(1e-15));
  CHECK_THROWS((void)gronwall_bound(0.5, -0.1, 1.0, 1.0));
  CHECK_THROWS((void)gronwall_bound(std::nan(""), 0.0, 1.0, 1.0));
  const double base = gronwall_bound(0.3, 0.1, 0.5, 2.0);
  CHECK(gronwall_bound(0.4, 0.1, 0.5, 2.0) > base);
  CHECK(gronwall_bound(0.3, 0.2, 0.5, 2.0) > base);
  CHECK(gronwall_bound(0.3, 0.1, 0.6, 2.0) > base);
  CHECK(gronwall_bound(0.3, 0.1, 0.5, 3.0) > base);
}

TEST_CASE("simple wave is an exact solution") {
  const SimpleWave wave(1.0 / 3.0, -1.0, 1.0, 0.2, 1);
  const TorusGrid g = TorusGrid::make(1, 256);
  CHECK(blowup_time_estimate(wave.state(g, 0.0), wave.law()) == doctest::Approx(wave.breaking_time()).epsilon(1e-6));
  for (double t : {0.0, 0.5, 1.0}) {
    const auto [r, U] = wave.fields(g, t);
    const auto [r_t, U_t] = wave.time_derivatives(g, t);
    const FluidState s = perturbed(g, 0.05);
    const auto [momentum_part, continuity_part] = remainder_terms(s, r, U, r_t, U_t, wave.law());
    CHECK(std::abs(momentum_part) <= 1e-9);
    CHECK(std::abs(continuity_part) <= 1e-9);
  }
  CHECK_THROWS((void)SimpleWave(1.0, 1.0, 1.1, 0.2, 1));
}

TEST_CASE("self comparison has zero relative energy") {
  const SimpleWave wave(1.0 / 3.0, -1.0, 1.0, 0.2, 1);
  const TorusGrid g = TorusGrid::make(1, 64);
  std::vector<double> times;
  std::vector<FluidState> states;
  for (int j = 0; j <= 10; ++j) {
    times.push_back(0.1 * j);
    states.push_back(wave.state(g, 0.1 * j));
  }
  const ReferenceSolution ref = ReferenceSolution::from_states(times, states);
  CHECK(ref.grad_sup[0] == doctest::Approx(0.2 * pi * 0.5).epsilon(1e-3));
  const Trajectory t = trajectory_of(times, states, 0.0, wave.law());
  const WeakStrongReport rep = weak_strong_check(t, ref);
  for (double re : rep.re) CHECK(re <= 1e-10);
  CHECK(rep.pass);
  CHECK(rep.max_re <= 1e-10);
  CHECK(rep.bound_by_c.size() == rep.pass_by_c.size());
  const std::string csv = rep.to_csv();
  CHECK(csv.rfind("tau,RE,bound,pass\n", 0) == 0);
}

TEST_CASE("an energy gap enters the bound at time zero") {
  const SimpleWave wave(1.0 / 3.0, -1.0, 1.0, 0.2, 1);
  const TorusGrid g = TorusGrid::make(1, 64);
  std::vector<double> times;
  std::vector<FluidState> states, ref_states;
  for (int j = 0; j <= 5; ++j) {
    times.push_back(0.1 * j);
    ref_states.push_back(wave.state(g, 0.1 * j));
    FluidState s = ref_states.back();
    for (double& v : s.mom.component(0).values()) v += 0.01;
    states.push_back(s);
  }
  const double g_gap = 0.3;
  const Trajectory t = trajectory_of(times, states, g_gap, wave.law());
  const WeakStrongReport rep = weak_strong_check(t, ReferenceSolution::from_states(times, ref_states));
  CHECK(rep.energy_gap == doctest::Approx(g_gap).epsilon(1e-12));
  CHECK(rep.re[0] > 0.0);
  CHECK(rep.bound[0] == doctest::Approx(g_gap + rep.re[0]).epsilon(1e-14));
  CHECK(rep.pass);

  std::vector<double> shifted = times;
  shifted[2] += 0.01;
  CHECK_THROWS((void)weak_strong_check(t, ReferenceSolution::from_states(shifted, ref_states)));
}

TEST_CASE("manufactured reference stops before the blow-up estimate") {
  const SimpleWave wave(1.0 / 3.0, -1.0, 1.0, 0.2, 1);
  const TorusGrid g = TorusGrid::make(1, 128);
  const ManufacturedReference m = manufacture_reference(wave.state(g, 0.0), wave.law(), 4e-3, 5);
  CHECK(m.t_ref <= 0.6 * m.blowup_estimate + 1e-12);
  CHECK(m.t_ref > 0.6 * m.blowup_estimate - 0.02 - 1e-12);
  const double blocks = m.t_ref / 0.02;
  CHECK(std::abs(blocks - std::round(blocks)) <= 1e-9);
  CHECK(m.reference.size() == m.states.size());
  for (const auto& r : m.reference.r) CHECK(r.min() > 0.0);
  // The inviscid run tracks the exact wave closely before breaking.
  const auto [r_end, U_end] = wave.fields(g, m.reference.times.back());
  CHECK(l2_norm(m.reference.r.back() - r_end) <= 1e-4);
}
