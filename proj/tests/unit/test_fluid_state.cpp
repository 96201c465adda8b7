#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "semiflow/fluid_state.hpp"
#include "semiflow/rng.hpp"
#include "semiflow/spectral.hpp"

using namespace semiflow;
using std::numbers::pi;
using X = std::array<double, 2>;

namespace {
double ekin(double rho, std::initializer_list<double> m) {
  const std::vector<double> v(m);
  return kinetic_energy_density(rho, v);
}
}  // namespace

TEST_CASE("kinetic energy density with its convex extension") {
  CHECK(ekin(0.0, {0.0}) == 0.0);
  CHECK(ekin(2.0, {2.0}) == doctest::Approx(1.0));
  CHECK(std::isinf(ekin(0.0, {1.0})));
  CHECK(ekin(1e-12, {1e-9}) == 0.0);  // vacuum floor, momentum below its floor
  CHECK(std::isinf(ekin(1e-12, {1e-6})));
  CHECK(ekin(2.0, {1.0, 1.0}) == doctest::Approx(0.5));
}

TEST_CASE("kinetic energy density is jointly convex on rho > 0") {
  Xorshift64Star rng(17);
  for (int i = 0; i < 2000; ++i) {
    const double r1 = rng.uniform(0.01, 3), r2 = rng.uniform(0.01, 3);
    const double m1 = rng.uniform(-2, 2), m2 = rng.uniform(-2, 2), th = rng.uniform();
    const double mid = ekin(th * r1 + (1 - th) * r2, {th * m1 + (1 - th) * m2});
    CHECK(mid <= th * ekin(r1, {m1}) + (1 - th) * ekin(r2, {m2}) + 1e-12);
  }
}

TEST_CASE("total energy of constant states") {
  const PressureLaw law = PressureLaw::isentropic(1.0, 2.0);
  const TorusGrid g1 = TorusGrid::make(1, 16);
  CHECK(total_energy(FluidState{ScalarField(g1, 1.0), VectorField(g1)}, law) == doctest::Approx(2.0));
  const TorusGrid g2 = TorusGrid::make(2, 16);
  FluidState s{ScalarField(g2, 1.0), VectorField(g2)};
  s.mom.component(0) = ScalarField(g2, 1.0);
  CHECK(total_energy(s, law) == doctest::Approx(6.0));
  FluidState vac{ScalarField(g1, 1.0), VectorField(g1)};
  vac.rho[3] = 0.0;
  vac.mom.component(0)[3] = 0.5;
  CHECK(std::isinf(total_energy(vac, law)));
}

TEST_CASE("total energy of a smooth state matches the dense quadrature oracle") {
  const PressureLaw law = PressureLaw::isentropic(1.3, 1.4);
  auto rho = [](double x, double y) { return 1.0 + 0.3 * std::sin(pi * x) * std::cos(pi * y) + 0.1 * std::cos(2 * pi * y); };
  auto mx = [](double x, double y) { return 0.4 * std::cos(pi * x + 0.3) + 0.1 * std::sin(pi * y); };
  auto my = [](double x, double y) { return -0.2 * std::sin(pi * (x + y)); };
  auto e = [&](double x, double y) {
    const double r = rho(x, y);
    return 0.5 * (mx(x, y) * mx(x, y) + my(x, y) * my(x, y)) / r + law.potential(r);
  };
  const double oracle = oracle::dense_domain_integral(2, e, 1024);
  const TorusGrid g = TorusGrid::make(2, 128);
  FluidState s{ScalarField::from_function(g, [&](const X& x) { return rho(x[0], x[1]); }), VectorField(g)};
  s.mom.component(0) = ScalarField::from_function(g, [&](const X& x) { return mx(x[0], x[1]); });
  s.mom.component(1) = ScalarField::from_function(g, [&](const X& x) { return my(x[0], x[1]); });
  CHECK(total_energy(s, law) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("pressure potential") {
  const PressureLaw law = PressureLaw::isentropic(1.0, 2.0);
  CHECK(pressure_potential(law, 3.0) == doctest::Approx(9.0));
  CHECK(2 * 3 * 3 - 9 == doctest::Approx(law.pressure(3.0)));
  CHECK(pressure_potential(law, 0.0) == 0.0);
  const PressureLaw l2 = PressureLaw::isentropic(2.0, 1.4);
  CHECK(pressure_potential(l2, 1.7) == doctest::Approx(2.0 / 0.4 * std::pow(1.7, 1.4)).epsilon(1e-14));
  const PressureLaw tab = PressureLaw::tabulated({0.5, 1.0, 2.0, 4.0}, {0.3, 1.0, 3.5, 11.0});
  CHECK(pressure_potential(tab, 0.0) == 0.0);
  for (const PressureLaw* l : {&law, &l2, &tab}) {
    for (double rho = 1e-2; rho < 1e2; rho *= 1.37) {
      const double h = 1e-6 * rho;
      const double dP = (l->potential(rho + h) - l->potential(rho - h)) / (2 * h);
      const double scale = std::max(1.0, l->pressure(rho));
      CHECK(std::abs(dP * rho - l->potential(rho) - l->pressure(rho)) < 1e-8 * scale);
    }
  }
}

TEST_CASE("tabulated law: asymptotics and serialization") {
  const PressureLaw tab = PressureLaw::tabulated({0.5, 1.0, 2.0, 4.0}, {0.3, 1.0, 3.5, 11.0});
  const double g = tab.asymptotic_gamma();
  CHECK(tab.pressure(1e12) / tab.potential(1e12) == doctest::Approx(g - 1).epsilon(1e-6));
  for (double r = 0.1; r < 10; r *= 1.2) CHECK(tab.pressure_derivative(r) > 0.0);
  CHECK(PressureLaw::parse(tab.to_string()) == tab);
  const PressureLaw iso = PressureLaw::parse("kind=isentropic a=1.0 gamma=1.4");
  CHECK(iso.a() == 1.0);
  CHECK(iso.gamma() == 1.4);
  CHECK(PressureLaw::parse(iso.to_string()) == iso);
  CHECK_THROWS(PressureLaw::isentropic(1.0, 1.0));
  CHECK_THROWS(PressureLaw::isentropic(0.0, 2.0));
  CHECK_THROWS(PressureLaw::parse("kind=isentropic a=1"));
}

TEST_CASE("validate_data_membership") {
  const PressureLaw law = PressureLaw::isentropic(1.0, 2.0);
  const TorusGrid g = TorusGrid::make(1, 16);
  const ScalarField one(g, 1.0);
  const VectorField zero(g);
  CHECK(validate_data_membership(one, zero, 2.0, law).member);
  const auto low = validate_data_membership(one, zero, 1.9, law);
  CHECK_FALSE(low.member);
  CHECK(low.reason == MembershipReason::energy_exceeds);
  ScalarField neg = one;
  neg[4] = -0.1;
  const auto r = validate_data_membership(neg, zero, 10.0, law);
  CHECK_FALSE(r.member);
  CHECK(to_string(r.reason) == "negative density");
  ScalarField vac = one;
  vac[2] = 0.0;
  VectorField mv = zero;
  mv.component(0)[2] = 1.0;
  CHECK(validate_data_membership(vac, mv, 100.0, law).reason == MembershipReason::vacuum_momentum);
}

TEST_CASE("equilibrium states") {
  const PressureLaw law = PressureLaw::isentropic(1.0, 2.0);
  auto [s1, E1] = equilibrium_state(2.0, law, TorusGrid::make(1, 16));
  CHECK(s1.rho.min() == doctest::Approx(1.0));
  CHECK(s1.mom.max_abs() == 0.0);
  CHECK(E1 == doctest::Approx(2.0));
  CHECK(total_energy(s1, law) == E1);
  auto [s0, E0] = equilibrium_state(0.0, law, TorusGrid::make(1, 16));
  CHECK(s0.rho.max_abs() == 0.0);
  CHECK(E0 == 0.0);
  auto [s2, E2] = equilibrium_state(4.0, law, TorusGrid::make(2, 16));
  CHECK(s2.rho.max() == doctest::Approx(1.0));
  CHECK(E2 == doctest::Approx(4.0));
  CHECK(total_energy(s2, law) == E2);
  CHECK_THROWS(equilibrium_state(-1.0, law, TorusGrid::make(1, 16)));
}

TEST_CASE("Jensen lower bound on the internal energy") {
  const TorusGrid g = TorusGrid::make(1, 64);
  Xorshift64Star rng(5);
  for (double gamma : {1.4, 2.0, 3.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      const double a = rng.uniform(-0.5, 0.5), b = rng.uniform(-0.3, 0.3);
      const ScalarField rho = ScalarField::from_function(g, [&](const X& x) { return 1.0 + a * std::sin(pi * x[0]) + b * std::cos(3 * pi * x[0]); });
      double integral = 0.0;
      for (std::size_t i = 0; i < rho.size(); ++i) integral += std::pow(rho[i], gamma);
      integral *= g.cell_volume();
      const double M = integrate(rho);
      CHECK(integral >= std::pow(g.volume(), 1 - gamma) * std::pow(M, gamma) * (1 - 1e-14));
    }
    const double M = 3.0;
    const double constant = g.volume() * std::pow(M / g.volume(), gamma);
    CHECK(constant == doctest::Approx(std::pow(g.volume(), 1 - gamma) * std::pow(M, gamma)));
  }
}

TEST_CASE("FluidState helpers") {
  const TorusGrid g = TorusGrid::make(1, 16);
  FluidState s{ScalarField(g, 2.0), VectorField(g, 1.0)};
  CHECK(s.mass() == doctest::Approx(4.0));
  CHECK(s.velocity().component(0).max() == doctest::Approx(0.5));
  CHECK_FALSE(s.violation().has_value());
  s.rho[0] = -1.0;
  CHECK(s.violation().has_value());
}
