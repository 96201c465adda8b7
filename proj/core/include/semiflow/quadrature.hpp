#pragma once

#include <span>
#include <vector>

namespace semiflow::quadrature {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `points` nodes (Newton iteration on P_n).
GaussRule gauss_legendre(int points);

/// Eight-point rule shared by the time integrals in this library.
const GaussRule& default_rule();

/// Integral of fn over [a, b] with the default Gauss rule.
template <typename Fn>
double integrate_interval(double a, double b, Fn&& fn) {
  const GaussRule& rule = default_rule();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * fn(mid + half * rule.nodes[i]);
  return s * half;
}

/// Integral of sampled data. Uniform samples use composite Simpson (with a
/// 3/8 panel for an odd interval count); non-uniform samples fall back to
/// the trapezoid rule.
double integrate_samples(std::span<const double> times, std::span<const double> values);

/// True if consecutive spacings agree to `rel_tol`.
bool is_uniform(std::span<const double> times, double rel_tol = 1e-9);

}  // namespace semiflow::quadrature
