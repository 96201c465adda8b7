#include "semiflow/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace semiflow::quadrature {

GaussRule gauss_legendre(int points) {
  if (points < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  GaussRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  for (int i = 0; i < points; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (points == 1) p0 = 1.0;
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& default_rule() {
  static const GaussRule rule = gauss_legendre(8);
  return rule;
}

bool is_uniform(std::span<const double> times, double rel_tol) {
  if (times.size() < 3) return true;
  const double h = times[1] - times[0];
  for (std::size_t i = 1; i + 1 < times.size(); ++i) {
    if (std::abs((times[i + 1] - times[i]) - h) > rel_tol * std::abs(h)) return false;
  }
  return true;
}

double integrate_samples(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw std::invalid_argument("integrate_samples: size mismatch");
  const std::size_t count = times.size();
  if (count < 2) return 0.0;
  const std::size_t intervals = count - 1;
  if (intervals == 1 || !is_uniform(times)) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < count; ++i) {
      s += 0.5 * (times[i + 1] - times[i]) * (values[i] + values[i + 1]);
    }
    return s;
  }
  const double h = (times.back() - times.front()) / static_cast<double>(intervals);
  std::size_t simpson_intervals = intervals % 2 == 0 ? intervals : intervals - 3;
  double s = 0.0;
  for (std::size_t i = 0; i + 2 <= simpson_intervals; i += 2) {
    s += h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
  }
  if (simpson_intervals != intervals) {
    const std::size_t i = simpson_intervals;
    s += 3.0 * h / 8.0 * (values[i] + 3.0 * values[i + 1] + 3.0 * values[i + 2] + values[i + 3]);
  }
  return s;
}

}  // namespace semiflow::quadrature
