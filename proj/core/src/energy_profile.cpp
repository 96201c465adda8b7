#include "semiflow/energy_profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semiflow {

EnergyProfile::EnergyProfile(std::vector<double> times, std::vector<double> left, std::vector<double> right)
    : times_(std::move(times)), left_(std::move(left)), right_(std::move(right)) {
  if (times_.empty()) throw std::invalid_argument("EnergyProfile: no samples");
  if (left_.size() != times_.size() || right_.size() != times_.size()) {
    throw std::invalid_argument("EnergyProfile: limits and times differ in length");
  }
  if (times_.front() != 0.0) throw std::invalid_argument("EnergyProfile: first sample must be t = 0");
  for (std::size_t j = 1; j < times_.size(); ++j) {
    if (!(times_[j] > times_[j - 1])) throw std::invalid_argument("EnergyProfile: times must increase");
  }
}

std::size_t EnergyProfile::interval_of(double t) const {
  if (t < 0.0 || t > horizon()) throw std::out_of_range("EnergyProfile: time outside the sampled horizon");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

double EnergyProfile::at(double t) const {
  const std::size_t j = interval_of(t);
  if (t == times_[j] || j + 1 == times_.size()) return right_[j];
  const double s = (t - times_[j]) / (times_[j + 1] - times_[j]);
  return (1.0 - s) * right_[j] + s * left_[j + 1];
}

double EnergyProfile::left_limit(double t) const {
  const std::size_t j = interval_of(t);
  if (t == times_[j]) return left_[j];
  return at(t);
}

double EnergyProfile::integral(double a, double b) const {
  if (b < a) return -integral(b, a);
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < times_.size(); ++j) {
    const double lo = std::max(a, times_[j]);
    const double hi = std::min(b, times_[j + 1]);
    if (hi <= lo) continue;
    total += 0.5 * (at(lo) + (hi == times_[j + 1] ? left_[j + 1] : at(hi))) * (hi - lo);
  }
  return total;
}

double EnergyProfile::monotonicity_violation() const {
  double worst = std::max(0.0, right_[0] - left_[0]);
  for (std::size_t j = 0; j + 1 < times_.size(); ++j) {
    worst = std::max(worst, left_[j + 1] - right_[j]);
    worst = std::max(worst, right_[j + 1] - left_[j + 1]);
  }
  return worst;
}

double EnergyProfile::min_value() const {
  return std::min(*std::min_element(left_.begin(), left_.end()), *std::min_element(right_.begin(), right_.end()));
}

double l1_distance(const EnergyProfile& a, const EnergyProfile& b, double T) {
  if (T < 0.0 || T > a.horizon() || T > b.horizon()) {
    throw std::out_of_range("l1_distance: T outside a common horizon");
  }
  std::vector<double> knots;
  for (double t : a.times()) if (t <= T) knots.push_back(t);
  for (double t : b.times()) if (t <= T) knots.push_back(t);
  knots.push_back(T);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i];
    const double hi = knots[i + 1];
    // Both profiles are linear on (lo, hi); take the one-sided limits.
    const double d0 = a.at(lo) - b.at(lo);
    const double d1 = a.left_limit(hi) - b.left_limit(hi);
    const double w = hi - lo;
    if (d0 * d1 >= 0.0) {
      total += 0.5 * (std::abs(d0) + std::abs(d1)) * w;
    } else {
      const double root = std::abs(d0) / (std::abs(d0) + std::abs(d1));
      total += 0.5 * (std::abs(d0) * root + std::abs(d1) * (1.0 - root)) * w;
    }
  }
  return total;
}

}  // namespace semiflow
