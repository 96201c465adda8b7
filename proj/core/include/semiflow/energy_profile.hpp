#pragma once

#include <cstddef>
#include <vector>

namespace semiflow {

/// Sampled BV energy record. Each sample time t_j carries a left limit
/// E(t_j-) and a right limit E(t_j+); left(0) is the initial datum E(0-).
/// Between samples the profile is linear from right(j) to left(j+1).
class EnergyProfile {
 public:
  static constexpr double kMonotoneTol = 1e-8;

  EnergyProfile() = default;
  /// Checks shapes and strictly increasing times starting at 0; does not
  /// check monotonicity (see is_nonincreasing).
  EnergyProfile(std::vector<double> times, std::vector<double> left, std::vector<double> right);

  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& left() const { return left_; }
  const std::vector<double>& right() const { return right_; }
  double initial_datum() const { return left_.front(); }
  double horizon() const { return times_.back(); }

  /// Value at t; at a sample time the right limit is returned.
  double at(double t) const;
  /// Left limit at t (differs from at(t) only at sample times).
  double left_limit(double t) const;
  /// Exact integral of the piecewise-linear profile over [a, b].
  double integral(double a, double b) const;

  /// Largest increase found anywhere in the profile (0 if nonincreasing).
  double monotonicity_violation() const;
  bool is_nonincreasing(double tol = kMonotoneTol) const { return monotonicity_violation() <= tol; }
  double min_value() const;

  friend bool operator==(const EnergyProfile&, const EnergyProfile&) = default;

 private:
  std::size_t interval_of(double t) const;

  std::vector<double> times_;
  std::vector<double> left_;
  std::vector<double> right_;
};

/// int_0^T |a(t) - b(t)| dt, exact for piecewise-linear profiles.
double l1_distance(const EnergyProfile& a, const EnergyProfile& b, double T);

}  // namespace semiflow
