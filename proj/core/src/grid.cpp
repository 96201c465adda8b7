#include "semiflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace semiflow {

TorusGrid TorusGrid::make(int dim, int points_per_dim) {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("TorusGrid: unsupported dimension " + std::to_string(dim) +
                                " (only 1 and 2 are supported)");
  }
  if (points_per_dim < 8 || points_per_dim % 2 != 0) {
    throw std::invalid_argument("TorusGrid: points_per_dim must be even and >= 8, got " +
                                std::to_string(points_per_dim));
  }
  return TorusGrid(dim, points_per_dim);
}

std::size_t TorusGrid::size() const {
  return dim_ == 1 ? static_cast<std::size_t>(n_) : static_cast<std::size_t>(n_) * n_;
}

double TorusGrid::cell_volume() const { return std::pow(spacing(), dim_); }

double TorusGrid::volume() const { return std::pow(kPeriod, dim_); }

std::array<double, 2> TorusGrid::node_coordinates(std::size_t node) const {
  if (dim_ == 1) return {coordinate(static_cast<int>(node)), 0.0};
  const auto i = static_cast<int>(node / n_);
  const auto j = static_cast<int>(node % n_);
  return {coordinate(i), coordinate(j)};
}

ScalarField::ScalarField(const TorusGrid& grid, double fill)
    : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(const TorusGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("ScalarField: expected " + std::to_string(grid_.size()) +
                                " samples, got " + std::to_string(values_.size()));
  }
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

VectorField::VectorField(const TorusGrid& grid, double fill)
    : grid_(grid), components_(grid.dim(), ScalarField(grid, fill)) {}

VectorField::VectorField(std::vector<ScalarField> components)
    : grid_(components.empty() ? TorusGrid::make(1, 8) : components.front().grid()),
      components_(std::move(components)) {
  if (components_.empty() || static_cast<int>(components_.size()) != grid_.dim()) {
    throw std::invalid_argument("VectorField: component count must equal grid dimension");
  }
  for (const auto& c : components_) {
    if (!(c.grid() == grid_)) throw std::invalid_argument("VectorField: components on different grids");
  }
}

double VectorField::norm_at(std::size_t node) const {
  double s = 0.0;
  for (const auto& c : components_) s += c[node] * c[node];
  return std::sqrt(s);
}

bool VectorField::all_finite() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const ScalarField& c) { return c.all_finite(); });
}

double VectorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, c.max_abs());
  return m;
}

VectorField& VectorField::operator+=(const VectorField& other) {
  for (std::size_t a = 0; a < components_.size(); ++a) components_[a] += other.components_[a];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  for (std::size_t a = 0; a < components_.size(); ++a) components_[a] -= other.components_[a];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& c : components_) c *= s;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

}  // namespace semiflow
