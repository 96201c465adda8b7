#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace semiflow {

/// Uniform grid on the flat torus [-1,1)^N with identified endpoints.
///
/// Nodes sit at x_j = -1 + 2j/n along every axis. Flat node indices are
/// row-major: in 2D the node (i, j) is stored at i*n + j, axis 0 slowest.
class TorusGrid {
 public:
  static constexpr double kPeriod = 2.0;

  /// Throws std::invalid_argument unless dim is 1 or 2 and n is even and >= 8.
  static TorusGrid make(int dim, int points_per_dim);

  int dim() const { return dim_; }
  int points_per_dim() const { return n_; }
  std::size_t size() const;
  double spacing() const { return kPeriod / n_; }
  double cell_volume() const;
  double volume() const;

  double coordinate(int index) const { return -1.0 + spacing() * index; }
  /// Coordinates of flat node `node` (second entry unused in 1D).
  std::array<double, 2> node_coordinates(std::size_t node) const;

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  TorusGrid(int dim, int n) : dim_(dim), n_(n) {}

  int dim_ = 1;
  int n_ = 8;
};

class ScalarField {
 public:
  explicit ScalarField(const TorusGrid& grid, double fill = 0.0);
  ScalarField(const TorusGrid& grid, std::vector<double> values);

  template <typename Fn>
  static ScalarField from_function(const TorusGrid& grid, Fn&& fn) {
    ScalarField f(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto x = grid.node_coordinates(i);
      f.values_[i] = fn(x);
    }
    return f;
  }

  const TorusGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  bool all_finite() const;
  double min() const;
  double max() const;
  double max_abs() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

class VectorField {
 public:
  explicit VectorField(const TorusGrid& grid, double fill = 0.0);
  explicit VectorField(std::vector<ScalarField> components);

  const TorusGrid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  const ScalarField& component(int axis) const { return components_[axis]; }
  ScalarField& component(int axis) { return components_[axis]; }
  std::span<const ScalarField> components() const { return components_; }

  /// Euclidean norm of the vector at one node.
  double norm_at(std::size_t node) const;
  bool all_finite() const;
  double max_abs() const;

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double s);

  friend bool operator==(const VectorField&, const VectorField&) = default;

 private:
  TorusGrid grid_;
  std::vector<ScalarField> components_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

}  // namespace semiflow
