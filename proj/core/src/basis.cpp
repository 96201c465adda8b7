#include "semiflow/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace semiflow {

std::vector<BasisMode> scalar_basis(const TorusGrid& grid, std::size_t count) {
  const int kmax = grid.points_per_dim() / 2 - 1;
  std::vector<std::array<int, 2>> ks;
  if (grid.dim() == 1) {
    for (int k = 1; k <= kmax; ++k) ks.push_back({k, 0});
  } else {
    for (int a = 0; a <= kmax; ++a) {
      for (int b = -kmax; b <= kmax; ++b) {
        if (a > 0 || b > 0) ks.push_back({a, b});
      }
    }
  }
  auto key = [](const std::array<int, 2>& k) {
    return std::make_tuple(std::abs(k[0]) + std::abs(k[1]), k[0] * k[0] + k[1] * k[1], k[0], k[1]);
  };
  std::stable_sort(ks.begin(), ks.end(), [&](const auto& x, const auto& y) { return key(x) < key(y); });

  std::vector<BasisMode> out;
  out.push_back(BasisMode{});
  for (const auto& k : ks) {
    if (out.size() >= count) break;
    out.push_back({k, false});
    if (out.size() >= count) break;
    out.push_back({k, true});
  }
  if (out.size() < count) throw std::out_of_range("scalar_basis: grid cannot resolve that many modes");
  out.resize(count);
  return out;
}

ScalarField basis_function(const TorusGrid& grid, const BasisMode& mode) {
  const double volume = grid.volume();
  if (mode.k[0] == 0 && mode.k[1] == 0) return ScalarField(grid, 1.0 / std::sqrt(volume));
  const double scale = std::sqrt(2.0 / volume);
  const int dim = grid.dim();
  return ScalarField::from_function(grid, [&](const std::array<double, 2>& x) {
    double p = mode.k[0] * x[0];
    if (dim == 2) p += mode.k[1] * x[1];
    p *= std::numbers::pi;
    return scale * (mode.sine ? std::sin(p) : std::cos(p));
  });
}

ScalarField scalar_basis_function(const TorusGrid& grid, std::size_t n) {
  return basis_function(grid, scalar_basis(grid, n + 1).back());
}

VectorField vector_basis_function(const TorusGrid& grid, std::size_t m) {
  const auto dim = static_cast<std::size_t>(grid.dim());
  VectorField w(grid);
  w.component(static_cast<int>(m % dim)) = scalar_basis_function(grid, m / dim);
  return w;
}

}  // namespace semiflow
