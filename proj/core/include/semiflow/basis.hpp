#pragma once

#include <array>
#include <vector>

#include "semiflow/grid.hpp"

namespace semiflow {

/// Entry of the orthonormal real trigonometric basis on T^N: the constant
/// 2^{-N/2}, then sqrt(2/2^N) cos(pi k.x) and sqrt(2/2^N) sin(pi k.x) for k in
/// a half space. Ordered by |k|_1, then |k|^2, then k, cosine first.
struct BasisMode {
  std::array<int, 2> k{0, 0};
  bool sine = false;
};

/// First `count` scalar basis modes resolvable on `grid` (|k_a| < n/2).
std::vector<BasisMode> scalar_basis(const TorusGrid& grid, std::size_t count);

ScalarField basis_function(const TorusGrid& grid, const BasisMode& mode);

/// Scalar basis function e_n (n = 0 is the constant).
ScalarField scalar_basis_function(const TorusGrid& grid, std::size_t n);

/// Vector basis w_m = e_{m / N} times the unit vector along axis m % N.
VectorField vector_basis_function(const TorusGrid& grid, std::size_t m);

}  // namespace semiflow
