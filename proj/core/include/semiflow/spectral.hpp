#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "semiflow/grid.hpp"

namespace semiflow {

/// Half-spectrum Fourier coefficients of a real field, normalized so that
/// f(x) = sum_k c_k exp(i*pi*k.x) up to the grid phase. The layout follows
/// the real-to-complex transform: 1D stores k = 0..n/2, 2D stores
/// n x (n/2+1) with the last axis halved.
using Spectrum = std::vector<std::complex<double>>;

struct ModeInfo {
  std::size_t index;           // position in the half spectrum
  std::array<int, 2> k;        // signed integer wavenumbers (second unused in 1D)
  double multiplicity;         // 1 or 2: how often the mode appears in the full spectrum
  bool nyquist[2];             // |k_axis| == n/2
};

/// Size of the half spectrum for `grid`.
std::size_t spectrum_size(const TorusGrid& grid);

/// Calls fn(const ModeInfo&) for every stored mode.
void for_each_mode(const TorusGrid& grid, const std::function<void(const ModeInfo&)>& fn);

Spectrum forward_transform(const ScalarField& f);
ScalarField inverse_transform(const TorusGrid& grid, const Spectrum& spectrum);

/// Multiplies every coefficient by `multiplier(mode)`. The multiplier must be
/// Hermitian-consistent (real on self-conjugate modes) for the result to be real.
ScalarField apply_multiplier(const ScalarField& f,
                             const std::function<std::complex<double>(const ModeInfo&)>& multiplier);

/// Exact derivative of resolvable trigonometric polynomials; mode k carries
/// frequency pi*k. Odd orders drop the Nyquist mode.
ScalarField spectral_derivative(const ScalarField& f, int axis, int order);

/// First derivative restricted to the 2/3-rule band |k_a| <= n/3 on every axis.
ScalarField dealiased_derivative(const ScalarField& f, int axis);

/// Applies (-Laplacian)^power, multiplier (pi^2 |k|^2)^power.
ScalarField neg_laplacian_power(const ScalarField& f, int power);

/// Right-hand side -eps * Laplacian^(2m) u, multiplier -eps*(pi^2|k|^2)^(2m).
VectorField hyperviscous_term(const VectorField& u, int m_order, double eps);

/// Node mean times volume; spectrally exact for resolvable trig polynomials.
double integrate(const ScalarField& f);
double inner_product(const ScalarField& a, const ScalarField& b);
double inner_product(const VectorField& a, const VectorField& b);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& f);

/// W^{-ell,2} norm: sqrt(|T^N| * sum_k (1 + pi^2|k|^2)^(-ell) |c_k|^2).
/// Requires ell > N/2 + 1.
double negative_sobolev_norm(const ScalarField& f, int ell);
double negative_sobolev_norm(const VectorField& f, int ell);

/// Smallest integer ell admissible on `grid` (ell > N/2 + 1).
int default_sobolev_index(const TorusGrid& grid);

/// Convolution with a periodized Gaussian of standard deviation `width`
/// (multiplier exp(-(width*pi*|k|)^2 / 2)). Unit mass; the discrete kernel is
/// positive only up to the truncated tail, so widths below a few cells can
/// undershoot slightly.
ScalarField gaussian_filter(const ScalarField& f, double width);

}  // namespace semiflow
