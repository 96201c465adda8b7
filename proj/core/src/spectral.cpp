#include "semiflow/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace semiflow {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Owns one r2c/c2r plan pair plus its buffers. Execution touches only the
// plan's own buffers, so plans cached per thread can run concurrently.
class FftPlan {
 public:
  explicit FftPlan(const TorusGrid& grid)
      : real_size_(grid.size()), spec_size_(spectrum_size(grid)) {
    real_ = fftw_alloc_real(real_size_);
    spec_ = fftw_alloc_complex(spec_size_);
    const int n = grid.points_per_dim();
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (grid.dim() == 1) {
      forward_ = fftw_plan_dft_r2c_1d(n, real_, spec_, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_c2r_1d(n, spec_, real_, FFTW_ESTIMATE);
    } else {
      forward_ = fftw_plan_dft_r2c_2d(n, n, real_, spec_, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_c2r_2d(n, n, spec_, real_, FFTW_ESTIMATE);
    }
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  ~FftPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(real_);
    fftw_free(spec_);
  }

  void forward(std::span<const double> in, Spectrum& out) {
    std::memcpy(real_, in.data(), real_size_ * sizeof(double));
    fftw_execute(forward_);
    out.resize(spec_size_);
    const double scale = 1.0 / static_cast<double>(real_size_);
    for (std::size_t i = 0; i < spec_size_; ++i) {
      out[i] = std::complex<double>(spec_[i][0], spec_[i][1]) * scale;
    }
  }

  void backward(const Spectrum& in, std::span<double> out) {
    for (std::size_t i = 0; i < spec_size_; ++i) {
      spec_[i][0] = in[i].real();
      spec_[i][1] = in[i].imag();
    }
    fftw_execute(backward_);
    std::memcpy(out.data(), real_, real_size_ * sizeof(double));
  }

 private:
  std::size_t real_size_;
  std::size_t spec_size_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

FftPlan& plan_for(const TorusGrid& grid) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<FftPlan>> cache;
  auto key = std::make_pair(grid.dim(), grid.points_per_dim());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<FftPlan>(grid)).first;
  return *it->second;
}

void check_axis(const TorusGrid& grid, int axis) {
  if (axis < 0 || axis >= grid.dim()) {
    throw std::invalid_argument("spectral: axis " + std::to_string(axis) + " out of range");
  }
}

double k_squared(const ModeInfo& mode, int dim) {
  double s = static_cast<double>(mode.k[0]) * mode.k[0];
  if (dim == 2) s += static_cast<double>(mode.k[1]) * mode.k[1];
  return s;
}

}  // namespace

std::size_t spectrum_size(const TorusGrid& grid) {
  const std::size_t n = grid.points_per_dim();
  return grid.dim() == 1 ? n / 2 + 1 : n * (n / 2 + 1);
}

void for_each_mode(const TorusGrid& grid, const std::function<void(const ModeInfo&)>& fn) {
  const int n = grid.points_per_dim();
  const int half = n / 2;
  if (grid.dim() == 1) {
    for (int j = 0; j <= half; ++j) {
      ModeInfo mode{static_cast<std::size_t>(j), {j, 0}, (j == 0 || j == half) ? 1.0 : 2.0,
                    {j == half, false}};
      fn(mode);
    }
    return;
  }
  for (int i = 0; i < n; ++i) {
    const int k0 = i <= half ? i : i - n;
    for (int j = 0; j <= half; ++j) {
      ModeInfo mode{static_cast<std::size_t>(i) * (half + 1) + j,
                    {k0, j},
                    (j == 0 || j == half) ? 1.0 : 2.0,
                    {i == half, j == half}};
      fn(mode);
    }
  }
}

Spectrum forward_transform(const ScalarField& f) {
  Spectrum out;
  plan_for(f.grid()).forward(f.values(), out);
  return out;
}

ScalarField inverse_transform(const TorusGrid& grid, const Spectrum& spectrum) {
  if (spectrum.size() != spectrum_size(grid)) {
    throw std::invalid_argument("inverse_transform: spectrum size does not match grid");
  }
  ScalarField out(grid);
  plan_for(grid).backward(spectrum, out.values());
  return out;
}

ScalarField apply_multiplier(const ScalarField& f,
                             const std::function<std::complex<double>(const ModeInfo&)>& multiplier) {
  Spectrum spec = forward_transform(f);
  for_each_mode(f.grid(), [&](const ModeInfo& mode) { spec[mode.index] *= multiplier(mode); });
  return inverse_transform(f.grid(), spec);
}

ScalarField spectral_derivative(const ScalarField& f, int axis, int order) {
  check_axis(f.grid(), axis);
  if (order < 1) throw std::invalid_argument("spectral_derivative: order must be >= 1");
  const bool odd = order % 2 == 1;
  return apply_multiplier(f, [&](const ModeInfo& mode) -> std::complex<double> {
    if (odd && mode.nyquist[axis]) return 0.0;
    const std::complex<double> ik(0.0, std::numbers::pi * mode.k[axis]);
    return std::pow(ik, order);
  });
}

ScalarField dealiased_derivative(const ScalarField& f, int axis) {
  check_axis(f.grid(), axis);
  const int dim = f.grid().dim();
  const int cutoff = f.grid().points_per_dim() / 3;
  return apply_multiplier(f, [&](const ModeInfo& mode) -> std::complex<double> {
    for (int a = 0; a < dim; ++a) {
      if (std::abs(mode.k[a]) > cutoff) return 0.0;
    }
    return {0.0, std::numbers::pi * mode.k[axis]};
  });
}

ScalarField neg_laplacian_power(const ScalarField& f, int power) {
  if (power < 0) throw std::invalid_argument("neg_laplacian_power: power must be >= 0");
  const int dim = f.grid().dim();
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return apply_multiplier(f, [&](const ModeInfo& mode) -> std::complex<double> {
    return std::pow(pi2 * k_squared(mode, dim), power);
  });
}

VectorField hyperviscous_term(const VectorField& u, int m_order, double eps) {
  if (m_order < 1) throw std::invalid_argument("hyperviscous_term: m_order must be >= 1");
  if (eps < 0.0) throw std::invalid_argument("hyperviscous_term: eps must be >= 0");
  std::vector<ScalarField> out;
  out.reserve(u.dim());
  for (int a = 0; a < u.dim(); ++a) {
    ScalarField c = neg_laplacian_power(u.component(a), 2 * m_order);
    c *= -eps;
    out.push_back(std::move(c));
  }
  return VectorField(std::move(out));
}

double integrate(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().cell_volume();
}

double inner_product(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid().cell_volume();
}

double inner_product(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (int c = 0; c < a.dim(); ++c) s += inner_product(a.component(c), b.component(c));
  return s;
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner_product(f, f)); }
double l2_norm(const VectorField& f) { return std::sqrt(inner_product(f, f)); }

int default_sobolev_index(const TorusGrid& grid) {
  return static_cast<int>(std::floor(grid.dim() / 2.0 + 1.0)) + 1;
}

double negative_sobolev_norm(const ScalarField& f, int ell) {
  const TorusGrid& grid = f.grid();
  if (!(ell > grid.dim() / 2.0 + 1.0)) {
    throw std::invalid_argument("negative_sobolev_norm: need ell > N/2 + 1, got " +
                                std::to_string(ell));
  }
  const Spectrum spec = forward_transform(f);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double sum = 0.0;
  for_each_mode(grid, [&](const ModeInfo& mode) {
    const double weight = std::pow(1.0 + pi2 * k_squared(mode, grid.dim()), -ell);
    sum += mode.multiplicity * weight * std::norm(spec[mode.index]);
  });
  return std::sqrt(grid.volume() * sum);
}

double negative_sobolev_norm(const VectorField& f, int ell) {
  double sum = 0.0;
  for (int a = 0; a < f.dim(); ++a) {
    const double c = negative_sobolev_norm(f.component(a), ell);
    sum += c * c;
  }
  return std::sqrt(sum);
}

ScalarField gaussian_filter(const ScalarField& f, double width) {
  if (width < 0.0) throw std::invalid_argument("gaussian_filter: width must be >= 0");
  if (width == 0.0) return f;
  const int dim = f.grid().dim();
  const double s = width * std::numbers::pi;
  return apply_multiplier(f, [&](const ModeInfo& mode) -> std::complex<double> {
    return std::exp(-0.5 * s * s * k_squared(mode, dim));
  });
}

}  // namespace semiflow
