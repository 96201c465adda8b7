#include "semiflow/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "semiflow/quadrature.hpp"
#include "semiflow/spectral.hpp"

namespace semiflow {
namespace {

std::vector<double> field_energies(const std::vector<FluidState>& states, const PressureLaw& law) {
  std::vector<double> e;
  e.reserve(states.size());
  for (const auto& s : states) e.push_back(total_energy(s, law));
  return e;
}

bool same_time(double a, double b) { return std::abs(a - b) <= kTimeMatchTol * std::max(1.0, std::abs(a)); }

std::size_t require_sample(const Trajectory& t, double T, const char* who) {
  const auto k = t.sample_index(T);
  if (!k) {
    std::ostringstream msg;
    msg << who << ": T=" << T << " is not a sample time within the horizon " << t.horizon();
    throw std::out_of_range(msg.str());
  }
  return *k;
}

// int_a^b psi over a panel mesh fine enough for the bump's width.
double bump_integral(const TestTerm& term, double a, double b) {
  const double lo = std::max(a, term.t_a);
  const double hi = std::min(b, term.t_b);
  if (hi <= lo) return 0.0;
  const double width = (term.t_b - term.t_a) / 64.0;
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
  const double h = (hi - lo) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    sum += quadrature::integrate_interval(lo + p * h, lo + (p + 1) * h, [&](double t) { return term.psi(t); });
  }
  return sum;
}

// int weight(t) q(t) dt over [times[0], times[K-1]] clipped to the term's
// window, with q the cubic through the four samples around each interval
// (lower degree for short records) and panels fine enough for the bump.
template <typename Weight>
double integrate_interpolant(const std::vector<double>& times, const std::vector<double>& q, const TestTerm& term,
                             Weight&& weight) {
  const std::size_t K = times.size();
  if (K < 2) return 0.0;
  const std::size_t order = std::min<std::size_t>(K, 4);
  const double width = (term.t_b - term.t_a) / 64.0;
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < K; ++j) {
    const double lo = std::max(times[j], term.t_a);
    const double hi = std::min(times[j + 1], term.t_b);
    if (hi <= lo) continue;
    const std::size_t first = std::min(j > 0 ? j - 1 : 0, K - order);
    auto interpolant = [&](double t) {
      double v = 0.0;
      for (std::size_t a = first; a < first + order; ++a) {
        double basis = 1.0;
        for (std::size_t b = first; b < first + order; ++b) {
          if (b != a) basis *= (t - times[b]) / (times[a] - times[b]);
        }
        v += basis * q[a];
      }
      return v;
    };
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      sum += quadrature::integrate_interval(lo + p * h, lo + (p + 1) * h,
                                            [&](double t) { return weight(t) * interpolant(t); });
    }
  }
  return sum;
}

double energy_functional(const Trajectory& t, const TestFunction& phi) {
  // Integrating psi' E by parts on each linear piece gives a sum of terms
  // that are individually nonnegative for a nonincreasing profile.
  const EnergyProfile& E = t.energy();
  const auto& times = E.times();
  double value = 0.0;
  for (const auto& term : phi.terms()) {
    if (term.coef < 0.0) throw std::invalid_argument("weak_form_residual: energy test function must be >= 0");
    double v = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
      v += term.psi(times[j]) * (E.left()[j] - E.right()[j]);
      if (j + 1 < times.size()) {
        const double slope = (E.left()[j + 1] - E.right()[j]) / (times[j + 1] - times[j]);
        v -= slope * bump_integral(term, times[j], times[j + 1]);
      }
    }
    v += term.psi(times.back()) * E.left().back();
    value += term.coef * v;
  }
  return value;
}

}  // namespace

Trajectory Trajectory::make_unchecked(std::vector<double> times, std::vector<FluidState> states,
                                      std::vector<double> energy_left, std::vector<double> energy_right, PressureLaw law,
                                      std::string provenance) {
  if (states.empty() || states.size() != times.size()) {
    throw std::invalid_argument("Trajectory: need one state per sample time");
  }
  Trajectory t;
  t.energy_ = EnergyProfile(std::move(times), std::move(energy_left), std::move(energy_right));
  t.states_ = std::move(states);
  t.law_ = std::move(law);
  t.provenance_ = std::move(provenance);
  const auto e = field_energies(t.states_, t.law_);
  for (std::size_t j = 0; j < e.size(); ++j) {
    t.defect_left_.push_back(t.energy_.left()[j] - e[j]);
    t.defect_right_.push_back(t.energy_.right()[j] - e[j]);
  }
  return t;
}

Trajectory Trajectory::make(std::vector<double> times, std::vector<FluidState> states, std::vector<double> energy_left,
                            std::vector<double> energy_right, PressureLaw law, std::string provenance) {
  Trajectory t = make_unchecked(std::move(times), std::move(states), std::move(energy_left), std::move(energy_right),
                                std::move(law), std::move(provenance));
  const auto issues = t.violations();
  if (!issues.empty()) throw std::invalid_argument("Trajectory: " + issues.front());
  return t;
}

std::vector<std::string> Trajectory::violations() const {
  std::vector<std::string> out;
  const TorusGrid& g = grid();
  for (std::size_t j = 0; j < states_.size(); ++j) {
    if (!(states_[j].grid() == g)) {
      out.push_back("sample " + std::to_string(j) + " lives on a different grid");
      return out;
    }
    if (auto why = states_[j].violation()) out.push_back("sample " + std::to_string(j) + ": " + *why);
  }
  const double m0 = states_.front().mass();
  for (std::size_t j = 1; j < states_.size(); ++j) {
    const double dm = std::abs(states_[j].mass() - m0);
    if (dm > kMassRelTol * std::max(std::abs(m0), kVacuumFloor)) {
      std::ostringstream msg;
      msg << "mass drifts by " << dm << " at t=" << times()[j];
      out.push_back(msg.str());
      break;
    }
  }
  if (const double v = energy_.monotonicity_violation(); v > EnergyProfile::kMonotoneTol) {
    std::ostringstream msg;
    msg << "energy increases by " << v;
    out.push_back(msg.str());
  }
  if (energy_.min_value() < -kDefectTol) out.push_back("negative energy value");
  for (std::size_t j = 0; j < states_.size(); ++j) {
    const double d = std::min(defect_left_[j], defect_right_[j]);
    if (d < -kDefectTol) {
      std::ostringstream msg;
      msg << "defect " << d << " below tolerance at t=" << times()[j];
      out.push_back(msg.str());
      break;
    }
  }
  return out;
}

std::optional<std::size_t> Trajectory::sample_index(double t) const {
  const auto& ts = times();
  auto it = std::lower_bound(ts.begin(), ts.end(), t - kTimeMatchTol * std::max(1.0, std::abs(t)));
  if (it != ts.end() && same_time(*it, t)) return static_cast<std::size_t>(it - ts.begin());
  return std::nullopt;
}

bool operator==(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (std::abs(a.times()[j] - b.times()[j]) > 1e-12) return false;
  }
  return a.states_ == b.states_ && a.energy_.left() == b.energy_.left() && a.energy_.right() == b.energy_.right() &&
         a.law_ == b.law_;
}

Trajectory to_trajectory(const SolverRun& run, double E0, std::string provenance) {
  if (run.states.empty()) throw std::invalid_argument("to_trajectory: empty run");
  std::vector<double> left = run.energy;
  std::vector<double> right = run.energy;
  if (!std::isnan(E0)) left.front() = E0;
  return Trajectory::make(run.times, run.states, std::move(left), std::move(right), run.config.law,
                          std::move(provenance));
}

Trajectory shift(const Trajectory& t, double T, double eta) {
  if (T < 0.0) throw std::invalid_argument("shift: T must be >= 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("shift: eta must lie in [0, 1]");
  const std::size_t K = require_sample(t, T, "shift");
  if (K == 0 && eta == 1.0) return t;

  const auto& ts = t.times();
  std::vector<double> times;
  std::vector<double> left(t.energy().left().begin() + K, t.energy().left().end());
  std::vector<double> right(t.energy().right().begin() + K, t.energy().right().end());
  for (std::size_t j = K; j < ts.size(); ++j) times.push_back(j == K ? 0.0 : ts[j] - ts[K]);
  left.front() = eta * t.energy().left()[K] + (1.0 - eta) * t.energy().right()[K];
  std::vector<FluidState> states(t.states().begin() + K, t.states().end());
  return Trajectory::make(std::move(times), std::move(states), std::move(left), std::move(right), t.law(),
                          t.provenance());
}

Trajectory continue_at(const Trajectory& t1, double T, const Trajectory& t2) {
  const std::size_t K = require_sample(t1, T, "continue_at");
  if (!(t1.grid() == t2.grid())) throw std::invalid_argument("continue_at: trajectories live on different grids");
  const int ell = default_sobolev_index(t1.grid());
  const FluidState& a = t1.state(K);
  const FluidState& b = t2.state(0);
  const double seam = negative_sobolev_norm(a.rho - b.rho, ell) + negative_sobolev_norm(a.mom - b.mom, ell);
  if (seam > kSeamTol) {
    std::ostringstream msg;
    msg << "continue_at: seam states differ by " << seam << " (tolerance " << kSeamTol << ")";
    throw std::invalid_argument(msg.str());
  }
  const double e1 = t1.energy().left()[K];
  const double e2 = t2.energy().initial_datum();
  if (e2 > e1) {
    std::ostringstream msg;
    msg << "continue_at: restart energy " << e2 << " exceeds E(T-) = " << e1;
    throw std::invalid_argument(msg.str());
  }

  const auto& ts1 = t1.times();
  std::vector<double> times(ts1.begin(), ts1.begin() + K);
  std::vector<FluidState> states(t1.states().begin(), t1.states().begin() + K);
  std::vector<double> left(t1.energy().left().begin(), t1.energy().left().begin() + K);
  std::vector<double> right(t1.energy().right().begin(), t1.energy().right().begin() + K);
  for (std::size_t j = 0; j < t2.size(); ++j) {
    times.push_back(j == 0 ? ts1[K] : ts1[K] + t2.times()[j]);
    states.push_back(t2.state(j));
    left.push_back(t2.energy().left()[j]);
    right.push_back(t2.energy().right()[j]);
  }
  return Trajectory::make(std::move(times), std::move(states), std::move(left), std::move(right), t1.law(),
                          t1.provenance());
}

double weak_form_value(const Trajectory& t, const TestFunction& phi, WeakEquation eq) {
  if (eq == WeakEquation::energy) return energy_functional(t, phi);
  if (phi.support_end() > t.horizon() + kTimeMatchTol) {
    throw std::invalid_argument("weak_form_value: test function support exceeds the horizon");
  }
  const bool momentum = eq == WeakEquation::momentum;
  if (momentum != (phi.kind() == TestFunction::Kind::vector)) {
    throw std::invalid_argument("weak_form_value: continuity needs a scalar and momentum a vector test function");
  }
  const TorusGrid& grid = t.grid();
  const int dim = grid.dim();
  const auto& times = t.times();
  double total = 0.0;

  for (const auto& term : phi.terms()) {
    if (term.axis < 0 || term.axis >= dim) throw std::invalid_argument("weak_form_value: axis out of range");
    const ScalarField g = term.spatial(grid);
    std::vector<ScalarField> dg;
    for (int a = 0; a < dim; ++a) dg.push_back(term.spatial_derivative(grid, a));

    // The psi' part is integrated against A - A(0); the constant A(0) pairs
    // with psi' exactly, which keeps stationary states at zero residual.
    std::vector<double> moment(times.size());
    std::vector<double> flux(times.size());
    double A0 = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
      const FluidState& s = t.state(j);
      double A = 0.0;
      double B = 0.0;
      if (!momentum) {
        A = inner_product(s.rho, g);
        for (int a = 0; a < dim; ++a) B += inner_product(s.mom.component(a), dg[a]);
      } else {
        const int i = term.axis;
        const VectorField u = s.velocity();
        const ScalarField& mi = s.mom.component(i);
        A = inner_product(mi, g);
        for (int a = 0; a < dim; ++a) B += inner_product(hadamard(mi, u.component(a)), dg[a]);
        ScalarField p(grid);
        for (std::size_t n = 0; n < grid.size(); ++n) p[n] = t.law().pressure(s.rho[n]);
        B += inner_product(p, dg[i]);
      }
      if (j == 0) A0 = A;
      moment[j] = A - A0;
      flux[j] = B;
    }
    const double time_part = integrate_interpolant(times, moment, term, [&](double s) { return term.psi_dot(s); }) +
                             integrate_interpolant(times, flux, term, [&](double s) { return term.psi(s); });
    total += term.coef * (time_part + term.psi(times.back()) * A0);
  }
  return total;
}

double weak_form_residual(const Trajectory& t, const TestFunction& phi, WeakEquation eq) {
  const double v = weak_form_value(t, phi, eq);
  if (eq != WeakEquation::energy) return std::abs(v);
  return std::max(0.0, -v);
}

double trajectory_distance(const Trajectory& a, const Trajectory& b, double T_max, int ell) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("trajectory_distance: different grids");
  if (T_max < 0.0 || T_max > a.horizon() + kTimeMatchTol || T_max > b.horizon() + kTimeMatchTol) {
    throw std::out_of_range("trajectory_distance: T_max beyond a horizon");
  }
  T_max = std::min({T_max, a.horizon(), b.horizon()});
  double field = 0.0;
  for (std::size_t j = 0; j < a.size() && a.times()[j] <= T_max + kTimeMatchTol; ++j) {
    if (j >= b.size() || !same_time(a.times()[j], b.times()[j])) {
      throw std::invalid_argument("trajectory_distance: sample times differ");
    }
    const FluidState& x = a.state(j);
    const FluidState& y = b.state(j);
    field = std::max(field, negative_sobolev_norm(x.rho - y.rho, ell) + negative_sobolev_norm(x.mom - y.mom, ell));
  }
  return field + l1_distance(a.energy(), b.energy(), T_max);
}

namespace {

struct CellAverages {
  int cells = 0;
  std::vector<double> mean_e;
  std::vector<double> e_of_mean;
};

CellAverages cell_averages(const Trajectory& t, std::size_t j, double cell) {
  const TorusGrid& grid = t.grid();
  const int n = grid.points_per_dim();
  const int c = static_cast<int>(std::llround(TorusGrid::kPeriod / cell));
  if (c < 1 || n % c != 0) throw std::invalid_argument("defect estimate: cell size must tile the grid");
  const int w = n / c;
  const int dim = grid.dim();
  const int ncell = dim == 1 ? c : c * c;

  const FluidState& s = t.state(j);
  const ScalarField e = energy_density_field(s, t.law());
  std::vector<double> sum_e(ncell, 0.0), sum_rho(ncell, 0.0), sum_m0(ncell, 0.0), sum_m1(ncell, 0.0);
  std::vector<int> count(ncell, 0);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    int idx = 0;
    if (dim == 1) {
      idx = static_cast<int>(node) / w;
    } else {
      const int i = static_cast<int>(node) / n;
      const int k = static_cast<int>(node) % n;
      idx = (i / w) * c + k / w;
    }
    sum_e[idx] += e[node];
    sum_rho[idx] += s.rho[node];
    sum_m0[idx] += s.mom.component(0)[node];
    if (dim == 2) sum_m1[idx] += s.mom.component(1)[node];
    ++count[idx];
  }
  CellAverages out;
  out.cells = c;
  for (int q = 0; q < ncell; ++q) {
    const double cnt = count[q];
    const double m[2] = {sum_m0[q] / cnt, sum_m1[q] / cnt};
    out.mean_e.push_back(sum_e[q] / cnt);
    out.e_of_mean.push_back(energy_density(sum_rho[q] / cnt, std::span<const double>(m, dim), t.law()));
  }
  return out;
}

const Trajectory& finest_member(const std::vector<Trajectory>& family, double tau, std::size_t& j) {
  if (family.size() < 3) throw std::invalid_argument("defect estimate: need at least three family members");
  const Trajectory& finest = family.back();
  j = require_sample(finest, tau, "defect estimate");
  return finest;
}

}  // namespace

ScalarField defect_field_estimate(const std::vector<Trajectory>& family, double tau, double cell) {
  std::size_t j = 0;
  const Trajectory& finest = finest_member(family, tau, j);
  const CellAverages avg = cell_averages(finest, j, cell);
  const TorusGrid& grid = finest.grid();
  const int n = grid.points_per_dim();
  const int w = n / avg.cells;
  ScalarField out(grid);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    int idx = 0;
    if (grid.dim() == 1) {
      idx = static_cast<int>(node) / w;
    } else {
      idx = (static_cast<int>(node) / n / w) * avg.cells + (static_cast<int>(node) % n) / w;
    }
    out[node] = avg.mean_e[idx] - avg.e_of_mean[idx];
  }
  return out;
}

double extrapolated_global_defect(const std::vector<Trajectory>& family, double tau, double cell) {
  std::size_t j = 0;
  const Trajectory& finest = finest_member(family, tau, j);
  std::vector<double> E;
  for (const auto& member : family) E.push_back(member.energy().right()[require_sample(member, tau, "defect estimate")]);
  const std::size_t k = E.size();
  const double d1 = E[k - 2] - E[k - 3];
  const double d2 = E[k - 1] - E[k - 2];
  double limit = E[k - 1];
  if (d1 * d2 > 0.0 && std::abs(d2) < std::abs(d1)) limit = E[k - 1] - d2 * d2 / (d2 - d1);

  const CellAverages avg = cell_averages(finest, j, cell);
  const double cell_volume = finest.grid().volume() / static_cast<double>(avg.e_of_mean.size());
  double coarse = 0.0;
  for (double v : avg.e_of_mean) coarse += v * cell_volume;
  return limit - coarse;
}

}  // namespace semiflow
