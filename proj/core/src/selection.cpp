#include "semiflow/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "semiflow/basis.hpp"
#include "semiflow/parallel.hpp"
#include "semiflow/quadrature.hpp"
#include "semiflow/spectral.hpp"

namespace semiflow {
namespace {

// Values of F at each sample (right limits for the energy form).
std::vector<double> sample_observable(const KrylovFunctional& I, const Trajectory& t, std::size_t count) {
  std::vector<double> out(count);
  switch (I.form) {
    case FunctionalForm::energy:
      for (std::size_t j = 0; j < count; ++j) out[j] = t.energy().right()[j];
      break;
    case FunctionalForm::density_mode: {
      const ScalarField e = scalar_basis_function(t.grid(), I.index);
      for (std::size_t j = 0; j < count; ++j) out[j] = inner_product(t.state(j).rho, e);
      break;
    }
    case FunctionalForm::momentum_mode: {
      const VectorField w = vector_basis_function(t.grid(), I.index);
      for (std::size_t j = 0; j < count; ++j) out[j] = inner_product(t.state(j).mom, w);
      break;
    }
  }
  return out;
}

// Value of F on (t_j, t_{j+1}) at the far end (left limit for the energy).
double end_value(const KrylovFunctional& I, const Trajectory& t, const std::vector<double>& obs, std::size_t j) {
  return I.form == FunctionalForm::energy ? t.energy().left()[j] : obs[j];
}

std::vector<double> evaluate_members(const KrylovFunctional& I, const Ensemble& ens,
                                     const std::vector<std::size_t>& idx, double T_max) {
  std::vector<double> values(idx.size());
  parallel_for(idx.size(), [&](std::size_t i) { values[i] = evaluate_functional(I, ens.member(idx[i]), T_max).value; });
  return values;
}

double resolve_horizon(const Ensemble& ens, double T_max) { return std::isnan(T_max) ? ens.horizon() : T_max; }

}  // namespace

Ensemble::Ensemble(InitialData data, std::vector<Trajectory> members)
    : data_(std::move(data)), members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("Ensemble: must be nonempty");
  const int ell = default_sobolev_index(data_.rho0.grid());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const Trajectory& t = members_[i];
    if (!(t.grid() == data_.rho0.grid())) throw std::invalid_argument("Ensemble: member on a different grid");
    const FluidState& s = t.state(0);
    const double gap = negative_sobolev_norm(s.rho - data_.rho0, ell) + negative_sobolev_norm(s.mom - data_.mom0, ell);
    if (gap > kSeamTol) {
      throw std::invalid_argument("Ensemble: member " + std::to_string(i) + " does not start at the shared data");
    }
    if (std::abs(t.energy().initial_datum() - data_.E0) > 1e-12 * std::max(1.0, std::abs(data_.E0))) {
      throw std::invalid_argument("Ensemble: member " + std::to_string(i) + " has E(0-) different from E0");
    }
  }
}

double Ensemble::horizon() const {
  double h = members_.front().horizon();
  for (const auto& m : members_) h = std::min(h, m.horizon());
  return h;
}

Ensemble Ensemble::subset(const std::vector<std::size_t>& indices) const {
  std::vector<Trajectory> picked;
  for (std::size_t i : indices) picked.push_back(members_.at(i));
  return Ensemble(data_, std::move(picked));
}

double Beta::operator()(double z) const {
  const double x = z / scale;
  return kind == Kind::tanh ? std::tanh(x) : (2.0 / std::numbers::pi) * std::atan(x);
}

Beta Beta::for_energy(double E0) { return Beta{Beta::Kind::tanh, std::max(1.0, E0)}; }

std::string KrylovFunctional::label() const {
  std::ostringstream os;
  os << "I[lambda=" << lambda << ",";
  switch (form) {
    case FunctionalForm::energy: os << "E"; break;
    case FunctionalForm::density_mode: os << "rho.e" << index; break;
    case FunctionalForm::momentum_mode: os << "m.w" << index; break;
  }
  os << "]";
  return os.str();
}

FunctionalValue evaluate_functional(const KrylovFunctional& I, const Trajectory& t, double T_max,
                                    double tail_tolerance) {
  if (!(I.lambda > 0.0)) throw std::invalid_argument("evaluate_functional: lambda must be > 0");
  if (!(T_max >= 0.0) || T_max > t.horizon() + kTimeMatchTol) {
    throw std::out_of_range("evaluate_functional: T_max beyond the trajectory horizon");
  }
  T_max = std::min(T_max, t.horizon());
  FunctionalValue out;
  out.tail_bound = std::exp(-I.lambda * T_max) * I.beta.bound() / I.lambda;
  if (out.tail_bound > tail_tolerance) {
    std::ostringstream msg;
    msg << "evaluate_functional: tail bound " << out.tail_bound << " exceeds tolerance " << tail_tolerance;
    throw std::runtime_error(msg.str());
  }

  const auto& times = t.times();
  std::size_t count = 0;
  while (count < times.size() && times[count] <= T_max + kTimeMatchTol) ++count;
  if (count < times.size()) ++count;  // the interval containing T_max
  const std::vector<double> obs = sample_observable(I, t, count);

  double total = 0.0;
  double last = obs.front();
  for (std::size_t j = 0; j + 1 < count; ++j) {
    const double a = times[j];
    const double b = times[j + 1];
    if (a >= T_max) break;
    const double f0 = obs[j];
    const double f1 = end_value(I, t, obs, j + 1);
    const double hi = std::min(b, T_max);
    total += quadrature::integrate_interval(a, hi, [&](double s) {
      const double f = f0 + (f1 - f0) * (s - a) / (b - a);
      return std::exp(-I.lambda * s) * I.beta(f);
    });
    last = f0 + (f1 - f0) * (hi - a) / (b - a);
  }
  out.value = total;
  out.tail_estimate = std::exp(-I.lambda * T_max) * I.beta(last) / I.lambda;
  return out;
}

FunctionalSchedule::FunctionalSchedule(std::vector<ScheduleEntry> entries) : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.k < 1 || e.n < 0 || e.m < 0 || (e.n > 0 && e.m > 0)) {
      throw std::invalid_argument("FunctionalSchedule: invalid triple");
    }
  }
}

FunctionalSchedule FunctionalSchedule::enumerate(int K, int N, int M) {
  if (K < 1 || N < 0 || M < 0) throw std::invalid_argument("FunctionalSchedule: caps must be K >= 1, N, M >= 0");
  std::vector<ScheduleEntry> out;
  const int top = K + std::max(N, M);
  for (int level = 1; level <= top; ++level) {
    if (level <= K) out.push_back({level, 0, 0});
    for (int k = 1; k < level && k <= K; ++k) {
      const int rest = level - k;
      if (rest <= N) out.push_back({k, rest, 0});
      if (rest <= M) out.push_back({k, 0, rest});
    }
  }
  return FunctionalSchedule(std::move(out));
}

KrylovFunctional FunctionalSchedule::functional(std::size_t i, const Beta& beta) const {
  const ScheduleEntry& e = entries_.at(i);
  KrylovFunctional I;
  I.lambda = lambda(e.k);
  I.beta = beta;
  if (e.n > 0) {
    I.form = FunctionalForm::density_mode;
    I.index = static_cast<std::size_t>(e.n);
  } else if (e.m > 0) {
    I.form = FunctionalForm::momentum_mode;
    I.index = static_cast<std::size_t>(e.m - 1);
  }
  return I;
}

std::vector<std::size_t> argmin_indices(const std::vector<double>& values, double tol) {
  if (values.empty()) return {};
  const double lo = *std::min_element(values.begin(), values.end());
  const double cut = lo + tol * (1.0 + std::abs(lo));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= cut) out.push_back(i);
  }
  return out;
}

Ensemble argmin_select(const Ensemble& ens, const KrylovFunctional& I, double tol, double T_max) {
  T_max = resolve_horizon(ens, T_max);
  std::vector<std::size_t> all(ens.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return ens.subset(argmin_indices(evaluate_members(I, ens, all, T_max), tol));
}

bool strictly_dominates(const Trajectory& a, const Trajectory& b, double tol) {
  const double H = std::min(a.horizon(), b.horizon());
  std::set<double> knots;
  for (double t : a.times()) if (t <= H) knots.insert(t);
  for (double t : b.times()) if (t <= H) knots.insert(t);
  bool strict = false;
  for (double t : knots) {
    const double dl = a.energy().left_limit(t) - b.energy().left_limit(t);
    const double dr = a.energy().at(t) - b.energy().at(t);
    if (dl > tol || dr > tol) return false;
    if (dl < -tol || dr < -tol) strict = true;
  }
  return strict;
}

bool check_admissibility(const Trajectory& candidate, const Ensemble& ens) {
  for (const auto& m : ens.members()) {
    if (strictly_dominates(m, candidate)) return false;
  }
  return true;
}

namespace {

std::vector<std::size_t> admissible_indices(const Ensemble& ens, double T_max, double tol, SelectionStage* stage) {
  KrylovFunctional I;
  I.lambda = 1.0;
  I.form = FunctionalForm::energy;
  I.beta = Beta::for_energy(ens.data().E0);
  std::vector<std::size_t> all(ens.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const std::vector<double> values = evaluate_members(I, ens, all, T_max);
  const std::vector<std::size_t> mins = argmin_indices(values, tol);
  std::vector<std::size_t> keep;
  for (std::size_t i : mins) {
    bool dominated = false;
    for (std::size_t j : mins) {
      if (j != i && strictly_dominates(ens.member(j), ens.member(i))) {
        dominated = true;
        break;
      }
    }
    if (!dominated) keep.push_back(i);
  }
  if (keep.empty()) keep.push_back(mins.front());
  if (stage) {
    stage->label = "admissible " + I.label();
    stage->survivors = keep;
    for (std::size_t i : keep) stage->values.push_back(values[i]);
    stage->tail_bound = std::exp(-T_max) * I.beta.bound();
    stage->tie = keep.size() > 1;
  }
  return keep;
}

}  // namespace

Ensemble admissible_select(const Ensemble& ens, double T_max, double tol) {
  return ens.subset(admissible_indices(ens, resolve_horizon(ens, T_max), tol, nullptr));
}

SelectionResult semiflow_select(const Ensemble& ens, const FunctionalSchedule& schedule, double tol, double T_max) {
  T_max = resolve_horizon(ens, T_max);
  SelectionResult result;
  SelectionStage first;
  std::vector<std::size_t> alive = admissible_indices(ens, T_max, tol, &first);
  result.stages.push_back(std::move(first));

  const Beta beta = Beta::for_energy(ens.data().E0);
  for (std::size_t s = 0; s < schedule.size() && alive.size() > 1; ++s) {
    const KrylovFunctional I = schedule.functional(s, beta);
    const std::vector<double> values = evaluate_members(I, ens, alive, T_max);
    SelectionStage stage;
    stage.label = I.label();
    stage.tail_bound = std::exp(-I.lambda * T_max) * I.beta.bound() / I.lambda;
    std::vector<std::size_t> next;
    for (std::size_t i : argmin_indices(values, tol)) {
      next.push_back(alive[i]);
      stage.values.push_back(values[i]);
    }
    alive = std::move(next);
    stage.survivors = alive;
    stage.tie = alive.size() > 1;
    result.stages.push_back(std::move(stage));
  }

  result.survivors = alive;
  result.index = alive.front();
  result.multiple_survivors = alive.size() > 1;
  if (result.multiple_survivors) {
    result.duplicate_survivors = std::all_of(alive.begin(), alive.end(), [&](std::size_t i) {
      return ens.member(i) == ens.member(alive.front());
    });
  }
  return result;
}

std::string SelectionResult::to_json() const {
  nlohmann::json j;
  j["selected"] = index;
  j["survivors"] = survivors;
  j["multiple_survivors"] = multiple_survivors;
  j["duplicate_survivors"] = duplicate_survivors;
  j["stages"] = nlohmann::json::array();
  for (const auto& s : stages) {
    j["stages"].push_back({{"label", s.label},
                           {"survivors", s.survivors},
                           {"values", s.values},
                           {"tail_bound", s.tail_bound},
                           {"tie", s.tie}});
  }
  return j.dump(2);
}

double hausdorff_distance(const Ensemble& a, const Ensemble& b, double T_max, int ell) {
  std::vector<double> d(a.size() * b.size());
  parallel_for(d.size(), [&](std::size_t k) {
    d[k] = trajectory_distance(a.member(k / b.size()), b.member(k % b.size()), T_max, ell);
  });
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) best = std::min(best, d[i * b.size() + j]);
    out = std::max(out, best);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) best = std::min(best, d[i * b.size() + j]);
    out = std::max(out, best);
  }
  return out;
}

SemigroupReport check_semigroup(const Selector& select, const EnsembleBuilder& build, const InitialData& data,
                                double t1, double t2, const SemigroupOptions& options) {
  SemigroupReport report;
  report.t1 = t1;
  report.t2 = t2;
  const int ell = options.ell > 0 ? options.ell : default_sobolev_index(data.rho0.grid());

  const Ensemble base = build(data, {});
  report.base_size = base.size();
  report.base_selection = select(base);
  const Trajectory& U = base.member(report.base_selection.index);
  const auto K = U.sample_index(t1);
  if (!K) throw std::out_of_range("check_semigroup: t1 is not a sample time of the selection");

  InitialData restart{U.state(*K).rho, U.state(*K).mom, U.energy().left()[*K]};
  const MembershipResult member = validate_data_membership(restart.rho0, restart.mom0, restart.E0, U.law());
  report.restart_in_data = member.member;
  report.restart_reason = to_string(member.reason);
  if (!member.member) return report;

  std::vector<Trajectory> tails;
  if (options.pass_tails) {
    for (const auto& m : base.members()) {
      const auto k = m.sample_index(t1);
      if (!k) continue;
      const FluidState& s = m.state(*k);
      const double gap =
          negative_sobolev_norm(s.rho - restart.rho0, ell) + negative_sobolev_norm(s.mom - restart.mom0, ell);
      if (gap <= kSeamTol && m.energy().left()[*k] == restart.E0) tails.push_back(shift(m, t1));
    }
  }
  report.tails_passed = tails.size();
  const Ensemble again = build(restart, tails);
  report.restart_size = again.size();
  report.restart_selection = select(again);
  const Trajectory& V = again.member(report.restart_selection.index);
  report.deviation = trajectory_distance(shift(U, t1), V, t2, ell);
  return report;
}

std::string SemigroupReport::to_json() const {
  nlohmann::json j;
  j["t1"] = t1;
  j["t2"] = t2;
  j["deviation"] = deviation;
  j["restart_in_data"] = restart_in_data;
  j["restart_reason"] = restart_reason;
  j["base_size"] = base_size;
  j["restart_size"] = restart_size;
  j["tails_passed"] = tails_passed;
  j["base_selection"] = nlohmann::json::parse(base_selection.to_json());
  j["restart_selection"] = nlohmann::json::parse(restart_selection.to_json());
  return j.dump(2);
}

}  // namespace semiflow
