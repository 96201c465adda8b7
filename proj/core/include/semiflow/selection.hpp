#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "semiflow/trajectory.hpp"

namespace semiflow {

struct InitialData {
  ScalarField rho0;
  VectorField mom0;
  double E0 = 0.0;
};

/// Finite set of trajectories sharing initial data [rho0, m0, E0].
class Ensemble {
 public:
  /// Throws unless nonempty and every member starts at the data (seam
  /// tolerance on the fields, E(0-) equal to E0 up to 1e-12 relative).
  Ensemble(InitialData data, std::vector<Trajectory> members);

  const InitialData& data() const { return data_; }
  const std::vector<Trajectory>& members() const { return members_; }
  const Trajectory& member(std::size_t i) const { return members_[i]; }
  std::size_t size() const { return members_.size(); }
  /// Shortest member horizon.
  double horizon() const;
  Ensemble subset(const std::vector<std::size_t>& indices) const;

 private:
  InitialData data_;
  std::vector<Trajectory> members_;
};

/// Bounded, smooth, strictly increasing map with sup |beta| = 1.
struct Beta {
  enum class Kind { tanh, arctan };
  Kind kind = Kind::tanh;
  double scale = 1.0;

  double operator()(double z) const;
  double bound() const { return 1.0; }
  /// tanh(z / max(1, E0)).
  static Beta for_energy(double E0);
};

enum class FunctionalForm { energy, density_mode, momentum_mode };

/// I(traj) = int_0^inf exp(-lambda t) beta(F(traj(t))) dt with F the energy,
/// <rho, e_index> or <m, w_index>.
struct KrylovFunctional {
  double lambda = 1.0;
  FunctionalForm form = FunctionalForm::energy;
  std::size_t index = 0;
  Beta beta;

  std::string label() const;
};

struct FunctionalValue {
  double value = 0.0;        // quadrature over [0, T_max]
  double tail_bound = 0.0;   // exp(-lambda T_max) sup|beta| / lambda
  double tail_estimate = 0.0;  // exp(-lambda T_max) beta(F(T_max)) / lambda
};

/// Throws if T_max exceeds the horizon or the certified tail bound is above
/// `tail_tolerance`.
FunctionalValue evaluate_functional(const KrylovFunctional& I, const Trajectory& t, double T_max,
                                    double tail_tolerance = std::numeric_limits<double>::infinity());

/// Triple (k, n, m): n = m = 0 is the energy functional, n > 0 the density
/// functional for e_n, m > 0 the momentum functional for w_{m-1}; the rate is
/// lambda_k = k / 4.
struct ScheduleEntry {
  int k = 1;
  int n = 0;
  int m = 0;
  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

class FunctionalSchedule {
 public:
  explicit FunctionalSchedule(std::vector<ScheduleEntry> entries);

  /// Every triple with k <= K, n <= N, m <= M in the three families, once,
  /// walked by diagonals of constant k + n + m so each family starts early.
  static FunctionalSchedule enumerate(int K, int N, int M);

  static double lambda(int k) { return k / 4.0; }
  const std::vector<ScheduleEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  KrylovFunctional functional(std::size_t i, const Beta& beta) const;

 private:
  std::vector<ScheduleEntry> entries_;
};

/// Relative tie tolerance: values within tol * (1 + |min|) of the minimum tie.
inline constexpr double kDefaultTieTol = 1e-9;

/// Indices of values within tol * (1 + |min|) of the minimum.
std::vector<std::size_t> argmin_indices(const std::vector<double>& values, double tol);

/// Members minimizing I up to the tie tolerance; T_max NaN means the
/// ensemble horizon. Never empty.
Ensemble argmin_select(const Ensemble& ens, const KrylovFunctional& I, double tol = kDefaultTieTol,
                       double T_max = std::numeric_limits<double>::quiet_NaN());

/// a strictly precedes b: E_a(tau+-) <= E_b(tau+-) + tol at every sample
/// time of either profile, with a gap above tol somewhere.
bool strictly_dominates(const Trajectory& a, const Trajectory& b, double tol = EnergyProfile::kMonotoneTol);

/// True iff no member strictly dominates the candidate.
bool check_admissibility(const Trajectory& candidate, const Ensemble& ens);

/// Minimizers of I_{1, beta(E)}, then any survivor dominated by another
/// survivor is dropped (the result is never empty).
Ensemble admissible_select(const Ensemble& ens, double T_max = std::numeric_limits<double>::quiet_NaN(),
                           double tol = kDefaultTieTol);

struct SelectionStage {
  std::string label;
  std::vector<std::size_t> survivors;  // indices into the input ensemble
  std::vector<double> values;          // functional value per survivor
  double tail_bound = 0.0;
  bool tie = false;
};

struct SelectionResult {
  std::size_t index = 0;  // into the input ensemble
  std::vector<std::size_t> survivors;
  bool multiple_survivors = false;
  bool duplicate_survivors = false;  // all remaining survivors are identical
  std::vector<SelectionStage> stages;

  std::string to_json() const;
};

/// Admissible stage followed by the scheduled functionals; stops early once
/// a single member remains. If several survive, the lowest index is chosen
/// and the result is flagged.
SelectionResult semiflow_select(const Ensemble& ens, const FunctionalSchedule& schedule, double tol = kDefaultTieTol,
                                double T_max = std::numeric_limits<double>::quiet_NaN());

/// Symmetrized max-min trajectory distance.
double hausdorff_distance(const Ensemble& a, const Ensemble& b, double T_max, int ell);

using Selector = std::function<SelectionResult(const Ensemble&)>;
/// Builds an ensemble from data; `tails` are shifted members of an earlier
/// ensemble that start at the data and should be included.
using EnsembleBuilder = std::function<Ensemble(const InitialData&, const std::vector<Trajectory>& tails)>;

struct SemigroupOptions {
  bool pass_tails = true;
  int ell = 0;  // 0 selects default_sobolev_index
};

struct SemigroupReport {
  double t1 = 0.0;
  double t2 = 0.0;
  double deviation = std::numeric_limits<double>::infinity();
  bool restart_in_data = false;
  std::string restart_reason;
  std::size_t base_size = 0;
  std::size_t restart_size = 0;
  std::size_t tails_passed = 0;
  SelectionResult base_selection;
  SelectionResult restart_selection;

  std::string to_json() const;
};

/// Selects U from build(data), restarts from (U(t1), E_U(t1-)) with the
/// shifted tails of members passing through U(t1), selects V and reports
/// trajectory_distance(S_t1 U, V, t2).
SemigroupReport check_semigroup(const Selector& select, const EnsembleBuilder& build, const InitialData& data,
                                double t1, double t2, const SemigroupOptions& options = {});

}  // namespace semiflow
