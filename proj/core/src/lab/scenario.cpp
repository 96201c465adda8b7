#include "semiflow/lab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "semiflow/parallel.hpp"
#include "semiflow/rng.hpp"
#include "semiflow/spectral.hpp"

namespace semiflow::lab {
namespace {

FluidState generate_fields(const ScenarioConfig& cfg, Generator g, const TorusGrid& grid) {
  const DataSpec& d = cfg.data;
  const double pi = std::numbers::pi;
  switch (g) {
    case Generator::equilibrium:
      return equilibrium_state(d.mass, cfg.law, grid).first;
    case Generator::smooth_wave: {
      const double k = pi * d.mode;
      FluidState s{ScalarField::from_function(grid, [&](const std::array<double, 2>& x) {
                     double v = 1.0 + d.amplitude * std::sin(k * x[0]);
                     if (grid.dim() == 2) v += 0.5 * d.amplitude * std::cos(k * x[1]);
                     return d.rho_mean * v;
                   }),
                   VectorField(grid)};
      s.mom.component(0) = hadamard(s.rho, ScalarField::from_function(grid, [&](const std::array<double, 2>& x) {
                                      return d.amplitude * std::cos(k * x[0]);
                                    }));
      if (grid.dim() == 2) {
        s.mom.component(1) = hadamard(s.rho, ScalarField::from_function(grid, [&](const std::array<double, 2>& x) {
                                        return 0.5 * d.amplitude * std::sin(k * x[1]);
                                      }));
      }
      return s;
    }
    case Generator::riemann: {
      auto inside = [&](const std::array<double, 2>& x) {
        return 0.5 * (std::tanh((x[0] + 0.5) / d.width) - std::tanh((x[0] - 0.5) / d.width));
      };
      FluidState s{ScalarField::from_function(grid, [&](const std::array<double, 2>& x) {
                     return d.rho_right + (d.rho_left - d.rho_right) * inside(x);
                   }),
                   VectorField(grid)};
      s.mom.component(0) = hadamard(s.rho, ScalarField::from_function(grid, [&](const std::array<double, 2>& x) {
                                      return d.u_right + (d.u_left - d.u_right) * inside(x);
                                    }));
      return s;
    }
    case Generator::perturbed_ensemble:
      break;
  }
  throw std::invalid_argument("generate_initial_data: unsupported generator");
}

std::string path_label(const std::vector<std::pair<double, double>>& path) {
  std::ostringstream os;
  for (std::size_t i = 0; i < path.size(); ++i) os << (i ? ";" : "") << "eps=" << path[i].second << "@" << path[i].first;
  return os.str();
}

struct Member {
  Trajectory traj;
  std::vector<std::pair<double, double>> path;  // (start time, eps)
};

}  // namespace

TorusGrid make_grid(const ScenarioConfig& cfg) { return TorusGrid::make(cfg.dim, cfg.n); }

InitialData generate_initial_data(const ScenarioConfig& cfg) {
  const TorusGrid grid = make_grid(cfg);
  const Generator g = cfg.data.generator == Generator::perturbed_ensemble ? cfg.data.base : cfg.data.generator;
  FluidState s = generate_fields(cfg, g, grid);
  double E0 = total_energy(s, cfg.law);
  if (cfg.inflated) E0 += cfg.delta;
  const MembershipResult ok = validate_data_membership(s.rho, s.mom, E0, cfg.law);
  if (!ok) throw std::invalid_argument("generate_initial_data: data not admissible (" + to_string(ok.reason) + ")");
  return InitialData{std::move(s.rho), std::move(s.mom), E0};
}

std::vector<SweepEntry> solver_sweep(const ScenarioConfig& cfg) {
  std::vector<SweepEntry> out;
  for (double e : cfg.eps) {
    for (double s : cfg.smoothing) out.push_back({e, s});
  }
  if (cfg.data.generator == Generator::perturbed_ensemble) {
    Xorshift64Star rng(cfg.data.seed);
    for (int i = 0; i < cfg.data.members; ++i) {
      const double base = cfg.eps[static_cast<std::size_t>(i) % cfg.eps.size()];
      out.push_back({base * (1.0 + cfg.data.perturbation * (2.0 * rng.uniform() - 1.0)), cfg.smoothing.front()});
    }
  }
  return out;
}

std::vector<double> sweep_eps(const ScenarioConfig& cfg) {
  std::vector<double> out;
  for (const auto& e : solver_sweep(cfg)) {
    if (std::find(out.begin(), out.end(), e.eps) == out.end()) out.push_back(e.eps);
  }
  return out;
}

SolverConfig solver_config(const ScenarioConfig& cfg, double eps, double horizon) {
  SolverConfig s;
  s.eps = eps;
  s.m_order = cfg.m_order;
  s.law = cfg.law;
  s.dt = cfg.dt;
  s.t_end = horizon;
  s.sample_stride = cfg.sample_stride;
  s.rho_floor = cfg.rho_floor;
  return s;
}

EnsembleBuild build_ensemble(const ScenarioConfig& cfg, const BuildOptions& options) {
  const InitialData data = generate_initial_data(cfg);
  const int ell = default_sobolev_index(data.rho0.grid());
  const std::vector<SweepEntry> sweep = solver_sweep(cfg);
  const std::vector<double> eps_values = sweep_eps(cfg);
  std::vector<std::string> excluded;

  std::vector<std::optional<Member>> first(sweep.size());
  std::vector<std::string> first_error(sweep.size());
  parallel_for(sweep.size(), [&](std::size_t i) {
    const SweepEntry& e = sweep[i];
    std::ostringstream tag;
    tag << "eps=" << e.eps << " smoothing=" << e.smoothing;
    try {
      const FluidState start = mollify_initial_data(data.rho0, data.mom0, e.smoothing, cfg.law);
      const double gap = negative_sobolev_norm(start.rho - data.rho0, ell) + negative_sobolev_norm(start.mom - data.mom0, ell);
      if (gap > kSeamTol) {
        std::ostringstream why;
        why << tag.str() << ": mollified start differs from the shared data by " << gap;
        first_error[i] = why.str();
        return;
      }
      const SolverRun run = integrate_system(start, solver_config(cfg, e.eps, cfg.t_end));
      first[i] = Member{to_trajectory(run, data.E0, tag.str()), {{0.0, e.eps}}};
    } catch (const std::exception& ex) {
      first_error[i] = tag.str() + ": " + ex.what();
    }
  });
  std::vector<Member> members;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (first[i]) members.push_back(std::move(*first[i]));
    else excluded.push_back(first_error[i]);
  }

  if (options.close) {
    std::vector<double> restarts = cfg.restart_times;
    std::sort(restarts.begin(), restarts.end());
    for (double tau : restarts) {
      struct Job {
        std::size_t parent;
        double eps;
      };
      std::vector<Job> jobs;
      for (std::size_t p = 0; p < members.size(); ++p) {
        for (double e : eps_values) {
          if (e != members[p].path.back().second) jobs.push_back({p, e});
        }
      }
      std::vector<std::optional<Member>> made(jobs.size());
      std::vector<std::string> errors(jobs.size());
      parallel_for(jobs.size(), [&](std::size_t q) {
        const Member& parent = members[jobs[q].parent];
        auto path = parent.path;
        path.emplace_back(tau, jobs[q].eps);
        try {
          const std::size_t K = *parent.traj.sample_index(tau);
          const SolverRun run = integrate_system(parent.traj.state(K), solver_config(cfg, jobs[q].eps, cfg.t_end - tau));
          const Trajectory tail = to_trajectory(run, parent.traj.energy().left()[K]);
          made[q] = Member{continue_at(parent.traj, tau, tail), path};
        } catch (const std::exception& ex) {
          errors[q] = path_label(path) + ": " + ex.what();
        }
      });
      for (std::size_t q = 0; q < jobs.size(); ++q) {
        if (made[q]) members.push_back(std::move(*made[q]));
        else excluded.push_back(errors[q]);
      }
    }
  }

  if (members.empty()) {
    std::string why = "build_ensemble: every run was excluded";
    for (const auto& e : excluded) why += "\n  " + e;
    throw std::runtime_error(why);
  }
  std::vector<Trajectory> trajs;
  std::vector<std::string> paths;
  for (auto& m : members) {
    paths.push_back(path_label(m.path));
    trajs.push_back(std::move(m.traj));
  }
  return EnsembleBuild{Ensemble(data, std::move(trajs)), std::move(paths), std::move(excluded)};
}

Ensemble build_restart_ensemble(const ScenarioConfig& cfg, const InitialData& data, double horizon,
                                const std::vector<Trajectory>& tails, const std::vector<double>& eps) {
  std::vector<std::optional<Trajectory>> fresh(eps.size());
  FluidState start{data.rho0, data.mom0};
  parallel_for(eps.size(), [&](std::size_t i) {
    try {
      fresh[i] = to_trajectory(integrate_system(start, solver_config(cfg, eps[i], horizon)), data.E0);
    } catch (const SolverAborted&) {
      // an aborted restart run simply does not enter the ensemble
    }
  });
  std::vector<Trajectory> members;
  auto add = [&](const Trajectory& t) {
    if (std::none_of(members.begin(), members.end(), [&](const Trajectory& m) { return m == t; })) members.push_back(t);
  };
  for (const auto& t : tails) add(t);
  for (const auto& t : fresh) {
    if (t) add(*t);
  }
  return Ensemble(data, std::move(members));
}

Selector default_selector(const ScenarioConfig& cfg) {
  const FunctionalSchedule schedule = FunctionalSchedule::enumerate(cfg.cap_k, cfg.cap_n, cfg.cap_m);
  const double tol = cfg.tol;
  const double t_max = cfg.t_max;
  return [schedule, tol, t_max](const Ensemble& ens) {
    return semiflow_select(ens, schedule, tol, std::min(t_max, ens.horizon()));
  };
}

SemigroupReport run_semigroup(const ScenarioConfig& cfg, double t1, double t2, bool negative_control,
                              const std::vector<double>& control_eps) {
  if (t1 + t2 > cfg.t_end + 1e-12) throw std::invalid_argument("run_semigroup: t1 + t2 exceeds t_end");
  const std::vector<double> restart_eps = negative_control ? control_eps : sweep_eps(cfg);
  if (restart_eps.empty()) throw std::invalid_argument("run_semigroup: empty restart sweep");
  bool base_done = false;
  EnsembleBuilder build = [&](const InitialData& data, const std::vector<Trajectory>& tails) -> Ensemble {
    if (!base_done) {
      base_done = true;
      return build_ensemble(cfg, BuildOptions{!negative_control}).ensemble;
    }
    return build_restart_ensemble(cfg, data, cfg.t_end - t1, tails, restart_eps);
  };
  SemigroupOptions options;
  options.pass_tails = !negative_control;
  return check_semigroup(default_selector(cfg), build, generate_initial_data(cfg), t1, t2, options);
}

WeakStrongSweep run_weak_strong(const ScenarioConfig& cfg, double c) {
  const InitialData data = generate_initial_data(cfg);
  const FluidState init{data.rho0, data.mom0};
  const ManufacturedReference ref = manufacture_reference(init, cfg.law, cfg.dt, cfg.sample_stride);
  WeakStrongSweep out;
  out.t_ref = ref.t_ref;
  out.blowup_estimate = ref.blowup_estimate;
  out.eps = cfg.eps;
  out.reports.resize(cfg.eps.size());
  parallel_for(cfg.eps.size(), [&](std::size_t i) {
    const SolverRun run = integrate_system(init, solver_config(cfg, cfg.eps[i], ref.t_ref));
    WeakStrongOptions options;
    options.c = c;
    options.eps = cfg.eps[i];
    options.m_order = cfg.m_order;
    out.reports[i] = weak_strong_check(to_trajectory(run, data.E0), ref.reference, options);
  });
  out.all_pass = std::all_of(out.reports.begin(), out.reports.end(), [](const WeakStrongReport& r) { return r.pass; });
  out.max_re_decreasing = true;
  for (std::size_t i = 1; i < out.reports.size(); ++i) {
    if (!(out.reports[i].max_re < out.reports[i - 1].max_re)) out.max_re_decreasing = false;
  }
  return out;
}

}  // namespace semiflow::lab
