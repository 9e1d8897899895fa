#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "abelpide/csv.hpp"
#include "abelpide/fem.hpp"
#include "abelpide/kernel.hpp"
#include "abelpide/memory.hpp"
#include "abelpide/model.hpp"
#include "abelpide/stepper.hpp"

namespace abelpide {

/// One line of a self-refinement study: level is N (time) or M (space).
/// rate is NaN on the first line.
struct ConvergenceRow {
  int level;
  double error;
  double rate;
};

/// log2(e_{i-1} / e_i) for each i >= 1; the first entry is NaN.
inline std::vector<double> convergence_rates(std::span<const double> errors) {
  std::vector<double> rates(errors.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < errors.size(); ++i) rates[i] = std::log2(errors[i - 1] / errors[i]);
  return rates;
}

inline void check_doubling_levels(std::span<const int> levels) {
  if (levels.empty()) throw std::invalid_argument("refinement levels must not be empty");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw std::invalid_argument("refinement levels must be positive");
    if (i > 0 && levels[i] != 2 * levels[i - 1]) {
      throw std::invalid_argument("refinement levels must double at each step");
    }
  }
}

/// sqrt(h sum_j |coarse_j - fine_j|^2) between two solutions on the same mesh.
inline double time_refinement_error(const Mesh1D& mesh, std::span<const double> coarse,
                                    std::span<const double> fine) {
  if (coarse.size() != fine.size()) throw LengthMismatchError("time_refinement_error: size mismatch");
  Vector d(coarse.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = coarse[i] - fine[i];
  return discrete_l2_norm(mesh, d);
}

/// sqrt(h sum_j |U_j(h) - U_{2j}(h/2)|^2): the fine solution sampled at the
/// coarse nodes (interior index j on the coarse mesh is 2j on the fine one).
inline double space_refinement_error(const Mesh1D& coarse_mesh, std::span<const double> coarse,
                                     std::span<const double> fine) {
  const std::size_t n = coarse_mesh.unknowns();
  if (coarse.size() != n || fine.size() != 2 * n + 1) {
    throw LengthMismatchError("space_refinement_error: fine mesh must halve the coarse one");
  }
  Vector d(n);
  for (std::size_t j = 1; j <= n; ++j) d[j - 1] = coarse[j - 1] - fine[2 * j - 1];
  return discrete_l2_norm(coarse_mesh, d);
}

/// E2 at each N in levels: the run at N against the run at 2N, fixed M, at t = T.
inline std::vector<ConvergenceRow> converge_time(const ModelConfig& base, std::span<const int> levels,
                                                 double tol = kDefaultWeightTolerance) {
  check_doubling_levels(levels);
  std::map<int, Vector> finals;
  const auto final_state = [&](int n) -> const Vector& {
    auto it = finals.find(n);
    if (it == finals.end()) {
      ModelConfig cfg = base;
      cfg.N = n;
      it = finals.emplace(n, solve(cfg, tol).states.back()).first;
    }
    return it->second;
  };
  const Mesh1D mesh(base.a, base.b, base.M);
  std::vector<double> errors;
  for (int n : levels) errors.push_back(time_refinement_error(mesh, final_state(n), final_state(2 * n)));
  const auto rates = convergence_rates(errors);
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < levels.size(); ++i) rows.push_back({levels[i], errors[i], rates[i]});
  return rows;
}

/// F2 at each M in levels: the run at M against the run at 2M, fixed N, at t = T.
inline std::vector<ConvergenceRow> converge_space(const ModelConfig& base, std::span<const int> levels,
                                                  double tol = kDefaultWeightTolerance) {
  check_doubling_levels(levels);
  if (levels.front() < 2) throw std::invalid_argument("converge_space: M must be >= 2");
  // The memory weights depend on the time grid only; share them across meshes.
  const TimeGrid grid(base.T, base.N);
  const bool cn = base.scheme == Scheme::cn2;
  const MemoryWeights weights = cn ? compute_weights(base.kernel, grid, tol)
                                   : MemoryWeights{{}, {}, grid, base.kernel};
  const Vector rect = cn ? Vector{} : compute_weights_rect(base.kernel, grid, tol);
  std::map<int, Vector> finals;
  const auto final_state = [&](int m) -> const Vector& {
    auto it = finals.find(m);
    if (it == finals.end()) {
      ModelConfig cfg = base;
      cfg.M = m;
      it = finals.emplace(m, (cn ? run_cn(cfg, weights) : run_be(cfg, rect)).states.back()).first;
    }
    return it->second;
  };
  std::vector<double> errors;
  for (int m : levels) {
    errors.push_back(space_refinement_error(Mesh1D(base.a, base.b, m), final_state(m), final_state(2 * m)));
  }
  const auto rates = convergence_rates(errors);
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < levels.size(); ++i) rows.push_back({levels[i], errors[i], rates[i]});
  return rows;
}

inline csv::Table convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& level_name,
                                  const std::string& error_name) {
  csv::Table table{{level_name, error_name, "rate"}, {}};
  for (const auto& r : rows) table.rows.push_back({static_cast<double>(r.level), r.error, r.rate});
  return table;
}

/// max_m ||U^m||^2 / (||U^0||^2 + tau |U^0|_1^2 + tau sum_n ||f^{n-1/2}||^2), all
/// norms of the finite element functions (f integrated with 3-point Gauss).
inline double stability_ratio(const ModelConfig& cfg, const Trajectory& traj) {
  const Mesh1D& mesh = traj.mesh;
  const double tau = traj.grid.tau();
  const auto f_sq = [&](double t) {
    static constexpr double g[3] = {-0.77459666924148337704, 0.0, 0.77459666924148337704};
    static constexpr double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    double s = 0.0;
    for (int e = 0; e < mesh.elements(); ++e) {
      const double mid = mesh.node(e) + 0.5 * mesh.h();
      for (int q = 0; q < 3; ++q) {
        const double x = mid + 0.5 * mesh.h() * g[q];
        const double v = 0.5 * (cfg.forcing(x, t) + cfg.forcing(x, t - tau));
        s += 0.5 * mesh.h() * w[q] * v * v;
      }
    }
    return s;
  };
  const double u0 = fe_l2_norm(mesh, traj.states[0]);
  const double g0 = fe_h1_seminorm(mesh, traj.states[0]);
  double forcing = 0.0;
  for (int n = 1; n <= traj.grid.steps(); ++n) forcing += f_sq(traj.grid.node(n));
  const double denom = u0 * u0 + tau * g0 * g0 + tau * forcing;
  double worst = 0.0;
  for (const auto& u : traj.states) {
    const double v = fe_l2_norm(mesh, u);
    worst = std::max(worst, v * v / denom);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Parameter study and crossover

/// Wave-like damped response: (0, 1), T = 10, u0 = 0, mu = 0.1, zeta = 1,
/// f = exp(-(t + (x - 1/2)^2 / 2)), M = 128, N = 1024.
inline ModelConfig parameter_study_config() {
  ModelConfig cfg;
  cfg.a = 0.0;
  cfg.b = 1.0;
  cfg.T = 10.0;
  cfg.M = 128;
  cfg.N = 1024;
  cfg.mu = 0.1;
  cfg.zeta = 1.0;
  cfg.kernel = multiscale_kernel(ExponentSpec::constant(1.0));
  cfg.forcing = SourceField::gauss(0.5, 1.0, 1.0);
  cfg.initial = InitialField::zero();
  return cfg;
}

/// alpha(t) = 0.9 + 0.1 exp(-t/10).
inline ExponentSpec crossover_exponent() { return ExponentSpec::exp_decay(0.9, 0.1, 0.1); }

/// Crossover setup: (0, 10), T = 150, mu = 0.4, zeta = 0.05, u0 = 0,
/// f = exp(-(t/2 + (x - 5)^2 / 8)), M = 128, N = 512.
inline ModelConfig crossover_config() {
  ModelConfig cfg;
  cfg.a = 0.0;
  cfg.b = 10.0;
  cfg.T = 150.0;
  cfg.M = 128;
  cfg.N = 512;
  cfg.mu = 0.4;
  cfg.zeta = 0.05;
  cfg.kernel = multiscale_kernel(crossover_exponent());
  cfg.forcing = SourceField::gauss(5.0, 2.0, 0.5);
  cfg.initial = InitialField::zero();
  return cfg;
}

/// Short-time startup setup: (0, 1), mu = zeta = 1, f = 1, u0 = sin(pi x), T = 0.1.
inline ModelConfig initial_singularity_config(const KernelFamily& kernel, int steps) {
  ModelConfig cfg;
  cfg.T = 0.1;
  cfg.M = 32;
  cfg.N = steps;
  cfg.kernel = kernel;
  return cfg;
}

struct ProbeRun {
  std::string label;
  double parameter;
  std::vector<TimeSample> series;
};

/// u(x_probe, t) for constant exponents alpha in `alphas`.
inline std::vector<ProbeRun> sweep_alpha(const ModelConfig& base, std::span<const double> alphas,
                                         double x_probe, double tol = kDefaultWeightTolerance) {
  std::vector<ProbeRun> out;
  for (double alpha : alphas) {
    ModelConfig cfg = base;
    cfg.kernel = multiscale_kernel(ExponentSpec::constant(alpha));
    out.push_back({"alpha", alpha, probe_series(solve(cfg, tol), x_probe)});
  }
  return out;
}

/// u(x_probe, t) for each viscosity in `mus`, keeping the base kernel.
inline std::vector<ProbeRun> sweep_mu(const ModelConfig& base, std::span<const double> mus,
                                      double x_probe, double tol = kDefaultWeightTolerance) {
  std::vector<ProbeRun> out;
  // Weights do not depend on mu.
  const TimeGrid grid(base.T, base.N);
  const MemoryWeights w = compute_weights(base.kernel, grid, tol);
  for (double mu : mus) {
    ModelConfig cfg = base;
    cfg.mu = mu;
    cfg.scheme = Scheme::cn2;
    out.push_back({"mu", mu, probe_series(run_cn(cfg, w), x_probe)});
  }
  return out;
}

struct CrossoverResult {
  std::vector<TimeSample> multiscale;
  std::vector<TimeSample> short_time;
  std::vector<TimeSample> long_time;
};

/// Runs the same model under k, k0 and k_inf built from `exponent`.
inline CrossoverResult crossover(const ModelConfig& base, const ExponentSpec& exponent, double x_probe,
                                 double tol = kDefaultWeightTolerance) {
  const auto run = [&](const KernelFamily& k) {
    ModelConfig cfg = base;
    cfg.kernel = k;
    return probe_series(solve(cfg, tol), x_probe);
  };
  return {run(multiscale_kernel(exponent)), run(short_asymptote_kernel(exponent)),
          run(long_asymptote_kernel(exponent))};
}

/// `t,gap_k0,gap_kinf`: |u_k - u_k0| and |u_k - u_kinf| per time.
inline csv::Table crossover_gap_csv(const CrossoverResult& r) {
  csv::Table table{{"t", "gap_k0", "gap_kinf"}, {}};
  for (std::size_t n = 0; n < r.multiscale.size(); ++n) {
    table.rows.push_back({r.multiscale[n].t, std::abs(r.multiscale[n].value - r.short_time[n].value),
                          std::abs(r.multiscale[n].value - r.long_time[n].value)});
  }
  return table;
}

// ---------------------------------------------------------------------------
// Kernel curves

/// `t,k,k0,kinf,kE` on a log grid: the multiscale kernel of `exponent`, its two
/// asymptotes, and the Mittag-Leffler kernel with parameter beta.
inline csv::Table kernel_compare_table(const ExponentSpec& exponent, double beta, double t_min,
                                       double t_max, int n_points) {
  const auto grid = kernel_table(multiscale_kernel(exponent), t_min, t_max, n_points, Spacing::log);
  const auto k0 = short_asymptote_kernel(exponent);
  const auto kinf = long_asymptote_kernel(exponent);
  const auto ke = mittag_leffler_kernel(beta);
  csv::Table table{{"t", "k", "k0", "kinf", "kE"}, {}};
  for (const auto& s : grid) {
    table.rows.push_back({s.t, s.k, kernel_eval(k0, s.t), kernel_eval(kinf, s.t), kernel_eval(ke, s.t)});
  }
  return table;
}

/// `t,k_a<a>...,k_inf,kE`: k(t; a) with alpha(t; a) = base + (1 - base) exp(-a t)
/// for each rate a, the power law it tends to, and the Mittag-Leffler kernel.
inline csv::Table kernel_family_table(double base, std::span<const double> rates, double beta,
                                      double t_min, double t_max, int n_points) {
  std::vector<KernelFamily> kernels;
  csv::Table table;
  table.header.push_back("t");
  for (double a : rates) {
    kernels.push_back(multiscale_kernel(ExponentSpec::exp_decay(base, 1.0 - base, a)));
    table.header.push_back("k_a" + fmt::format("{}", a));
  }
  kernels.push_back(constant_abel_kernel(base));
  table.header.push_back("k_inf");
  kernels.push_back(mittag_leffler_kernel(beta));
  table.header.push_back("kE");
  const auto grid = kernel_table(kernels.back(), t_min, t_max, n_points, Spacing::log);
  for (const auto& s : grid) {
    std::vector<double> row{s.t};
    for (const auto& k : kernels) row.push_back(kernel_eval(k, s.t));
    table.rows.push_back(std::move(row));
  }
  return table;
}

/// First t on the grid after which |k(t)/k_ref(t) - 1| stays below rel_tol;
/// NaN if never.
inline double settling_time(const KernelFamily& k, const KernelFamily& k_ref, double t_min, double t_max,
                            int n_points, double rel_tol) {
  const auto grid = kernel_table(k, t_min, t_max, n_points, Spacing::log);
  double settle = std::numeric_limits<double>::quiet_NaN();
  for (const auto& s : grid) {
    const double rel = std::abs(s.k / kernel_eval(k_ref, s.t) - 1.0);
    if (rel >= rel_tol) {
      settle = std::numeric_limits<double>::quiet_NaN();
    } else if (std::isnan(settle)) {
      settle = s.t;
    }
  }
  return settle;
}

}  // namespace abelpide
