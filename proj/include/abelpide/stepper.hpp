#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "abelpide/csv.hpp"
#include "abelpide/fem.hpp"
#include "abelpide/memory.hpp"
#include "abelpide/model.hpp"

namespace abelpide {

/// Nodal coefficient vectors U^0..U^N on the interior nodes.
struct Trajectory {
  Mesh1D mesh;
  TimeGrid grid;
  std::vector<Vector> states;
};

namespace detail {

inline void check_finite(const Vector& v, int n) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::runtime_error("time stepper produced a non-finite value at step " +
                               std::to_string(n));
    }
  }
}

template <class Config>
Vector load_at(const Mesh1D& mesh, const Config& cfg, double t) {
  return assemble_load(mesh, [&](double x) { return cfg.forcing(x, t); });
}

}  // namespace detail

inline Vector initial_state(const ModelConfig& cfg, const Mesh1D& mesh) {
  return nodal_interpolate(mesh, [&](double x) { return cfg.initial(x, cfg.a, cfg.b); });
}

/// Crank-Nicolson Galerkin scheme. Per step n = 1..N solves
///   (M/tau + (mu + zeta A_0)/2 S) U^n
///     = M/tau U^{n-1} - mu/2 S U^{n-1} - zeta S H_n + (F^n + F^{n-1})/2
/// where H_n is II_{n-1/2}(U) without its A_0 U^n / 2 part. The system matrix
/// is lag-independent and factored once.
inline Trajectory run_cn(const ModelConfig& cfg, const MemoryWeights& w) {
  cfg.validate();
  const Mesh1D mesh(cfg.a, cfg.b, cfg.M);
  const TimeGrid grid(cfg.T, cfg.N);
  if (!(w.grid == grid)) throw std::invalid_argument("run_cn: weights built on a different grid");
  const double tau = grid.tau();
  const auto mass = assemble_mass(mesh);
  const auto stiff = assemble_stiffness(mesh);
  const double implicit = 0.5 * (cfg.mu + cfg.zeta * w.A[0]);
  const ThomasFactorization solver(combine(1.0 / tau, mass, implicit, stiff));
  const TriDiagMatrix explicit_part = combine(1.0 / tau, mass, -0.5 * cfg.mu, stiff);

  const std::size_t len = mesh.unknowns();
  Trajectory traj{mesh, grid, {}};
  traj.states.reserve(static_cast<std::size_t>(cfg.N) + 1);
  traj.states.push_back(initial_state(cfg, mesh));
  const Vector& u0 = traj.states[0];

  // half_sums[j] = (U^j + U^{j-1}) / 2 with U^{-1} = 0.
  std::vector<Vector> half_sums;
  half_sums.reserve(static_cast<std::size_t>(cfg.N) + 1);
  {
    Vector h0(u0);
    for (double& x : h0) x *= 0.5;
    half_sums.push_back(std::move(h0));
  }

  Vector load_prev = detail::load_at(mesh, cfg, grid.node(0));
  Vector history(len);
  for (int n = 1; n <= cfg.N; ++n) {
    const auto nn = static_cast<std::size_t>(n);
    const Vector& prev = traj.states[nn - 1];
    std::fill(history.begin(), history.end(), 0.0);
    if (cfg.zeta != 0.0) {
      for (std::size_t j = 1; j < nn; ++j) detail::axpy(w.A[nn - j], half_sums[j], history);
      detail::axpy(0.5 * w.A[0], prev, history);
      for (std::size_t j = 1; j <= nn; ++j) detail::axpy(w.B[nn - j], half_sums[j - 1], history);
      detail::axpy(-0.5 * w.A[nn - 1], u0, history);
    }
    const Vector load_now = detail::load_at(mesh, cfg, grid.node(n));
    Vector rhs = explicit_part.apply(prev);
    const Vector s_hist = stiff.apply(history);
    for (std::size_t i = 0; i < len; ++i) {
      rhs[i] += -cfg.zeta * s_hist[i] + 0.5 * (load_now[i] + load_prev[i]);
    }
    Vector next = solver.solve(rhs);
    detail::check_finite(next, n);

    Vector half(len);
    for (std::size_t i = 0; i < len; ++i) half[i] = 0.5 * (next[i] + prev[i]);
    half_sums.push_back(std::move(half));
    traj.states.push_back(std::move(next));
    load_prev = load_now;
  }
  return traj;
}

/// Backward Euler baseline with rectangle memory weights:
///   (M/tau + (mu + zeta w_0) S) U^n = M/tau U^{n-1} - zeta S sum_{j<n} w_{n-j} U^j + F^n.
inline Trajectory run_be(const ModelConfig& cfg, std::span<const double> rect) {
  cfg.validate();
  const Mesh1D mesh(cfg.a, cfg.b, cfg.M);
  const TimeGrid grid(cfg.T, cfg.N);
  if (rect.size() != static_cast<std::size_t>(cfg.N)) {
    throw std::invalid_argument("run_be: rectangle weights do not match N");
  }
  const double tau = grid.tau();
  const auto mass = assemble_mass(mesh);
  const auto stiff = assemble_stiffness(mesh);
  const ThomasFactorization solver(combine(1.0 / tau, mass, cfg.mu + cfg.zeta * rect[0], stiff));

  const std::size_t len = mesh.unknowns();
  Trajectory traj{mesh, grid, {}};
  traj.states.reserve(static_cast<std::size_t>(cfg.N) + 1);
  traj.states.push_back(initial_state(cfg, mesh));
  Vector history(len);
  for (int n = 1; n <= cfg.N; ++n) {
    const auto nn = static_cast<std::size_t>(n);
    std::fill(history.begin(), history.end(), 0.0);
    if (cfg.zeta != 0.0) {
      for (std::size_t j = 1; j < nn; ++j) detail::axpy(rect[nn - j], traj.states[j], history);
    }
    Vector rhs = mass.apply(traj.states[nn - 1]);
    const Vector s_hist = stiff.apply(history);
    const Vector load_now = detail::load_at(mesh, cfg, grid.node(n));
    for (std::size_t i = 0; i < len; ++i) {
      rhs[i] = rhs[i] / tau - cfg.zeta * s_hist[i] + load_now[i];
    }
    Vector next = solver.solve(rhs);
    detail::check_finite(next, n);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

/// Builds the weights the configured scheme needs and runs it.
inline Trajectory solve(const ModelConfig& cfg, double tol = kDefaultWeightTolerance) {
  cfg.validate();
  const TimeGrid grid(cfg.T, cfg.N);
  if (cfg.scheme == Scheme::cn2) return run_cn(cfg, compute_weights(cfg.kernel, grid, tol));
  const Vector rect = compute_weights_rect(cfg.kernel, grid, tol);
  return run_be(cfg, rect);
}

/// Piecewise-linear value at x in [a, b] after step n (boundary values are 0).
inline double probe(const Trajectory& traj, double x, int n) {
  const Mesh1D& mesh = traj.mesh;
  if (n < 0 || static_cast<std::size_t>(n) >= traj.states.size()) {
    throw std::out_of_range("probe: step index out of range");
  }
  if (!(x >= mesh.left() && x <= mesh.right())) {
    throw std::domain_error("probe: x outside the domain");
  }
  const Vector& u = traj.states[static_cast<std::size_t>(n)];
  const auto value = [&](int node) {
    return (node <= 0 || node >= mesh.elements()) ? 0.0 : u[static_cast<std::size_t>(node - 1)];
  };
  const double pos = (x - mesh.left()) / mesh.h();
  int e = static_cast<int>(std::floor(pos));
  e = std::clamp(e, 0, mesh.elements() - 1);
  const double s = pos - e;
  if (s == 0.0) return value(e);
  return (1.0 - s) * value(e) + s * value(e + 1);
}

struct TimeSample {
  double t;
  double value;
};

/// u(x, t_n) for n = 0..N.
inline std::vector<TimeSample> probe_series(const Trajectory& traj, double x) {
  std::vector<TimeSample> out;
  out.reserve(traj.states.size());
  for (int n = 0; n <= traj.grid.steps(); ++n) out.push_back({traj.grid.node(n), probe(traj, x, n)});
  return out;
}

/// (U^n(x) - U^{n-1}(x)) / tau for n = 1..N, tagged with t_n.
inline std::vector<TimeSample> difference_quotient_series(const Trajectory& traj, double x) {
  std::vector<TimeSample> out;
  const double tau = traj.grid.tau();
  double prev = probe(traj, x, 0);
  for (int n = 1; n <= traj.grid.steps(); ++n) {
    const double now = probe(traj, x, n);
    out.push_back({traj.grid.node(n), (now - prev) / tau});
    prev = now;
  }
  return out;
}

inline csv::Table trajectory_csv(const Trajectory& traj) {
  csv::Table table;
  table.header.push_back("t");
  for (std::size_t j = 1; j <= traj.mesh.unknowns(); ++j) table.header.push_back("x_" + std::to_string(j));
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    std::vector<double> row;
    row.reserve(traj.mesh.unknowns() + 1);
    row.push_back(traj.grid.node(static_cast<int>(n)));
    row.insert(row.end(), traj.states[n].begin(), traj.states[n].end());
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline csv::Table probe_csv(const std::vector<TimeSample>& series) {
  csv::Table table{{"t", "u"}, {}};
  for (const auto& s : series) table.rows.push_back({s.t, s.value});
  return table;
}

}  // namespace abelpide
