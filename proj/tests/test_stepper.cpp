#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "abelpide/experiments.hpp"
#include "abelpide/stepper.hpp"
#include "oracles.hpp"

using namespace abelpide;

namespace {

ModelConfig small_benchmark(int M, int N) {
  ModelConfig cfg = convergence_benchmark();
  cfg.M = M;
  cfg.N = N;
  return cfg;
}

// Discrete-norm error of the memoryless run against exp(-mu pi^2 T) sin(pi x).
double heat_error(Scheme scheme, int M, int N, double T = 0.5) {
  ModelConfig cfg;
  cfg.zeta = 0.0;
  cfg.forcing = SourceField::zero();
  cfg.T = T;
  cfg.M = M;
  cfg.N = N;
  cfg.scheme = scheme;
  const auto traj = solve(cfg);
  const double decay = std::exp(-std::numbers::pi * std::numbers::pi * T);
  const auto exact = nodal_interpolate(traj.mesh, [&](double x) { return decay * std::sin(std::numbers::pi * x); });
  Vector d(exact.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = traj.states.back()[i] - exact[i];
  return discrete_l2_norm(traj.mesh, d);
}

}  // namespace

TEST(Stepper, ZeroDataStaysZero) {
  for (Scheme s : {Scheme::cn2, Scheme::be1}) {
    ModelConfig cfg = small_benchmark(8, 16);
    cfg.forcing = SourceField::zero();
    cfg.initial = InitialField::zero();
    cfg.scheme = s;
    const auto traj = solve(cfg);
    ASSERT_EQ(traj.states.size(), 17u);
    for (const auto& u : traj.states)
      for (double v : u) EXPECT_EQ(v, 0.0);
  }
}

TEST(Stepper, InitialStateIsNodalInterpolant) {
  const auto traj = solve(small_benchmark(8, 4));
  const auto ref = nodal_interpolate(traj.mesh, [](double x) { return std::sin(std::numbers::pi * x); });
  EXPECT_EQ(traj.states[0], ref);
}

TEST(Stepper, HeatBenchmarkSecondOrder) {
  const double e1 = heat_error(Scheme::cn2, 16, 16);
  const double e2 = heat_error(Scheme::cn2, 32, 32);
  const double e3 = heat_error(Scheme::cn2, 64, 64);
  EXPECT_GT(e1 / e2, 3.5);
  EXPECT_LT(e1 / e2, 4.5);
  EXPECT_GT(e2 / e3, 3.5);
  EXPECT_LT(e2 / e3, 4.5);
}

TEST(Stepper, HeatBenchmarkBackwardEulerFirstOrderInTime) {
  // Fine mesh so that the O(tau) part dominates.
  const double e1 = heat_error(Scheme::be1, 256, 32);
  const double e2 = heat_error(Scheme::be1, 256, 64);
  EXPECT_NEAR(std::log2(e1 / e2), 1.0, 0.1);
}

TEST(Stepper, HeatProbeAtMidpoint) {
  ModelConfig cfg;
  cfg.zeta = 0.0;
  cfg.forcing = SourceField::zero();
  cfg.T = 0.5;
  cfg.M = 64;
  cfg.N = 64;
  const auto traj = solve(cfg);
  EXPECT_NEAR(probe(traj, 0.5, cfg.N), std::exp(-std::numbers::pi * std::numbers::pi * 0.5), 1e-4);
}

TEST(Stepper, SymmetricDataGiveSymmetricStates) {
  const auto traj = solve(small_benchmark(16, 32));
  for (const auto& u : traj.states) {
    for (std::size_t j = 0; j < u.size(); ++j) EXPECT_NEAR(u[j], u[u.size() - 1 - j], 1e-12);
  }
}

TEST(Stepper, WeightedRecursionEquivalence) {
  const ModelConfig cfg = small_benchmark(8, 16);
  const auto w = compute_weights(cfg.kernel, TimeGrid(cfg.T, cfg.N));
  const auto traj = run_cn(cfg, w);
  const auto ref = oracle::weighted_cn(cfg, w, 1.0);
  ASSERT_EQ(ref.size(), traj.states.size());
  for (std::size_t n = 0; n < ref.size(); ++n) {
    for (std::size_t j = 0; j < ref[n].size(); ++j) {
      EXPECT_NEAR(traj.states[n][j], ref[n][j], 1e-10 * std::max(1.0, std::abs(ref[n][j])));
    }
  }
}

TEST(Stepper, WeightedRecursionZeroLambdaOnSingularKernel) {
  ModelConfig cfg = small_benchmark(8, 16);
  cfg.kernel = constant_abel_kernel(0.4);
  const auto w = compute_weights(cfg.kernel, TimeGrid(cfg.T, cfg.N));
  const auto traj = run_cn(cfg, w);
  const auto ref = oracle::weighted_cn(cfg, w, 0.0);
  for (std::size_t n = 0; n < ref.size(); ++n)
    for (std::size_t j = 0; j < ref[n].size(); ++j) EXPECT_NEAR(traj.states[n][j], ref[n][j], 1e-10);
}

TEST(Stepper, StabilityRatioBounded) {
  for (int N : {64, 128, 256, 512, 1024}) {
    const ModelConfig cfg = small_benchmark(32, N);
    EXPECT_LT(stability_ratio(cfg, solve(cfg)), 10.0) << "N " << N;
  }
}

TEST(Stepper, Deterministic) {
  const ModelConfig cfg = small_benchmark(16, 64);
  const auto a = solve(cfg);
  const auto b = solve(cfg);
  EXPECT_EQ(a.states, b.states);
}

TEST(Stepper, HistoryCostScalesQuadratically) {
  // Weights are built outside the timed region; only the recurrence is timed.
  const auto time_run = [](int N) {
    const ModelConfig cfg = small_benchmark(32, N);
    const auto w = compute_weights(cfg.kernel, TimeGrid(cfg.T, cfg.N));
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto traj = run_cn(cfg, w);
      const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      best = std::min(best, dt);
      EXPECT_EQ(traj.states.size(), static_cast<std::size_t>(N) + 1);
    }
    return best;
  };
  const double r = time_run(2048) / time_run(1024);
  EXPECT_LE(r, 5.0);
  EXPECT_GT(r, 1.5);
}

TEST(Stepper, MismatchedWeightsRejected) {
  const ModelConfig cfg = small_benchmark(8, 16);
  const auto w = compute_weights(cfg.kernel, TimeGrid(cfg.T, 8));
  EXPECT_THROW(run_cn(cfg, w), std::invalid_argument);
  EXPECT_THROW(run_be(cfg, Vector(8, 0.1)), std::invalid_argument);
}

TEST(Stepper, InvalidConfigRejected) {
  ModelConfig cfg = small_benchmark(8, 16);
  cfg.mu = 0.0;
  EXPECT_THROW(solve(cfg), std::invalid_argument);
  cfg = small_benchmark(1, 16);
  EXPECT_THROW(solve(cfg), std::invalid_argument);
  cfg = small_benchmark(8, 16);
  cfg.zeta = -1.0;
  EXPECT_THROW(solve(cfg), std::invalid_argument);
}

TEST(Probe, NodesAndMidpoints) {
  Trajectory traj{Mesh1D(0.0, 1.0, 4), TimeGrid(1.0, 1), {Vector{1.0, 2.0, 2.0}, Vector{0.0, 0.0, 0.0}}};
  EXPECT_DOUBLE_EQ(probe(traj, 0.25, 0), 1.0);
  EXPECT_DOUBLE_EQ(probe(traj, 0.5, 0), 2.0);
  EXPECT_DOUBLE_EQ(probe(traj, 0.625, 0), 2.0);
  EXPECT_DOUBLE_EQ(probe(traj, 0.125, 0), 0.5);
  EXPECT_DOUBLE_EQ(probe(traj, 0.0, 0), 0.0);
  EXPECT_DOUBLE_EQ(probe(traj, 1.0, 0), 0.0);
  EXPECT_THROW(probe(traj, 1.5, 0), std::domain_error);
  EXPECT_THROW(probe(traj, 0.5, 2), std::out_of_range);
}

TEST(DifferenceQuotient, ConstantAndLinearInTime) {
  const TimeGrid g(1.0, 4);
  Trajectory flat{Mesh1D(0.0, 1.0, 2), g, std::vector<Vector>(5, Vector{3.0})};
  for (const auto& s : difference_quotient_series(flat, 0.5)) EXPECT_EQ(s.value, 0.0);
  Trajectory ramp{Mesh1D(0.0, 1.0, 2), g, {}};
  for (int n = 0; n <= 4; ++n) ramp.states.push_back(Vector{n * g.tau() * 1.5});
  const auto dq = difference_quotient_series(ramp, 0.5);
  ASSERT_EQ(dq.size(), 4u);
  for (const auto& s : dq) EXPECT_NEAR(s.value, 1.5, 1e-14);
}

TEST(DifferenceQuotient, MultiscaleExponentStartsSmoothly) {
  double prev = 0.0;
  for (int N : {256, 512, 1024}) {
    const auto traj = solve(initial_singularity_config(multiscale_kernel(ExponentSpec::exp_decay(0.9, 0.1, 0.1)), N));
    const double first = difference_quotient_series(traj, 0.5).front().value;
    if (prev != 0.0) {
      EXPECT_LT(std::abs(first / prev - 1.0), 0.1);
    }
    prev = first;
  }
}

TEST(TrajectoryCsv, Shape) {
  const auto traj = solve(small_benchmark(4, 2));
  const auto table = trajectory_csv(traj);
  EXPECT_EQ(table.header, (std::vector<std::string>{"t", "x_1", "x_2", "x_3"}));
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_EQ(table.rows[2][0], 1.0);
  const auto p = probe_csv(probe_series(traj, 0.5));
  EXPECT_EQ(p.header, (std::vector<std::string>{"t", "u"}));
  EXPECT_EQ(p.rows.size(), 3u);
}
