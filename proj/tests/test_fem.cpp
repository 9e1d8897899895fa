#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "abelpide/fem.hpp"
#include "oracles.hpp"

using namespace abelpide;

TEST(Mesh, Basics) {
  const Mesh1D m(0.0, 1.0, 4);
  EXPECT_EQ(m.unknowns(), 3u);
  EXPECT_DOUBLE_EQ(m.h(), 0.25);
  EXPECT_DOUBLE_EQ(m.node(4), 1.0);
  EXPECT_THROW(Mesh1D(0.0, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(Mesh1D(1.0, 1.0, 4), std::invalid_argument);
}

TEST(Mass, EntriesAndRowSums) {
  const auto mass = assemble_mass(Mesh1D(0.0, 1.0, 4));
  for (double d : mass.diag) EXPECT_DOUBLE_EQ(d, 1.0 / 6.0);
  for (double o : mass.sub) EXPECT_DOUBLE_EQ(o, 1.0 / 24.0);
  EXPECT_EQ(mass.sub, mass.super);
  const auto big = assemble_mass(Mesh1D(0.0, 2.0, 10));
  const auto row = big.apply(Vector(9, 1.0));
  for (std::size_t i = 1; i + 1 < row.size(); ++i) EXPECT_NEAR(row[i], 0.2, 1e-15);
}

TEST(Stiffness, EntriesAndRowSums) {
  const auto s2 = assemble_stiffness(Mesh1D(0.0, 1.0, 2));
  ASSERT_EQ(s2.size(), 1u);
  EXPECT_DOUBLE_EQ(s2.diag[0], 4.0);
  const auto s = assemble_stiffness(Mesh1D(0.0, 1.0, 8));
  const auto row = s.apply(Vector(7, 1.0));
  for (std::size_t i = 1; i + 1 < row.size(); ++i) EXPECT_NEAR(row[i], 0.0, 1e-13);
  EXPECT_EQ(s.sub, s.super);
}

TEST(Stiffness, PositiveDefiniteByThomasPivots) {
  for (int M : {2, 3, 10, 257}) {
    EXPECT_NO_THROW(ThomasFactorization(assemble_stiffness(Mesh1D(0.0, 1.0, M))));
  }
}

TEST(Load, Examples) {
  const Mesh1D m(0.0, 1.0, 4);
  for (double v : assemble_load(m, [](double) { return 1.0; })) EXPECT_NEAR(v, 0.25, 1e-15);
  const auto lx = assemble_load(m, [](double x) { return x; });
  for (int j = 1; j <= 3; ++j) EXPECT_NEAR(lx[static_cast<std::size_t>(j - 1)], 0.25 * m.node(j), 1e-15);
  for (double v : assemble_load(m, [](double) { return 0.0; })) EXPECT_EQ(v, 0.0);
}

TEST(Load, ExactForQuarticTimesHat) {
  const Mesh1D m(0.0, 1.0, 4);
  // int x^4 phi_2 over [0.25, 0.75], phi_2 the hat centred at 0.5, is 301/15360.
  const auto l = assemble_load(m, [](double x) { return x * x * x * x; });
  EXPECT_NEAR(l[1], 301.0 / 15360.0, 1e-16);
}

TEST(Thomas, Examples) {
  const TriDiagMatrix id{Vector(2, 0.0), Vector(3, 1.0), Vector(2, 0.0)};
  EXPECT_EQ(thomas_solve(id, Vector{1.0, -2.0, 3.0}), (Vector{1.0, -2.0, 3.0}));
  const TriDiagMatrix two{Vector{1.0}, Vector{2.0, 2.0}, Vector{1.0}};
  const auto x = thomas_solve(two, Vector{3.0, 3.0});
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 1.0, 1e-15);
}

TEST(Thomas, ZeroPivotThrows) {
  const TriDiagMatrix z{Vector{1.0}, Vector{1.0, 1.0}, Vector{1.0}};
  EXPECT_THROW(thomas_solve(z, Vector{1.0, 1.0}), SingularMatrixError);
  const TriDiagMatrix z0{Vector{}, Vector{0.0}, Vector{}};
  EXPECT_THROW(thomas_solve(z0, Vector{1.0}), SingularMatrixError);
}

TEST(Thomas, RandomSpdAgainstDenseSolve) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 7;
    TriDiagMatrix a{Vector(n - 1), Vector(n), Vector(n - 1)};
    for (std::size_t i = 0; i + 1 < n; ++i) a.sub[i] = a.super[i] = u(rng);
    for (std::size_t i = 0; i < n; ++i) a.diag[i] = 2.5 + u(rng);
    Vector rhs(n);
    for (double& v : rhs) v = u(rng);
    const auto x = thomas_solve(a, rhs);
    const auto ref = oracle::dense_solve(oracle::to_dense(a), rhs);
    double xmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(x[i], ref[i], 1e-12);
      xmax = std::max(xmax, std::abs(x[i]));
    }
    const auto r = a.apply(x);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LE(std::abs(r[i] - rhs[i]), 1e-12 * a.norm_inf() * xmax);
  }
}

TEST(Thomas, SystemMatricesFactorAcrossScales) {
  for (int M : {4, 32, 512}) {
    const Mesh1D m(0.0, 1.0, M);
    for (double tau : {1e-4, 1e-2, 1.0}) {
      for (double c : {1e-3, 1.0, 10.0}) {
        EXPECT_NO_THROW(ThomasFactorization(combine(1.0 / tau, assemble_mass(m), c, assemble_stiffness(m))));
      }
    }
  }
}

TEST(Norms, DiscreteL2Examples) {
  const Mesh1D m(0.0, 1.0, 8);
  EXPECT_EQ(discrete_l2_norm(m, Vector(7, 0.0)), 0.0);
  EXPECT_NEAR(discrete_l2_norm(m, Vector(7, 1.0)), std::sqrt(0.125 * 7), 1e-15);
  const Mesh1D f(0.0, 1.0, 128);
  const auto s = nodal_interpolate(f, [](double x) { return std::sin(std::numbers::pi * x); });
  EXPECT_NEAR(discrete_l2_norm(f, s), std::sqrt(0.5), 1e-3);
  EXPECT_THROW(discrete_l2_norm(m, Vector(3, 1.0)), LengthMismatchError);
}

TEST(Norms, HomogeneityAndTriangle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Mesh1D m(0.0, 2.0, 20);
  for (int trial = 0; trial < 200; ++trial) {
    Vector x(19), y(19), s(19), cx(19);
    const double c = u(rng);
    for (std::size_t i = 0; i < 19; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
      s[i] = x[i] + y[i];
      cx[i] = c * x[i];
    }
    EXPECT_NEAR(discrete_l2_norm(m, cx), std::abs(c) * discrete_l2_norm(m, x), 1e-12);
    EXPECT_LE(discrete_l2_norm(m, s), discrete_l2_norm(m, x) + discrete_l2_norm(m, y) + 1e-12);
  }
}

TEST(Interpolation, Examples) {
  const Mesh1D m(0.0, 1.0, 4);
  for (double v : nodal_interpolate(m, [](double) { return 0.0; })) EXPECT_EQ(v, 0.0);
  const auto s = nodal_interpolate(m, [](double x) { return std::sin(std::numbers::pi * x); });
  EXPECT_NEAR(s[0], std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_NEAR(s[1], 1.0, 1e-15);
  EXPECT_NEAR(s[2], std::sqrt(2.0) / 2.0, 1e-15);
}

TEST(Interpolation, QuadraticErrorBound) {
  // g = x(1-x): max |g - I_h g| <= h^2/8 max|g''| = h^2/4, checked between nodes.
  for (int M : {4, 16, 64}) {
    const Mesh1D m(0.0, 1.0, M);
    const auto g = [](double x) { return x * (1.0 - x); };
    const auto v = nodal_interpolate(m, g);
    const double h = m.h();
    double err = 0.0;
    for (int e = 0; e < M; ++e) {
      const double gl = e == 0 ? 0.0 : v[static_cast<std::size_t>(e - 1)];
      const double gr = e == M - 1 ? 0.0 : v[static_cast<std::size_t>(e)];
      for (int q = 0; q <= 10; ++q) {
        const double s = q / 10.0;
        err = std::max(err, std::abs(g(m.node(e) + s * h) - ((1 - s) * gl + s * gr)));
      }
    }
    EXPECT_LE(err, h * h / 4.0 + 1e-15);
  }
}

TEST(Ritz, SineProjectionWithinQuadraticBound) {
  // S x = load(pi^2 sin(pi x)); nodal error stays below h^2 as h shrinks.
  for (int M : {8, 16, 32, 64}) {
    const Mesh1D m(0.0, 1.0, M);
    const double pi = std::numbers::pi;
    const auto rhs = assemble_load(m, [pi](double x) { return pi * pi * std::sin(pi * x); });
    const auto x = thomas_solve(assemble_stiffness(m), rhs);
    double e = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      e = std::max(e, std::abs(x[j] - std::sin(pi * m.node(static_cast<int>(j + 1)))));
    }
    EXPECT_LE(e, m.h() * m.h()) << "M " << M;
  }
}

TEST(Norms, FiniteElementNorms) {
  const Mesh1D m(0.0, 1.0, 256);
  const auto s = nodal_interpolate(m, [](double x) { return std::sin(std::numbers::pi * x); });
  EXPECT_NEAR(fe_l2_norm(m, s), std::sqrt(0.5), 1e-4);
  EXPECT_NEAR(fe_h1_seminorm(m, s), std::numbers::pi * std::sqrt(0.5), 1e-3);
}
