#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>

#include "abelpide/errors.hpp"

namespace abelpide::quad {

/// Nodes and weights of the 16-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  static constexpr std::size_t order = 16;
  std::array<double, order> nodes{};
  std::array<double, order> weights{};
};

namespace detail {

inline GaussLegendreRule build_gauss_legendre() {
  GaussLegendreRule rule;
  constexpr std::size_t n = GaussLegendreRule::order;
  for (std::size_t i = 0; i < n / 2; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-17) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

inline double max_abs(double v) { return std::abs(v); }

template <std::size_t K>
double max_abs(const std::array<double, K>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double scaled(double v, double s) { return v * s; }

template <std::size_t K>
std::array<double, K> scaled(std::array<double, K> v, double s) {
  for (double& x : v) x *= s;
  return v;
}

inline double add(double a, double b) { return a + b; }

template <std::size_t K>
std::array<double, K> add(std::array<double, K> a, const std::array<double, K>& b) {
  for (std::size_t i = 0; i < K; ++i) a[i] += b[i];
  return a;
}

inline double sub(double a, double b) { return a - b; }

template <std::size_t K>
std::array<double, K> sub(std::array<double, K> a, const std::array<double, K>& b) {
  for (std::size_t i = 0; i < K; ++i) a[i] -= b[i];
  return a;
}

}  // namespace detail

inline const GaussLegendreRule& gauss_legendre16() {
  static const GaussLegendreRule rule = detail::build_gauss_legendre();
  return rule;
}

/// Single 16-point Gauss-Legendre panel on [a, b]. The integrand may return
/// a double or a std::array<double, K> (several integrals sharing nodes).
template <class F>
auto gauss16(const F& f, double a, double b) {
  const auto& rule = gauss_legendre16();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  auto acc = detail::scaled(f(mid + half * rule.nodes[0]), rule.weights[0]);
  for (std::size_t i = 1; i < GaussLegendreRule::order; ++i) {
    acc = detail::add(acc, detail::scaled(f(mid + half * rule.nodes[i]), rule.weights[i]));
  }
  return detail::scaled(acc, half);
}

namespace detail {

template <class F, class R>
R adaptive_step(const F& f, double a, double b, const R& whole, double tol, double floor,
                int depth, int max_depth) {
  const double mid = 0.5 * (a + b);
  const R left = gauss16(f, a, mid);
  const R right = gauss16(f, mid, b);
  const R both = add(left, right);
  const double err = max_abs(sub(both, whole));
  if (err <= tol || err <= floor) return both;
  if (depth >= max_depth) {
    throw NonConvergenceError("adaptive quadrature exceeded depth limit on [" +
                              std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return add(adaptive_step(f, a, mid, left, 0.5 * tol, floor, depth + 1, max_depth),
             adaptive_step(f, mid, b, right, 0.5 * tol, floor, depth + 1, max_depth));
}

}  // namespace detail

/// Adaptive bisection with 16-point Gauss-Legendre panels. Stops when the
/// refined and unrefined panel estimates differ by less than abs_tol
/// (split evenly between children). Panels whose difference is at round-off
/// level relative to the whole integral are accepted as converged.
/// Throws NonConvergenceError past max_depth.
template <class F>
auto integrate(const F& f, double a, double b, double abs_tol, int max_depth = 48) {
  const auto whole = gauss16(f, a, b);
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * detail::max_abs(whole);
  return detail::adaptive_step(f, a, b, whole, abs_tol, floor, 0, max_depth);
}

}  // namespace abelpide::quad
