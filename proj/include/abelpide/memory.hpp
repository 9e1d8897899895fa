#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "abelpide/csv.hpp"
#include "abelpide/errors.hpp"
#include "abelpide/kernel.hpp"
#include "abelpide/quadrature.hpp"

namespace abelpide {

using Vector = std::vector<double>;

/// Uniform grid t_n = n T / N on [0, T].
class TimeGrid {
 public:
  TimeGrid(double final_time, int steps) : final_time_(final_time), steps_(steps) {
    if (!(final_time > 0.0) || !std::isfinite(final_time)) {
      throw std::invalid_argument("TimeGrid: T must be positive and finite");
    }
    if (steps < 1) throw std::invalid_argument("TimeGrid: N must be >= 1");
  }

  double final_time() const { return final_time_; }
  int steps() const { return steps_; }
  double tau() const { return final_time_ / steps_; }
  double node(int n) const { return n == steps_ ? final_time_ : final_time_ * n / steps_; }

  bool operator==(const TimeGrid&) const = default;

 private:
  double final_time_;
  int steps_;
};

inline constexpr double kDefaultWeightTolerance = 1e-12;

/// Product-integration weights for the memory term on a uniform grid.
///
/// The weight of phi^j in the linear-interpolation quadrature at t_n depends
/// only on the lag m = n - j, so both families are stored once per lag:
///   A_m = int_{t_m}^{t_{m+1}} k(s) (t_{m+1} - s) / tau ds   (a_{n,j} = A_{n-j})
///   B_m = int_{t_m}^{t_{m+1}} k(s) (s - t_m) / tau ds       (b_{n,j} = B_{n-j})
/// and a_{n-1,j} = a_{n,j+1} holds by construction.
struct MemoryWeights {
  Vector A;
  Vector B;
  TimeGrid grid;
  KernelFamily family;

  double a(int n, int j) const { return A.at(static_cast<std::size_t>(n - j)); }
  double b(int n, int j) const { return B.at(static_cast<std::size_t>(n - j)); }
};

namespace detail {

inline void check_weight_tolerance(double tol) {
  if (!(tol > 0.0 && tol <= 1e-8)) {
    throw std::invalid_argument("weight tolerance must lie in (0, 1e-8], got " +
                                std::to_string(tol));
  }
}

// Integrals over one lag interval [t_m, t_m + tau] of k against the three
// local shape functions {1 - s, s, 1} (s the local coordinate in [0, 1]),
// each scaled by tau. Lag 0 of a singular family is mapped s = v^(1/p) first,
// which cancels the s^(p-1) singularity of the kernel.
inline std::array<double, 3> lag_integrals(const KernelFamily& family, double t_m, double tau,
                                           bool first_lag, double tol) {
  const auto shapes = [&](double s, double jac) -> std::array<double, 3> {
    const double sigma = t_m + tau * s;
    if (sigma <= 0.0) return {0.0, 0.0, 0.0};
    const double k = kernel_eval(family, sigma) * jac;
    return {k * (1.0 - s), k * s, k};
  };
  std::array<double, 3> r{};
  if (first_lag && !bounded_at_zero(family)) {
    const double p = singularity_exponent(family);
    const double inv_p = 1.0 / p;
    r = quad::integrate(
        [&](double v) {
          if (v <= 0.0) return std::array<double, 3>{0.0, 0.0, 0.0};
          return shapes(std::pow(v, inv_p), inv_p * std::pow(v, inv_p - 1.0));
        },
        0.0, 1.0, tol);
  } else {
    r = quad::integrate([&](double s) { return shapes(s, 1.0); }, 0.0, 1.0, tol);
  }
  for (double& x : r) x *= tau;
  return r;
}

}  // namespace detail

/// Builds A_m, B_m for m = 0..N-1 with absolute error at most about tol * tau.
/// Throws NonConvergenceError if the adaptive quadrature cannot meet tol.
inline MemoryWeights compute_weights(const KernelFamily& family, const TimeGrid& grid,
                                     double tol = kDefaultWeightTolerance) {
  detail::check_weight_tolerance(tol);
  const auto n = static_cast<std::size_t>(grid.steps());
  MemoryWeights w{Vector(n), Vector(n), grid, family};
  const double tau = grid.tau();
  for (std::size_t m = 0; m < n; ++m) {
    const auto r = detail::lag_integrals(family, grid.node(static_cast<int>(m)), tau, m == 0, tol);
    w.A[m] = r[0];
    w.B[m] = r[1];
  }
  return w;
}

/// Rectangle (right-endpoint) weights w_m = int_{t_m}^{t_{m+1}} k(s) ds for the
/// first-order baseline: I phi(t_n) ~ sum_{j=1..n} w_{n-j} phi^j.
inline Vector compute_weights_rect(const KernelFamily& family, const TimeGrid& grid,
                                   double tol = kDefaultWeightTolerance) {
  detail::check_weight_tolerance(tol);
  const auto n = static_cast<std::size_t>(grid.steps());
  Vector w(n);
  const double tau = grid.tau();
  for (std::size_t m = 0; m < n; ++m) {
    w[m] = detail::lag_integrals(family, grid.node(static_cast<int>(m)), tau, m == 0, tol)[2];
  }
  return w;
}

namespace detail {

inline std::size_t common_length(std::span<const Vector> values) {
  const std::size_t len = values.front().size();
  for (const auto& v : values) {
    if (v.size() != len) throw LengthMismatchError("memory sum: history vectors differ in length");
  }
  return len;
}

inline void axpy(double a, const Vector& x, Vector& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace detail

/// II_n(phi) = sum_{j=1..n} [a_{n,j} phi^j + b_{n,j} phi^{j-1}] for the history
/// values = {phi^0, ..., phi^n}, summed in ascending j.
inline Vector memory_sum_full(const MemoryWeights& w, std::span<const Vector> values) {
  if (values.empty()) throw std::invalid_argument("memory_sum_full: need at least phi^0");
  const std::size_t len = detail::common_length(values);
  const std::size_t n = values.size() - 1;
  if (n > w.A.size()) throw std::invalid_argument("memory_sum_full: n exceeds grid steps");
  Vector out(len, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    detail::axpy(w.A[n - j], values[j], out);
    detail::axpy(w.B[n - j], values[j - 1], out);
  }
  return out;
}

/// II_{n-1/2}(phi) = (II_n + II_{n-1}) / 2 written through the shift identity:
///   sum_j a_{n,j} (phi^j + phi^{j-1})/2 + sum_j b_{n,j} (phi^{j-1} + phi^{j-2})/2
///   - a_{n,1} phi^0 / 2,      with phi^{-1} = 0.
inline Vector memory_sum_averaged(const MemoryWeights& w, std::span<const Vector> values) {
  if (values.size() < 2) throw std::invalid_argument("memory_sum_averaged: need n >= 1");
  const std::size_t len = detail::common_length(values);
  const std::size_t n = values.size() - 1;
  if (n > w.A.size()) throw std::invalid_argument("memory_sum_averaged: n exceeds grid steps");
  Vector out(len, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    detail::axpy(0.5 * w.A[n - j], values[j], out);
    detail::axpy(0.5 * w.A[n - j], values[j - 1], out);
    detail::axpy(0.5 * w.B[n - j], values[j - 1], out);
    if (j >= 2) detail::axpy(0.5 * w.B[n - j], values[j - 2], out);
  }
  detail::axpy(-0.5 * w.A[n - 1], values[0], out);
  return out;
}

/// Debug dump `m,A,B`.
inline csv::Table weights_csv(const MemoryWeights& w) {
  csv::Table table{{"m", "A", "B"}, {}};
  for (std::size_t m = 0; m < w.A.size(); ++m) {
    table.rows.push_back({static_cast<double>(m), w.A[m], w.B[m]});
  }
  return table;
}

}  // namespace abelpide
