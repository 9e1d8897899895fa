#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "abelpide/exponent.hpp"
#include "abelpide/kernel.hpp"

namespace abelpide {

enum class Scheme {
  cn2,  ///< Crank-Nicolson with the averaged product-integration memory term
  be1,  ///< backward Euler with right-endpoint rectangle memory weights
};

/// Source term catalog.
struct SourceField {
  enum class Kind { zero, one, gauss_source };
  Kind kind = Kind::one;
  // gauss_source: amplitude * exp(-(rate t + (x - center)^2 / (2 width^2)))
  double amplitude = 1.0;
  double center = 0.5;
  double width = 1.0;
  double rate = 1.0;

  double operator()(double x, double t) const {
    switch (kind) {
      case Kind::zero:
        return 0.0;
      case Kind::one:
        return 1.0;
      case Kind::gauss_source: {
        const double d = x - center;
        return amplitude * std::exp(-(rate * t + d * d / (2.0 * width * width)));
      }
    }
    return 0.0;
  }

  static SourceField zero() { return {Kind::zero}; }
  static SourceField one() { return {Kind::one}; }
  static SourceField gauss(double center, double width, double rate, double amplitude = 1.0) {
    return {Kind::gauss_source, amplitude, center, width, rate};
  }
};

/// Initial datum catalog; `sine` is the first Dirichlet eigenfunction of (a, b).
struct InitialField {
  enum class Kind { zero, sine };
  Kind kind = Kind::sine;
  double amplitude = 1.0;

  double operator()(double x, double a, double b) const {
    if (kind == Kind::zero) return 0.0;
    return amplitude * std::sin(std::numbers::pi * (x - a) / (b - a));
  }

  static InitialField zero() { return {Kind::zero}; }
  static InitialField sine(double amplitude = 1.0) { return {Kind::sine, amplitude}; }
};

/// u_t - mu u_xx - zeta (k * u_xx) = f on (a, b) x (0, T], u = 0 on the
/// boundary, u(., 0) = u0, discretized with M elements and N steps.
struct ModelConfig {
  double a = 0.0;
  double b = 1.0;
  double T = 1.0;
  int M = 32;
  int N = 64;
  double mu = 1.0;
  double zeta = 1.0;
  KernelFamily kernel = multiscale_kernel(ExponentSpec::linear(1.0, -0.8, 1.0));
  SourceField forcing = SourceField::one();
  InitialField initial = InitialField::sine();
  Scheme scheme = Scheme::cn2;

  void validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("model: mu must be positive");
    // zeta = 0 switches the memory off (heat equation); negative is rejected.
    if (!(zeta >= 0.0)) throw std::invalid_argument("model: zeta must be >= 0");
    if (!(b > a)) throw std::invalid_argument("model: need domain a < b");
    if (!(T > 0.0)) throw std::invalid_argument("model: T must be positive");
    if (M < 2) throw std::invalid_argument("model: M must be >= 2");
    if (N < 1) throw std::invalid_argument("model: N must be >= 1");
  }
};

/// Convergence benchmark on (0, 1): mu = zeta = 1, T = 1,
/// alpha(t) = 1 - 4t/5, u0 = sin(pi x), f = 1.
inline ModelConfig convergence_benchmark() { return ModelConfig{}; }

}  // namespace abelpide
