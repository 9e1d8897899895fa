#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "abelpide/quadrature.hpp"

namespace abelpide {

namespace detail {

// Lanczos approximation with 13 terms tuned for 53-bit doubles (the
// coefficients of Boost.Math's lanczos13m53). The rational form is
// sum(num[i] z^i) / sum(den[i] z^i) where den expands z(z+1)...(z+11).
inline double lanczos_sum(double z) {
  static constexpr std::array<double, 13> num = {
      23531376880.41075968857200767445163675473,
      42919803642.64909876895789904700198885093,
      35711959237.35566804944018545154716670596,
      17921034426.03720969991975575445893111267,
      6039542586.35202800506429164430729792107,
      1439720407.311721673663223072794912393972,
      248874557.8620541565114603864132294232163,
      31426415.58540019438061423162831820536287,
      2876370.628935372441225409051620849613599,
      186056.2653952234950402949897160456992822,
      8071.672002365816210638002902272250613822,
      210.8242777515793458725097339207133627117,
      2.506628274631000270164908177133837338626};
  static constexpr std::array<double, 13> den = {
      0.0,        39916800.0, 120543840.0, 150917976.0, 105258076.0, 45995730.0, 13339535.0,
      2637558.0,  357423.0,   32670.0,     1925.0,      66.0,        1.0};
  // Horner in z for z <= 1, in 1/z otherwise, so neither polynomial overflows.
  double p = 0.0;
  double q = 0.0;
  if (z <= 1.0) {
    for (int i = 12; i >= 0; --i) {
      p = p * z + num[i];
      q = q * z + den[i];
    }
  } else {
    const double r = 1.0 / z;
    for (int i = 0; i <= 12; ++i) {
      p = p * r + num[i];
      q = q * r + den[i];
    }
  }
  return p / q;
}

inline constexpr double lanczos_g = 6.024680040776729583740234375;

}  // namespace detail

/// Euler's Gamma function for x > 0.
inline double gamma_fn(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("gamma_fn: argument must be positive, got " + std::to_string(x));
  }
  if (x < std::numeric_limits<double>::epsilon()) {
    return 1.0 / x - std::numbers::egamma;
  }
  if (x > 171.7) return std::numeric_limits<double>::infinity();
  const double zgh = x + detail::lanczos_g - 0.5;
  // Split the power so zgh^(x-1/2) cannot overflow before the exp divides it.
  const double half_pow = std::pow(zgh, 0.5 * (x - 0.5));
  return detail::lanczos_sum(x) * half_pow / std::exp(zgh) * half_pow;
}

namespace detail {

inline void check_ml_domain(double beta, double x) {
  if (!(beta > 0.0 && beta <= 1.0) || !(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error("mittag_leffler_e1: need 0 < beta <= 1 and x >= 0 (beta=" +
                            std::to_string(beta) + ", x=" + std::to_string(x) + ")");
  }
}

}  // namespace detail

/// Power series sum_i (-x)^i / Gamma(beta*i + 1). Accurate while the largest
/// term stays O(1), i.e. for x up to about 2; cancellation ruins it beyond.
inline double mittag_leffler_series(double beta, double x) {
  detail::check_ml_domain(beta, x);
  double sum = 1.0;
  double power = 1.0;
  for (int i = 1; i < 2000; ++i) {
    power *= -x;
    const double g = gamma_fn(beta * i + 1.0);
    if (!std::isfinite(g)) break;
    const double term = power / g;
    sum += term;
    // Past the Gamma minimum the terms decay monotonically.
    if (beta * i > 1.0 && std::abs(term) < 1e-17 * std::abs(sum)) break;
    if (term == 0.0) break;
  }
  return sum;
}

/// Leading asymptotic expansion sum_{j>=1} (-1)^{j+1} x^{-j} / Gamma(1 - beta*j),
/// truncated at its smallest term. Only the algebraic part of E_{beta,1}(-x):
/// for beta close to 1 the dropped exponentially small terms dominate at
/// moderate x, so this is a reference for large x, not a general evaluator.
inline double mittag_leffler_asymptotic(double beta, double x, int max_terms = 60) {
  detail::check_ml_domain(beta, x);
  if (x == 0.0) throw std::domain_error("mittag_leffler_asymptotic: x must be positive");
  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  double power = 1.0;
  for (int j = 1; j <= max_terms; ++j) {
    power /= x;
    const double arg = 1.0 - beta * j;
    // 1/Gamma vanishes at non-positive integers.
    double recip = 0.0;
    if (!(arg <= 0.0 && arg == std::round(arg))) {
      recip = arg > 0.0 ? 1.0 / gamma_fn(arg)
                        : std::sin(std::numbers::pi * arg) * gamma_fn(1.0 - arg) / std::numbers::pi;
    }
    const double term = (j % 2 == 1 ? 1.0 : -1.0) * power * recip;
    if (std::abs(term) > prev && term != 0.0) break;
    if (term != 0.0) prev = std::abs(term);
    sum += term;
  }
  return sum;
}

/// E_{beta,1}(-x) from the Laplace-type integral representation valid for
/// 0 < beta < 1:
///   E(-x) = sin(pi b)/(pi b) * int_0^inf exp(-(u x)^(1/b)) / (u^2 + 2u cos(pi b) + 1) du,
/// split at u = 1, with u = v/x on the inner part and u = 1/w on the tail so
/// both integrands live on bounded intervals.
inline double mittag_leffler_integral(double beta, double x, double abs_tol = 1e-14) {
  detail::check_ml_domain(beta, x);
  if (beta == 1.0) return std::exp(-x);
  const double theta = std::numbers::pi * beta;
  const double c = std::cos(theta);
  const double prefactor = std::sin(theta) / theta;
  const double inv_beta = 1.0 / beta;
  // exp(-s) < 1e-22 past s = 50; both pieces are truncated there.
  constexpr double kCut = 50.0;
  const double tol = abs_tol / prefactor;

  double inner = 0.0;
  if (x <= 1.0) {
    inner = quad::integrate(
        [&](double u) { return std::exp(-std::pow(u * x, inv_beta)) / (u * u + 2.0 * u * c + 1.0); },
        0.0, 1.0, tol);
  } else {
    const double v_max = std::min(x, std::pow(kCut, beta));
    inner = quad::integrate(
                [&](double v) {
                  const double u = v / x;
                  return std::exp(-std::pow(v, inv_beta)) / (u * u + 2.0 * u * c + 1.0);
                },
                0.0, v_max, tol * x) /
            x;
  }

  double tail = 0.0;
  if (std::pow(x, inv_beta) < kCut) {
    tail = quad::integrate(
        [&](double w) {
          if (w <= 0.0) return 0.0;
          return std::exp(-std::pow(x / w, inv_beta)) / (1.0 + 2.0 * w * c + w * w);
        },
        0.0, 1.0, tol);
  }
  return prefactor * (inner + tail);
}

/// Series/integral switch point of mittag_leffler_e1.
inline constexpr double kMittagLefflerSwitch = 1.0;

/// E_{beta,1}(-x) for 0 < beta <= 1 and x >= 0: exp(-x) when beta = 1, the
/// power series for x <= 1, the integral representation beyond.
inline double mittag_leffler_e1(double beta, double x) {
  detail::check_ml_domain(beta, x);
  if (beta == 1.0) return std::exp(-x);
  if (x <= kMittagLefflerSwitch) return mittag_leffler_series(beta, x);
  return mittag_leffler_integral(beta, x);
}

}  // namespace abelpide
