#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace abelpide {

/// A variable exponent alpha(t) from a closed family, validated against
/// 0 < alpha_* <= alpha(t) <= 1 on its horizon [0, T] at construction.
///
///   constant   alpha(t) = c0
///   linear     alpha(t) = c0 + c1 t
///   exp_decay  alpha(t) = c0 + c1 exp(-a t)
///
/// Closed forms make the derivative and the infimum exact.
class ExponentSpec {
 public:
  enum class Kind { constant, linear, exp_decay };

  static ExponentSpec constant(double value,
                               double horizon = std::numeric_limits<double>::infinity()) {
    return ExponentSpec(Kind::constant, value, 0.0, 0.0, horizon);
  }

  static ExponentSpec linear(double c0, double c1, double horizon) {
    if (!std::isfinite(horizon)) {
      throw std::invalid_argument("ExponentSpec::linear needs a finite horizon");
    }
    return ExponentSpec(Kind::linear, c0, c1, 0.0, horizon);
  }

  static ExponentSpec exp_decay(double c0, double c1, double rate,
                                double horizon = std::numeric_limits<double>::infinity()) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
      throw std::invalid_argument("ExponentSpec::exp_decay needs a finite rate >= 0");
    }
    return ExponentSpec(Kind::exp_decay, c0, c1, rate, horizon);
  }

  Kind kind() const { return kind_; }
  double c0() const { return c0_; }
  double c1() const { return c1_; }
  double rate() const { return rate_; }
  double horizon() const { return horizon_; }

  double operator()(double t) const {
    check_time(t);
    return value_unchecked(t);
  }

  double derivative(double t) const {
    check_time(t);
    switch (kind_) {
      case Kind::constant:
        return 0.0;
      case Kind::linear:
        return c1_;
      case Kind::exp_decay:
        return -rate_ * c1_ * std::exp(-rate_ * t);
    }
    return 0.0;
  }

  double at_zero() const { return value_unchecked(0.0); }

  /// alpha_*: infimum over [0, horizon]. Both families are monotone, so it
  /// is attained at an end of the horizon (or approached at infinity).
  double infimum() const { return std::min(value_unchecked(0.0), value_at_horizon()); }

  double supremum() const { return std::max(value_unchecked(0.0), value_at_horizon()); }

  /// Limit as t -> infinity, when the family has one.
  std::optional<double> limit() const {
    switch (kind_) {
      case Kind::constant:
        return c0_;
      case Kind::linear:
        if (c1_ == 0.0) return c0_;
        return std::nullopt;
      case Kind::exp_decay:
        return rate_ > 0.0 ? c0_ : c0_ + c1_;
    }
    return std::nullopt;
  }

  /// sup over the horizon of |alpha'|.
  double derivative_bound() const {
    switch (kind_) {
      case Kind::constant:
        return 0.0;
      case Kind::linear:
        return std::abs(c1_);
      case Kind::exp_decay:
        return rate_ * std::abs(c1_);
    }
    return 0.0;
  }

 private:
  ExponentSpec(Kind kind, double c0, double c1, double rate, double horizon)
      : kind_(kind), c0_(c0), c1_(c1), rate_(rate), horizon_(horizon) {
    if (!std::isfinite(c0) || !std::isfinite(c1)) {
      throw std::invalid_argument("ExponentSpec: coefficients must be finite");
    }
    if (!(horizon > 0.0)) throw std::invalid_argument("ExponentSpec: horizon must be positive");
    const double lo = infimum();
    const double hi = supremum();
    if (!(lo > 0.0) || hi > 1.0 + 1e-15) {
      throw std::invalid_argument("ExponentSpec: need 0 < alpha(t) <= 1 on [0, T], got range [" +
                                  std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }

  double value_unchecked(double t) const {
    switch (kind_) {
      case Kind::constant:
        return c0_;
      case Kind::linear:
        return c0_ + c1_ * t;
      case Kind::exp_decay:
        return c0_ + c1_ * std::exp(-rate_ * t);
    }
    return c0_;
  }

  double value_at_horizon() const {
    if (std::isfinite(horizon_)) return value_unchecked(horizon_);
    const auto lim = limit();
    return lim ? *lim : value_unchecked(0.0);
  }

  void check_time(double t) const {
    // Allow round-off past the horizon (grid nodes computed as n * tau).
    if (!(t >= 0.0) || t > horizon_ * (1.0 + 1e-12)) {
      throw std::domain_error("ExponentSpec: t = " + std::to_string(t) +
                              " outside the horizon [0, " + std::to_string(horizon_) + "]");
    }
  }

  Kind kind_;
  double c0_;
  double c1_;
  double rate_;
  double horizon_;
};

inline double alpha_eval(const ExponentSpec& spec, double t) { return spec(t); }

inline double alpha_derivative(const ExponentSpec& spec, double t) { return spec.derivative(t); }

}  // namespace abelpide
