#pragma once

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "abelpide/csv.hpp"
#include "abelpide/exponent.hpp"
#include "abelpide/special.hpp"

namespace abelpide {

/// k(t) = t^(alpha(t)-1) / Gamma(alpha(t)).
struct MultiscaleKernel {
  ExponentSpec exponent;
};

/// Short-time asymptote k0(t) = t^(alpha(0) + alpha'(0) t - 1) / Gamma(alpha(0)).
struct ShortAsymptoteKernel {
  ExponentSpec exponent;
};

/// Long-time asymptote k_inf(t) = t^(alpha_inf - 1) / Gamma(alpha_inf).
struct LongAsymptoteKernel {
  ExponentSpec exponent;
  double alpha_inf;
};

/// k_E(t) = E_{beta,1}(-t^beta).
struct MittagLefflerKernel {
  double beta;
};

/// Classical Abel kernel t^(alpha-1) / Gamma(alpha).
struct ConstantAbelKernel {
  double alpha;
};

using KernelFamily = std::variant<MultiscaleKernel, ShortAsymptoteKernel, LongAsymptoteKernel,
                                  MittagLefflerKernel, ConstantAbelKernel>;

inline KernelFamily multiscale_kernel(const ExponentSpec& e) { return MultiscaleKernel{e}; }

inline KernelFamily short_asymptote_kernel(const ExponentSpec& e) { return ShortAsymptoteKernel{e}; }

inline KernelFamily long_asymptote_kernel(const ExponentSpec& e) {
  const auto lim = e.limit();
  if (!lim) throw std::invalid_argument("long_asymptote_kernel: exponent has no limit at infinity");
  return LongAsymptoteKernel{e, *lim};
}

inline KernelFamily mittag_leffler_kernel(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("mittag_leffler_kernel: need 0 < beta <= 1");
  }
  return MittagLefflerKernel{beta};
}

inline KernelFamily constant_abel_kernel(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("constant_abel_kernel: need 0 < alpha <= 1");
  }
  return ConstantAbelKernel{alpha};
}

namespace detail {

// exp((a - 1) ln t) / Gamma(a) rather than pow: no 0^0-style trouble as t -> 0
// with a -> 1.
inline double abel_power(double t, double a, double gamma_arg) {
  return std::exp((a - 1.0) * std::log(t)) / gamma_fn(gamma_arg);
}

}  // namespace detail

/// True when k(0+) is finite; k(0) is then its limit (1 for every bounded family here).
inline bool bounded_at_zero(const KernelFamily& family) {
  return std::visit(
      [](const auto& k) -> bool {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, MultiscaleKernel> || std::is_same_v<K, ShortAsymptoteKernel>) {
          return k.exponent.at_zero() == 1.0;
        } else if constexpr (std::is_same_v<K, LongAsymptoteKernel>) {
          return k.alpha_inf == 1.0;
        } else if constexpr (std::is_same_v<K, MittagLefflerKernel>) {
          return true;
        } else {
          return k.alpha == 1.0;
        }
      },
      family);
}

/// Exponent s with k(t) = O(t^(s-1)) near 0, used to absorb the singularity in
/// quadrature. 1 for bounded families; alpha_* for the multiscale kernel.
inline double singularity_exponent(const KernelFamily& family) {
  if (bounded_at_zero(family)) return 1.0;
  return std::visit(
      [](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, MultiscaleKernel>) {
          return k.exponent.infimum();
        } else if constexpr (std::is_same_v<K, ShortAsymptoteKernel>) {
          return k.exponent.at_zero();
        } else if constexpr (std::is_same_v<K, LongAsymptoteKernel>) {
          return k.alpha_inf;
        } else if constexpr (std::is_same_v<K, MittagLefflerKernel>) {
          return 1.0;
        } else {
          return k.alpha;
        }
      },
      family);
}

inline std::string kernel_name(const KernelFamily& family) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, MultiscaleKernel>) return "multiscale";
        else if constexpr (std::is_same_v<K, ShortAsymptoteKernel>) return "short_asymptote";
        else if constexpr (std::is_same_v<K, LongAsymptoteKernel>) return "long_asymptote";
        else if constexpr (std::is_same_v<K, MittagLefflerKernel>) return "mittag_leffler";
        else return "constant_abel";
      },
      family);
}

/// Evaluates the kernel at t > 0; t = 0 only for families bounded there.
inline double kernel_eval(const KernelFamily& family, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::domain_error("kernel_eval: t must be finite and >= 0, got " + std::to_string(t));
  }
  if (t == 0.0) {
    if (!bounded_at_zero(family)) {
      throw std::domain_error("kernel_eval: " + kernel_name(family) + " kernel is singular at t = 0");
    }
    return 1.0;
  }
  return std::visit(
      [t](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, MultiscaleKernel>) {
          const double a = k.exponent(t);
          return detail::abel_power(t, a, a);
        } else if constexpr (std::is_same_v<K, ShortAsymptoteKernel>) {
          const double a0 = k.exponent.at_zero();
          const double slope = k.exponent.derivative(0.0);
          return detail::abel_power(t, a0 + slope * t, a0);
        } else if constexpr (std::is_same_v<K, LongAsymptoteKernel>) {
          return detail::abel_power(t, k.alpha_inf, k.alpha_inf);
        } else if constexpr (std::is_same_v<K, MittagLefflerKernel>) {
          return mittag_leffler_e1(k.beta, std::pow(t, k.beta));
        } else {
          return detail::abel_power(t, k.alpha, k.alpha);
        }
      },
      family);
}

enum class Spacing { linear, log };

struct KernelSample {
  double t;
  double k;
};

/// Samples the kernel on a monotone grid from t_min to t_max (both included).
inline std::vector<KernelSample> kernel_table(const KernelFamily& family, double t_min,
                                              double t_max, int n_points, Spacing spacing) {
  if (!(t_min > 0.0 && t_max > t_min) || n_points < 2) {
    throw std::invalid_argument("kernel_table: need 0 < t_min < t_max and n_points >= 2");
  }
  std::vector<KernelSample> out;
  out.reserve(static_cast<std::size_t>(n_points));
  const double last = static_cast<double>(n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    double t = 0.0;
    if (i == 0) {
      t = t_min;
    } else if (i == n_points - 1) {
      t = t_max;
    } else if (spacing == Spacing::linear) {
      t = t_min + (t_max - t_min) * (i / last);
    } else {
      t = std::exp(std::log(t_min) + (std::log(t_max) - std::log(t_min)) * (i / last));
    }
    out.push_back({t, kernel_eval(family, t)});
  }
  return out;
}

inline csv::Table kernel_table_csv(const std::vector<KernelSample>& samples) {
  csv::Table table{{"t", "k"}, {}};
  for (const auto& s : samples) table.rows.push_back({s.t, s.k});
  return table;
}

}  // namespace abelpide
