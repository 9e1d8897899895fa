#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "abelpide/errors.hpp"

namespace abelpide {

using Vector = std::vector<double>;

/// Uniform partition of (a, b) into M elements. Unknowns are the M - 1
/// interior nodes x_j = a + j h; both ends carry homogeneous Dirichlet data.
class Mesh1D {
 public:
  Mesh1D(double a, double b, int elements) : a_(a), b_(b), elements_(elements) {
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
      throw std::invalid_argument("Mesh1D: need finite a < b");
    }
    if (elements < 2) throw std::invalid_argument("Mesh1D: need M >= 2");
  }

  double left() const { return a_; }
  double right() const { return b_; }
  int elements() const { return elements_; }
  std::size_t unknowns() const { return static_cast<std::size_t>(elements_ - 1); }
  double h() const { return (b_ - a_) / elements_; }
  /// Node j in 0..M (0 and M are the boundary nodes).
  double node(int j) const { return j == elements_ ? b_ : a_ + (b_ - a_) * j / elements_; }

  bool operator==(const Mesh1D&) const = default;

 private:
  double a_;
  double b_;
  int elements_;
};

/// Tridiagonal matrix stored by diagonals: sub[i] = A(i+1, i), super[i] = A(i, i+1).
struct TriDiagMatrix {
  Vector sub;
  Vector diag;
  Vector super;

  std::size_t size() const { return diag.size(); }

  Vector apply(std::span<const double> x) const {
    const std::size_t n = size();
    if (x.size() != n) throw LengthMismatchError("TriDiagMatrix::apply: size mismatch");
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = diag[i] * x[i];
      if (i > 0) s += sub[i - 1] * x[i - 1];
      if (i + 1 < n) s += super[i] * x[i + 1];
      y[i] = s;
    }
    return y;
  }

  double norm_inf() const {
    double m = 0.0;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      double s = std::abs(diag[i]);
      if (i > 0) s += std::abs(sub[i - 1]);
      if (i + 1 < n) s += std::abs(super[i]);
      m = std::max(m, s);
    }
    return m;
  }
};

/// c1 * X + c2 * Y for matrices of equal size.
inline TriDiagMatrix combine(double c1, const TriDiagMatrix& x, double c2, const TriDiagMatrix& y) {
  if (x.size() != y.size()) throw LengthMismatchError("combine: size mismatch");
  TriDiagMatrix r = x;
  for (std::size_t i = 0; i < r.diag.size(); ++i) r.diag[i] = c1 * x.diag[i] + c2 * y.diag[i];
  for (std::size_t i = 0; i < r.sub.size(); ++i) {
    r.sub[i] = c1 * x.sub[i] + c2 * y.sub[i];
    r.super[i] = c1 * x.super[i] + c2 * y.super[i];
  }
  return r;
}

namespace detail {

inline TriDiagMatrix constant_tridiag(std::size_t n, double d, double off) {
  return {Vector(n - 1, off), Vector(n, d), Vector(n - 1, off)};
}

}  // namespace detail

/// Consistent P1 mass matrix: 2h/3 on the diagonal, h/6 off it.
inline TriDiagMatrix assemble_mass(const Mesh1D& mesh) {
  const double h = mesh.h();
  return detail::constant_tridiag(mesh.unknowns(), 2.0 * h / 3.0, h / 6.0);
}

/// P1 stiffness matrix: 2/h on the diagonal, -1/h off it.
inline TriDiagMatrix assemble_stiffness(const Mesh1D& mesh) {
  const double h = mesh.h();
  return detail::constant_tridiag(mesh.unknowns(), 2.0 / h, -1.0 / h);
}

/// Load vector (f, phi_j) with 3-point Gauss quadrature on each element.
template <class F>
Vector assemble_load(const Mesh1D& mesh, const F& f) {
  static constexpr std::array<double, 3> gx = {-0.77459666924148337704, 0.0, 0.77459666924148337704};
  static constexpr std::array<double, 3> gw = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const double h = mesh.h();
  Vector load(mesh.unknowns(), 0.0);
  for (int e = 0; e < mesh.elements(); ++e) {
    const double xl = mesh.node(e);
    for (std::size_t q = 0; q < 3; ++q) {
      const double s = 0.5 * (gx[q] + 1.0);  // local coordinate in [0, 1]
      const double fx = f(xl + s * h) * gw[q] * 0.5 * h;
      // Element e spans nodes e and e+1; unknown index is node index - 1.
      if (e >= 1) load[static_cast<std::size_t>(e - 1)] += fx * (1.0 - s);
      if (e + 1 <= mesh.elements() - 1) load[static_cast<std::size_t>(e)] += fx * s;
    }
  }
  return load;
}

/// LU factors of a tridiagonal matrix (Thomas algorithm), reusable across
/// right-hand sides.
class ThomasFactorization {
 public:
  explicit ThomasFactorization(const TriDiagMatrix& a) : sub_(a.sub), pivot_(a.size()), upper_(a.super) {
    const std::size_t n = a.size();
    if (n == 0) throw std::invalid_argument("ThomasFactorization: empty matrix");
    if (a.sub.size() + 1 != n || a.super.size() + 1 != n) {
      throw LengthMismatchError("ThomasFactorization: diagonal sizes inconsistent");
    }
    const double scale = a.norm_inf();
    pivot_[0] = a.diag[0];
    check_pivot(0, scale);
    for (std::size_t i = 1; i < n; ++i) {
      pivot_[i] = a.diag[i] - sub_[i - 1] / pivot_[i - 1] * upper_[i - 1];
      check_pivot(i, scale);
    }
  }

  Vector solve(std::span<const double> rhs) const {
    const std::size_t n = pivot_.size();
    if (rhs.size() != n) throw LengthMismatchError("ThomasFactorization::solve: size mismatch");
    Vector x(rhs.begin(), rhs.end());
    for (std::size_t i = 1; i < n; ++i) x[i] -= sub_[i - 1] / pivot_[i - 1] * x[i - 1];
    x[n - 1] /= pivot_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - upper_[i] * x[i + 1]) / pivot_[i];
    return x;
  }

 private:
  void check_pivot(std::size_t i, double scale) const {
    if (!std::isfinite(pivot_[i]) || std::abs(pivot_[i]) <= 1e-14 * scale) {
      throw SingularMatrixError("tridiagonal solve: zero pivot at row " + std::to_string(i));
    }
  }

  Vector sub_;
  Vector pivot_;
  Vector upper_;
};

inline Vector thomas_solve(const TriDiagMatrix& a, std::span<const double> rhs) {
  return ThomasFactorization(a).solve(rhs);
}

/// Lattice norm sqrt(h sum_j v_j^2) over the interior nodes.
inline double discrete_l2_norm(const Mesh1D& mesh, std::span<const double> v) {
  if (v.size() != mesh.unknowns()) throw LengthMismatchError("discrete_l2_norm: size mismatch");
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(mesh.h() * s);
}

/// Finite element L2 norm sqrt(v^T M v) of the P1 function with nodal values v.
inline double fe_l2_norm(const Mesh1D& mesh, std::span<const double> v) {
  const auto mv = assemble_mass(mesh).apply(v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * mv[i];
  return std::sqrt(s);
}

/// |v|_{H^1} = sqrt(v^T S v).
inline double fe_h1_seminorm(const Mesh1D& mesh, std::span<const double> v) {
  const auto sv = assemble_stiffness(mesh).apply(v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * sv[i];
  return std::sqrt(s);
}

template <class G>
Vector nodal_interpolate(const Mesh1D& mesh, const G& g) {
  Vector v(mesh.unknowns());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = g(mesh.node(static_cast<int>(j + 1)));
  return v;
}

}  // namespace abelpide
