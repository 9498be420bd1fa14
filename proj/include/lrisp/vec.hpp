#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

#include "lrisp/errors.hpp"

namespace lrisp {

/// Largest ambient dimension supported by the fixed-capacity vector type.
inline constexpr int kMaxDim = 8;

/// Small fixed-capacity real vector in R^d. Value type, no heap traffic, so
/// it can be built freely inside quadrature integrands.
class Vec {
public:
  Vec() = default;
  explicit Vec(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) throw DomainError("vector dimension out of range");
  }
  Vec(std::initializer_list<double> xs) : Vec(static_cast<int>(xs.size())) {
    int i = 0;
    for (double x : xs) v_[i++] = x;
  }
  explicit Vec(std::span<const double> xs) : Vec(static_cast<int>(xs.size())) {
    for (int i = 0; i < dim_; ++i) v_[i] = xs[i];
  }

  static Vec unit(int dim, int axis) {
    Vec e(dim);
    e[axis] = 1.0;
    return e;
  }

  int dim() const { return dim_; }
  double& operator[](int i) { return v_[i]; }
  double operator[](int i) const { return v_[i]; }
  std::span<const double> span() const { return {v_.data(), static_cast<std::size_t>(dim_)}; }
  std::vector<double> to_vector() const { return {v_.begin(), v_.begin() + dim_}; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) v_[i] += o.v_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) v_[i] *= s;
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator-(Vec a) { return a *= -1.0; }

private:
  std::array<double, kMaxDim> v_{};
  int dim_ = 0;
};

inline double dot(const Vec& a, const Vec& b) {
  assert(a.dim() == b.dim());
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec normalized(const Vec& a) {
  const double n = norm(a);
  if (n == 0.0) throw DomainError("cannot normalize the zero vector");
  return a * (1.0 / n);
}

/// Component of `a` orthogonal to the unit vector `u`.
inline Vec reject(const Vec& a, const Vec& u) { return a - u * dot(a, u); }

/// Unit vector on S^{d-1}, d >= 3.
class Direction {
public:
  /// Normalizes `v`; rejects the zero vector and d < 3.
  explicit Direction(const Vec& v) : u_(normalized(v)) {
    if (u_.dim() < 3) throw DomainError("directions require d >= 3");
  }
  const Vec& vec() const { return u_; }
  int dim() const { return u_.dim(); }
  double operator[](int i) const { return u_[i]; }
  Direction operator-() const { return Direction(-u_); }

private:
  Vec u_;
};

/// Orthonormal basis of the hyperplane orthogonal to `omega` (d-1 vectors),
/// built by Gram-Schmidt against the coordinate axes in a fixed order.
std::vector<Vec> tangent_basis(const Direction& omega);

/// Geodesic distance on the unit sphere.
inline double geodesic_distance(const Direction& a, const Direction& b) {
  double c = dot(a.vec(), b.vec());
  c = c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
  return std::acos(c);
}

}  // namespace lrisp
