#pragma once

// Heisenberg group H^n: points, group law, non-isotropic dilations and the
// Koranyi-Folland gauge.  Everything here is templated on n; the rest of the
// library works in H^1 through the `Point` alias.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace heis {

template <int N>
struct BasicPoint {
  static_assert(N >= 1, "H^n requires n >= 1");
  std::array<double, N> x{};
  std::array<double, N> y{};
  double t = 0.0;

  friend bool operator==(const BasicPoint&, const BasicPoint&) = default;
};

using Point = BasicPoint<1>;

constexpr Point make_point(double x, double y, double t) { return Point{{x}, {y}, t}; }

/// The group identity (0, 0, 0).
template <int N>
constexpr BasicPoint<N> origin() {
  return BasicPoint<N>{};
}

template <int N>
bool is_finite(const BasicPoint<N>& p) {
  for (int i = 0; i < N; ++i) {
    if (!std::isfinite(p.x[i]) || !std::isfinite(p.y[i])) return false;
  }
  return std::isfinite(p.t);
}

/// Coefficients on the orthonormal horizontal frame X_1..X_{2n}; entries
/// 0..n-1 multiply X_1..X_n, entries n..2n-1 multiply X_{n+1}..X_{2n}.
template <int N>
struct BasicHorizontalVector {
  std::array<double, 2 * N> a{};

  double& operator[](std::size_t i) { return a[i]; }
  double operator[](std::size_t i) const { return a[i]; }

  BasicHorizontalVector& operator+=(const BasicHorizontalVector& o) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
    return *this;
  }
  BasicHorizontalVector& operator-=(const BasicHorizontalVector& o) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
    return *this;
  }
  BasicHorizontalVector& operator*=(double s) {
    for (double& v : a) v *= s;
    return *this;
  }
  friend BasicHorizontalVector operator+(BasicHorizontalVector l, const BasicHorizontalVector& r) { return l += r; }
  friend BasicHorizontalVector operator-(BasicHorizontalVector l, const BasicHorizontalVector& r) { return l -= r; }
  friend BasicHorizontalVector operator*(double s, BasicHorizontalVector v) { return v *= s; }
  friend bool operator==(const BasicHorizontalVector&, const BasicHorizontalVector&) = default;
};

using HorizontalVector = BasicHorizontalVector<1>;

constexpr HorizontalVector make_horizontal(double a1, double a2) { return HorizontalVector{{a1, a2}}; }

/// Euclidean inner product of frame coefficients (the frame is orthonormal).
template <int N>
double dot(const BasicHorizontalVector<N>& u, const BasicHorizontalVector<N>& v) {
  double s = 0.0;
  for (int i = 0; i < 2 * N; ++i) s += u.a[i] * v.a[i];
  return s;
}

template <int N>
double norm(const BasicHorizontalVector<N>& v) {
  return std::sqrt(dot(v, v));
}

/// n and the homogeneous dimension Q = 2n + 2.
struct GroupParams {
  int n = 1;

  explicit constexpr GroupParams(int dim) : n(dim) {
    if (dim < 1) throw std::invalid_argument("GroupParams: n must be positive");
  }
  constexpr int homogeneous_dimension() const { return 2 * n + 2; }
};

template <int N>
constexpr int homogeneous_dimension() {
  return 2 * N + 2;
}

/// (x,y,t)(x',y',t') = (x+x', y+y', t+t' + (<x,y'> - <x',y>)/2).
template <int N>
BasicPoint<N> group_multiply(const BasicPoint<N>& p, const BasicPoint<N>& q) {
  BasicPoint<N> r;
  double symplectic = 0.0;
  for (int i = 0; i < N; ++i) {
    r.x[i] = p.x[i] + q.x[i];
    r.y[i] = p.y[i] + q.y[i];
    symplectic += p.x[i] * q.y[i] - q.x[i] * p.y[i];
  }
  r.t = p.t + q.t + 0.5 * symplectic;
  return r;
}

template <int N>
BasicPoint<N> group_inverse(const BasicPoint<N>& p) {
  BasicPoint<N> r;
  for (int i = 0; i < N; ++i) {
    r.x[i] = -p.x[i];
    r.y[i] = -p.y[i];
  }
  r.t = -p.t;
  return r;
}

/// delta_lambda(x, y, t) = (lambda x, lambda y, lambda^2 t); lambda must be positive.
template <int N>
BasicPoint<N> dilate(double lambda, const BasicPoint<N>& p) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilate: lambda must be positive");
  BasicPoint<N> r;
  for (int i = 0; i < N; ++i) {
    r.x[i] = lambda * p.x[i];
    r.y[i] = lambda * p.y[i];
  }
  r.t = lambda * lambda * p.t;
  return r;
}

/// |z|^2 = |x|^2 + |y|^2.
template <int N>
double horizontal_norm_squared(const BasicPoint<N>& p) {
  double s = 0.0;
  for (int i = 0; i < N; ++i) s += p.x[i] * p.x[i] + p.y[i] * p.y[i];
  return s;
}

/// Koranyi-Folland gauge N(z,t) = (|z|^4 + 16 t^2)^{1/4}.
template <int N>
double gauge_norm(const BasicPoint<N>& p) {
  const double z2 = horizontal_norm_squared(p);
  return std::sqrt(std::sqrt(z2 * z2 + 16.0 * p.t * p.t));
}

/// d(p, p0) = N(p0^{-1} p).
template <int N>
double gauge_distance(const BasicPoint<N>& p, const BasicPoint<N>& p0) {
  return gauge_norm(group_multiply(group_inverse(p0), p));
}

std::string to_string(const Point& p);

}  // namespace heis
