#pragma once

// Scalar and horizontal vector fields on H^n with analytic partials, the
// left-invariant frame acting on them, and the concrete fields built around a
// centre p0: the dilation vector field zeta, the function f and the gauge
// distance rho.

#include <array>
#include <functional>
#include <stdexcept>
#include <utility>

#include "heis/core.hpp"
#include "heis/errors.hpp"

namespace heis {

/// Frame direction: 1..2n select X_1..X_{2n}, kVertical selects T = d/dt.
inline constexpr int kVertical = 0;

/// Coordinate slots used by gradients and Hessians: x_1..x_n, y_1..y_n, t.
template <int N>
struct Coordinates {
  static constexpr int kDim = 2 * N + 1;
  static constexpr int x(int i) { return i; }
  static constexpr int y(int i) { return N + i; }
  static constexpr int t() { return 2 * N; }
};

template <int N>
class BasicScalarField {
 public:
  static constexpr int kDim = Coordinates<N>::kDim;
  using PointType = BasicPoint<N>;
  using Gradient = std::array<double, kDim>;
  using Hessian = std::array<std::array<double, kDim>, kDim>;
  using ValueFn = std::function<double(const PointType&)>;
  using GradientFn = std::function<Gradient(const PointType&)>;
  using HessianFn = std::function<Hessian(const PointType&)>;

  BasicScalarField(ValueFn value, GradientFn gradient, HessianFn hessian)
      : value_(std::move(value)), gradient_(std::move(gradient)), hessian_(std::move(hessian)) {}

  double value(const PointType& p) const { return value_(p); }
  double operator()(const PointType& p) const { return value_(p); }
  Gradient gradient(const PointType& p) const { return gradient_(p); }
  Hessian hessian(const PointType& p) const { return hessian_(p); }

  static BasicScalarField constant(double c) {
    return {[c](const PointType&) { return c; }, [](const PointType&) { return Gradient{}; },
            [](const PointType&) { return Hessian{}; }};
  }

  /// The coordinate function selected by a Coordinates<N> slot.
  static BasicScalarField coordinate(int slot) {
    if (slot < 0 || slot >= kDim) throw std::out_of_range("coordinate slot");
    return {[slot](const PointType& p) { return read(p, slot); },
            [slot](const PointType&) {
              Gradient g{};
              g[slot] = 1.0;
              return g;
            },
            [](const PointType&) { return Hessian{}; }};
  }

  static double read(const PointType& p, int slot) {
    if (slot < N) return p.x[slot];
    if (slot < 2 * N) return p.y[slot - N];
    return p.t;
  }

  friend BasicScalarField operator+(const BasicScalarField& a, const BasicScalarField& b) {
    return {[a, b](const PointType& p) { return a.value(p) + b.value(p); },
            [a, b](const PointType& p) {
              Gradient g = a.gradient(p);
              const Gradient gb = b.gradient(p);
              for (int i = 0; i < kDim; ++i) g[i] += gb[i];
              return g;
            },
            [a, b](const PointType& p) {
              Hessian h = a.hessian(p);
              const Hessian hb = b.hessian(p);
              for (int i = 0; i < kDim; ++i)
                for (int j = 0; j < kDim; ++j) h[i][j] += hb[i][j];
              return h;
            }};
  }

  friend BasicScalarField operator*(double s, const BasicScalarField& a) {
    return {[s, a](const PointType& p) { return s * a.value(p); },
            [s, a](const PointType& p) {
              Gradient g = a.gradient(p);
              for (double& v : g) v *= s;
              return g;
            },
            [s, a](const PointType& p) {
              Hessian h = a.hessian(p);
              for (auto& row : h)
                for (double& v : row) v *= s;
              return h;
            }};
  }

  friend BasicScalarField operator-(const BasicScalarField& a, const BasicScalarField& b) { return a + (-1.0) * b; }

  /// Product rule through second order.
  friend BasicScalarField operator*(const BasicScalarField& a, const BasicScalarField& b) {
    return {[a, b](const PointType& p) { return a.value(p) * b.value(p); },
            [a, b](const PointType& p) {
              const double va = a.value(p), vb = b.value(p);
              const Gradient ga = a.gradient(p), gb = b.gradient(p);
              Gradient g{};
              for (int i = 0; i < kDim; ++i) g[i] = ga[i] * vb + va * gb[i];
              return g;
            },
            [a, b](const PointType& p) {
              const double va = a.value(p), vb = b.value(p);
              const Gradient ga = a.gradient(p), gb = b.gradient(p);
              const Hessian ha = a.hessian(p), hb = b.hessian(p);
              Hessian h{};
              for (int i = 0; i < kDim; ++i)
                for (int j = 0; j < kDim; ++j)
                  h[i][j] = ha[i][j] * vb + ga[i] * gb[j] + ga[j] * gb[i] + va * hb[i][j];
              return h;
            }};
  }

 private:
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
};

using ScalarField = BasicScalarField<1>;

/// A horizontal vector field sum_i zeta_i X_i given by 2n scalar components.
template <int N>
struct BasicHorizontalField {
  std::array<BasicScalarField<N>, 2 * N> components;

  BasicHorizontalVector<N> at(const BasicPoint<N>& p) const {
    BasicHorizontalVector<N> v;
    for (int i = 0; i < 2 * N; ++i) v.a[i] = components[i].value(p);
    return v;
  }
};

using HorizontalField = BasicHorizontalField<1>;

namespace detail {

/// X_a = d_a + c_a(p) d_t: returns the slot of d_a and the coefficient c_a.
template <int N>
std::pair<int, double> frame_decomposition(int index, const BasicPoint<N>& p) {
  using C = Coordinates<N>;
  if (index == kVertical) return {C::t(), 0.0};
  if (index >= 1 && index <= N) return {C::x(index - 1), -0.5 * p.y[index - 1]};
  if (index > N && index <= 2 * N) return {C::y(index - N - 1), 0.5 * p.x[index - N - 1]};
  throw std::out_of_range("frame index must be 1..2n or kVertical");
}

/// d_s c_b for the frame coefficient c_b (constant in p).
template <int N>
double frame_coefficient_partial(int slot, int index) {
  using C = Coordinates<N>;
  if (index >= 1 && index <= N && slot == C::y(index - 1)) return -0.5;
  if (index > N && index <= 2 * N && slot == C::x(index - N - 1)) return 0.5;
  return 0.0;
}

}  // namespace detail

/// X_i F(p) for i in 1..2n, or T F(p) for kVertical.
template <int N>
double frame_derivative(const BasicScalarField<N>& field, int index, const BasicPoint<N>& p) {
  const auto [slot, c] = detail::frame_decomposition(index, p);
  const auto g = field.gradient(p);
  return g[slot] + c * g[Coordinates<N>::t()];
}

/// X_a X_b F(p) (X_b applied first).
template <int N>
double frame_second_derivative(const BasicScalarField<N>& field, int a, int b, const BasicPoint<N>& p) {
  const int t = Coordinates<N>::t();
  const auto [sa, ca] = detail::frame_decomposition(a, p);
  const auto [sb, cb] = detail::frame_decomposition(b, p);
  const auto g = field.gradient(p);
  const auto h = field.hessian(p);
  return h[sa][sb] + detail::frame_coefficient_partial<N>(sa, b) * g[t] + cb * h[sa][t] + ca * h[t][sb] +
         ca * cb * h[t][t];
}

/// nabla^H F = (X_1 F, ..., X_{2n} F).
template <int N>
BasicHorizontalVector<N> horizontal_gradient(const BasicScalarField<N>& field, const BasicPoint<N>& p) {
  const auto g = field.gradient(p);
  const double ft = g[Coordinates<N>::t()];
  BasicHorizontalVector<N> v;
  for (int i = 0; i < N; ++i) {
    v.a[i] = g[Coordinates<N>::x(i)] - 0.5 * p.y[i] * ft;
    v.a[N + i] = g[Coordinates<N>::y(i)] + 0.5 * p.x[i] * ft;
  }
  return v;
}

/// zeta(p) = sum (x_i - x0_i) X_i + (y_i - y0_i) X_{n+i}.
namespace detail {

template <int N>
BasicScalarField<N> zeta_component(const BasicPoint<N>& p0, int i) {
  using F = BasicScalarField<N>;
  using C = Coordinates<N>;
  if (i < N) return F::coordinate(C::x(i)) - F::constant(p0.x[i]);
  return F::coordinate(C::y(i - N)) - F::constant(p0.y[i - N]);
}

template <int N, std::size_t... I>
std::array<BasicScalarField<N>, 2 * N> zeta_components(const BasicPoint<N>& p0, std::index_sequence<I...>) {
  return {zeta_component(p0, static_cast<int>(I))...};
}

}  // namespace detail

template <int N>
BasicHorizontalField<N> zeta_field(const BasicPoint<N>& p0) {
  return {detail::zeta_components(p0, std::make_index_sequence<2 * N>{})};
}

/// f(p) = 2(t - t0) + <x, y0> - <x0, y>.
template <int N>
BasicScalarField<N> f_field(const BasicPoint<N>& p0) {
  using F = BasicScalarField<N>;
  using C = Coordinates<N>;
  return F{[p0](const BasicPoint<N>& p) {
             double v = 2.0 * (p.t - p0.t);
             for (int i = 0; i < N; ++i) v += p.x[i] * p0.y[i] - p0.x[i] * p.y[i];
             return v;
           },
           [p0](const BasicPoint<N>&) {
             typename F::Gradient g{};
             for (int i = 0; i < N; ++i) {
               g[C::x(i)] = p0.y[i];
               g[C::y(i)] = -p0.x[i];
             }
             g[C::t()] = 2.0;
             return g;
           },
           [](const BasicPoint<N>&) { return typename F::Hessian{}; }};
}

/// Z_{p0} F(p) = <zeta(p), nabla^H F(p)> + f(p) T F(p).
template <int N>
double generator_apply(const BasicPoint<N>& p0, const BasicScalarField<N>& field, const BasicPoint<N>& p) {
  const auto zeta = zeta_field(p0).at(p);
  const double f = f_field(p0).value(p);
  return dot(zeta, horizontal_gradient(field, p)) + f * frame_derivative(field, kVertical, p);
}

/// Frame derivatives of rho = d(., p0) in the closed form
///   X1 rho = rho^-3 [(x-x0)|z-z0|^2 - 2(y-y0) s],
///   X2 rho = rho^-3 [(y-y0)|z-z0|^2 + 2(x-x0) s],
///   T rho  = 4 rho^-3 s,           s = 2(t-t0) + (x y0 - x0 y).
struct RhoFrameDerivatives {
  double rho;
  double x1;
  double x2;
  double t;

  HorizontalVector horizontal() const { return make_horizontal(x1, x2); }
};

/// The gauge value [(|z-z0|^2)^2 + 4 s^2]^{1/4}; equals gauge_distance(p, p0).
double rho_value(const Point& p0, const Point& p);

/// Throws DomainError when rho(p) == 0.
RhoFrameDerivatives rho_frame_derivatives(const Point& p0, const Point& p);

/// rho as a ScalarField (Euclidean partials through second order); partials
/// throw DomainError at p = p0.
ScalarField rho_field(const Point& p0);

}  // namespace heis
