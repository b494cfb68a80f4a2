#include "heis/fields.hpp"

#include <cmath>

namespace heis {
namespace {

struct GaugeTerms {
  double dx;
  double dy;
  double q;  // |z - z0|^2
  double s;  // 2(t - t0) + x y0 - x0 y
  double a;  // q^2 + 4 s^2 = rho^4
};

GaugeTerms gauge_terms(const Point& p0, const Point& p) {
  GaugeTerms g{};
  g.dx = p.x[0] - p0.x[0];
  g.dy = p.y[0] - p0.y[0];
  g.q = g.dx * g.dx + g.dy * g.dy;
  g.s = 2.0 * (p.t - p0.t) + (p.x[0] * p0.y[0] - p0.x[0] * p.y[0]);
  g.a = g.q * g.q + 4.0 * g.s * g.s;
  return g;
}

void require_off_pole(const GaugeTerms& g) {
  if (g.a == 0.0) throw DomainError("rho: derivatives are undefined at p = p0");
}

}  // namespace

double rho_value(const Point& p0, const Point& p) {
  return std::sqrt(std::sqrt(gauge_terms(p0, p).a));
}

RhoFrameDerivatives rho_frame_derivatives(const Point& p0, const Point& p) {
  const GaugeTerms g = gauge_terms(p0, p);
  require_off_pole(g);
  const double rho = std::sqrt(std::sqrt(g.a));
  const double inv3 = 1.0 / (rho * rho * rho);
  return {rho, inv3 * (g.dx * g.q - 2.0 * g.dy * g.s), inv3 * (g.dy * g.q + 2.0 * g.dx * g.s), 4.0 * inv3 * g.s};
}

ScalarField rho_field(const Point& p0) {
  using C = Coordinates<1>;
  // rho = A^{1/4} with A = q^2 + 4 s^2; partials of A are polynomial.
  auto partials_of_a = [p0](const GaugeTerms& g) {
    ScalarField::Gradient da{};
    da[C::x(0)] = 4.0 * g.q * g.dx + 8.0 * g.s * p0.y[0];
    da[C::y(0)] = 4.0 * g.q * g.dy - 8.0 * g.s * p0.x[0];
    da[C::t()] = 16.0 * g.s;
    return da;
  };
  return ScalarField{
      [p0](const Point& p) { return rho_value(p0, p); },
      [p0, partials_of_a](const Point& p) {
        const GaugeTerms g = gauge_terms(p0, p);
        require_off_pole(g);
        const double scale = 0.25 * std::pow(g.a, -0.75);
        ScalarField::Gradient d = partials_of_a(g);
        for (double& v : d) v *= scale;
        return d;
      },
      [p0, partials_of_a](const Point& p) {
        const GaugeTerms g = gauge_terms(p0, p);
        require_off_pole(g);
        const double x0 = p0.x[0], y0 = p0.y[0];
        ScalarField::Hessian d2a{};
        d2a[C::x(0)][C::x(0)] = 4.0 * (g.q + 2.0 * g.dx * g.dx) + 8.0 * y0 * y0;
        d2a[C::y(0)][C::y(0)] = 4.0 * (g.q + 2.0 * g.dy * g.dy) + 8.0 * x0 * x0;
        d2a[C::t()][C::t()] = 32.0;
        d2a[C::x(0)][C::y(0)] = d2a[C::y(0)][C::x(0)] = 8.0 * g.dx * g.dy - 8.0 * x0 * y0;
        d2a[C::x(0)][C::t()] = d2a[C::t()][C::x(0)] = 16.0 * y0;
        d2a[C::y(0)][C::t()] = d2a[C::t()][C::y(0)] = -16.0 * x0;
        const ScalarField::Gradient da = partials_of_a(g);
        const double c1 = 0.25 * std::pow(g.a, -0.75);
        const double c2 = -0.1875 * std::pow(g.a, -1.75);
        ScalarField::Hessian h{};
        for (int i = 0; i < C::kDim; ++i)
          for (int j = 0; j < C::kDim; ++j) h[i][j] = c1 * d2a[i][j] + c2 * da[i] * da[j];
        return h;
      }};
}

}  // namespace heis
