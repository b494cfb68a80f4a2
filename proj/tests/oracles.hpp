#pragma once

// Independent reference computations used by the tests: finite differences
// along the group action, special-function values and a plain Simpson rule.

#include <cmath>
#include <functional>
#include <vector>

#include "heis/core.hpp"
#include "heis/fields.hpp"
#include "heis/random.hpp"

namespace oracle {

using heis::Point;

/// X_i F(p) = d/ds F(p * exp(s V_i)) at s = 0, by central differences along
/// right translation: V_1 = (1, 0, 0), V_2 = (0, 1, 0), T = (0, 0, 1).
inline double frame_fd(const std::function<double(const Point&)>& F, int index, const Point& p, double h) {
  Point step{};
  if (index == 1) step = heis::make_point(h, 0.0, 0.0);
  if (index == 2) step = heis::make_point(0.0, h, 0.0);
  if (index == heis::kVertical) step = heis::make_point(0.0, 0.0, h);
  const Point fwd = heis::group_multiply(p, step);
  const Point bwd = heis::group_multiply(p, heis::group_inverse(step));
  return (F(fwd) - F(bwd)) / (2.0 * h);
}

/// Central difference of a coordinate partial.
inline double partial_fd(const std::function<double(const Point&)>& F, int slot, const Point& p, double h) {
  Point a = p, b = p;
  if (slot == 0) a.x[0] += h, b.x[0] -= h;
  if (slot == 1) a.y[0] += h, b.y[0] -= h;
  if (slot == 2) a.t += h, b.t -= h;
  return (F(a) - F(b)) / (2.0 * h);
}

/// B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
inline double beta(double a, double b) { return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b); }

/// int_0^1 (1 - tau^2)^{1/4} dtau = B(1/2, 5/4) / 2.
inline double omega() { return 0.5 * beta(0.5, 1.25); }

/// Composite Simpson on n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Uniform points in the box [-w, w]^2 x [-w, w].
inline std::vector<Point> random_points(std::size_t n, std::uint64_t seed, double w) {
  heis::SplitMix64 rng(seed);
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(-w, w);
    const double y = rng.uniform(-w, w);
    const double t = rng.uniform(-w, w);
    pts.push_back(heis::make_point(x, y, t));
  }
  return pts;
}

}  // namespace oracle
