#pragma once

// One-dimensional quadrature behind a small interface: double-exponential
// (tanh-sinh) for integrands with algebraic endpoint singularities, adaptive
// Gauss-Kronrod bisection as the cross-check scheme, and fixed-order
// composite Gauss-Legendre for mesh-refinement studies.

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace heis {

enum class QuadratureScheme { kTanhSinh, kAdaptiveBisection };

struct QuadratureConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  int max_depth = 30;
  QuadratureScheme scheme = QuadratureScheme::kTanhSinh;

  /// Throws std::invalid_argument unless tolerances > 0 and depth >= 1.
  void validate() const;

  QuadratureConfig with_scheme(QuadratureScheme s) const {
    QuadratureConfig c = *this;
    c.scheme = s;
    return c;
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;

  QuadratureResult& operator+=(const QuadratureResult& o) {
    value += o.value;
    error += o.error;
    return *this;
  }
};

using Integrand = std::function<double(double)>;

std::string to_string(QuadratureScheme s);

/// Integrates over [a, b] with the configured scheme.  Throws
/// QuadratureError when the error estimate misses the tolerance by more
/// than a factor of 1e3 or the result is not finite.
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg);

/// As above, split into panels at the given interior breakpoints (points
/// outside (a, b) are ignored).
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg,
                           std::span<const double> breakpoints);

/// Breakpoints graded geometrically around `center`: center, center +- width
/// * 2^k for k = -4, -3, ..., clipped to (a, b).
std::vector<double> graded_breakpoints(double a, double b, double center, double width);

/// Gauss-Legendre nodes and weights on [-1, 1] (order in {3, 5, 7, 10}).
std::vector<std::pair<double, double>> gauss_legendre_rule(int order);

/// Composite Gauss-Legendre with `panels` equal panels of `order` points
/// (order in {3, 5, 7, 10}).
double gauss_legendre_composite(const Integrand& f, double a, double b, int panels, int order = 5);

}  // namespace heis
