#pragma once

// H-perimeter of a graphical strip inside a gauge ball centred on the t-axis,
// the rescaled profile P(r) / r^{Q-1} and the constants and limits attached
// to it.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heis/calculus.hpp"
#include "heis/quadrature.hpp"
#include "heis/surface.hpp"

namespace heis {

/// Q - 1 = 3 in H^1: the exponent of r in the profile.
inline constexpr int kProfileExponent = homogeneous_dimension<1>() - 1;

/// y_max(t) = (r^4 - 16 (t - t0)^2)^{1/4} / sqrt(1 + G(t)^2), or 0 when
/// |t - t0| >= r^2/4.  Requires r > 0.
double ball_slice_bounds(const GraphicalStrip& strip, double t0, double r, double t);

/// Perimeter of the slice at height t:
///   2 [(r^4 - 16 dt^2)^{1/4} + (G'/6) (r^4 - 16 dt^2)^{3/4} / (1 + G^2)].
/// Throws DomainError when |t - t0| > r^2/4.
double inner_integral(const GraphicalStrip& strip, double t0, double r, double t);

/// int_0^1 (1 - tau^2)^{1/4} dtau.
QuadratureResult omega_constant(const QuadratureConfig& quad = {});

struct PerimeterEstimate {
  double value = 0.0;    // reduced one-dimensional formula
  double direct = 0.0;   // outer t-integral of inner_integral
  double error = 0.0;    // quadrature estimate plus the path disagreement
};

/// Relative disagreement between the two paths above which
/// perimeter_in_ball throws QuadratureError.
inline constexpr double kPathAgreementTol = 1e-8;

/// sigma_H(S cap B((0, 0, t0), r)) through
///   r^3 [omega + (r^2/12) int_{-1}^{1} G'/(1 + G^2)(t0 + r^2 tau/4) (1 - tau^2)^{3/4} dtau]
/// and, independently, by integrating inner_integral over t with the other
/// quadrature scheme.  Throws DomainError when [t0 - r^2/4, t0 + r^2/4] is
/// not inside I and std::invalid_argument for r <= 0.
PerimeterEstimate perimeter_in_ball(const GraphicalStrip& strip, double t0, double r,
                                    const QuadratureConfig& quad = {});

/// (r^2/12) int_{-1}^{1} G'/(1 + G^2)(t0 + r^2 tau/4) (1 - tau^2)^{3/4} dtau, so
/// that P(r)/r^3 = omega + large_r_correction.
QuadratureResult large_r_correction(const GraphicalStrip& strip, double t0, double r,
                                    const QuadratureConfig& quad = {});

struct ProfileRow {
  double r = 0.0;
  double perimeter = 0.0;
  double ratio = 0.0;
  double err_estimate = 0.0;
};

struct ProfileTable {
  std::vector<ProfileRow> rows;
  int q = homogeneous_dimension<1>();
  double t0 = 0.0;
  std::string g_name;
};

/// Evaluates every grid radius (rows in parallel, assembled by index).
/// Throws std::invalid_argument unless the grid is strictly increasing and
/// positive.
ProfileTable profile(const GraphicalStrip& strip, double t0, std::span<const double> r_grid,
                     const QuadratureConfig& quad = {}, unsigned workers = 1);

/// n radii between r_min and r_max, log or linearly spaced, endpoints exact.
std::vector<double> make_grid(double r_min, double r_max, int count, bool logarithmic);

struct MonotonicityCertificate {
  bool pass = true;
  std::optional<std::size_t> first_violation;  // row k with ratio[k] < ratio[k-1] - slack
  double worst_drop = 0.0;                     // max over k of ratio[k-1] - ratio[k]
  double slack = 0.0;
};

MonotonicityCertificate monotonicity_check(const ProfileTable& table, double slack);

struct LimitEstimate {
  double value = 0.0;
  double error = 0.0;
  std::vector<double> radii;
  std::vector<double> ratios;
};

/// Extrapolates P(r)/r^3 to r = 0 by Neville's scheme in h = r^2 over
/// r_k = r_0 / 2^k, k < levels.  r_0 is the largest of 0.2 and the admissible
/// radius, whichever is smaller.
LimitEstimate small_r_limit(const GraphicalStrip& strip, double t0, const QuadratureConfig& quad = {},
                            int levels = 5);

/// int lambda(r - rho) dsigma_H over S.  Requires 0 < epsilon < r.
double mollified_perimeter(const GraphicalStrip& strip, double t0, double r, const CutoffSpec& cutoff,
                           const QuadratureConfig& quad = {});

}  // namespace heis
