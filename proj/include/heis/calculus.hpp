#pragma once

// Tangential horizontal calculus on non-characteristic surfaces of H^1 and
// the numerical certificates built on it: pointwise identity reports over
// seeded samples, integration-by-parts residuals on strip charts, and the
// cutoff inequality behind the monotonicity argument.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heis/core.hpp"
#include "heis/fields.hpp"
#include "heis/quadrature.hpp"
#include "heis/random.hpp"
#include "heis/surface.hpp"

namespace heis {

/// Q - 1 for H^1.
inline constexpr double kQMinusOne = homogeneous_dimension<1>() - 1;

struct TangentialGradient {
  HorizontalVector value;
};

/// v - <v, nu^H> nu^H.
HorizontalVector project_tangential(const HorizontalVector& v, const FrameData& fd);

/// nabla^{H,S} u = nabla^H u - <nabla^H u, nu^H> nu^H.
TangentialGradient tangential_gradient(const ImplicitSurface& s, const ScalarField& u, const Point& p);

/// sum_i nabla_i^{H,S} zeta_i.
double div_hs(const ImplicitSurface& s, const HorizontalField& zeta, const Point& p);

/// c^{H,S} = wbar (nu^H)^perp.
HorizontalVector c_hs(const ImplicitSurface& s, const Point& p);

/// Y u = <nabla^H u, nu^H>.
double y_derivative(const ImplicitSurface& s, const ScalarField& u, const Point& p);

/// (T - wbar Y) u.
double ty_operator(const ImplicitSurface& s, const ScalarField& u, const Point& p);

// ---------------------------------------------------------------------------
// Pointwise identities.  Each returns the signed residual at p.

/// div_{H,S} zeta + <c^{H,S}, zeta> + (T - wbar Y) f - (Q - 1).
double divergence_residual(const ImplicitSurface& s, const Point& p0, const Point& p);
/// div_{H,S} zeta - (Q - 3).
double div_zeta_residual(const ImplicitSurface& s, const Point& p0, const Point& p);
/// <c^{H,S}, zeta> + (T - wbar Y) f - 2.
double torsion_vertical_residual(const ImplicitSurface& s, const Point& p0, const Point& p);
/// <zeta, nabla^H rho> + f T rho - rho (frame derivatives of rho in closed form).
double gauge_generator_residual(const Point& p0, const Point& p);
/// <c^{H,S}, nu^H>.
double torsion_orthogonality_residual(const ImplicitSurface& s, const Point& p);

/// <zeta, nabla^{H,S} rho> + f (T - wbar Y) rho through the general surface
/// machinery.  p0 must lie on the t-axis; throws DomainError at p = p0.
double crucial_quantity(const GraphicalStrip& strip, const Point& p0, const Point& p);

/// The same quantity at the chart point (y, t) from the strip closed form
///   rho - 16 (t - t0)^2 (y^2/2) G' / (rho^3 (1 + y^2 G'/2)).
double crucial_quantity_closed_form(const GraphicalStrip& strip, double t0, double y, double t);

// ---------------------------------------------------------------------------
// Sample-based reports

struct IdentityReport {
  std::string name;
  std::size_t samples = 0;
  std::size_t skipped = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  Point worst_point{};
  double tolerance = 0.0;
  bool pass = true;
};

/// A sample: the centre p0 and the evaluation point p.
struct SamplePair {
  Point p0;
  Point p;
};

/// Evaluates |residual| at every sample (nullopt skips the sample), fanning
/// out across `workers` threads, and reduces in sample order.
IdentityReport verify_pointwise(std::string name, std::span<const SamplePair> samples,
                                const std::function<std::optional<double>(const SamplePair&)>& residual,
                                double tolerance, unsigned workers = 1);

/// A test surface together with a seeded way to draw points on it.
struct SurfaceSampler {
  std::string name;
  ImplicitSurface surface;
  std::function<Point(SplitMix64&)> draw;
  double r_scale = 1.0;
};

/// Chart points with y in [-half_width, half_width], t in t0 + [-half_width,
/// half_width] intersected with I.
SurfaceSampler strip_sampler(const GraphicalStrip& strip, double t0, double half_width = 5.0);
/// The vertical plane {x = 0}.
SurfaceSampler plane_sampler(double half_width = 5.0);
/// The cylinder {x^2 + y^2 = R^2}, which is not H-minimal (H = 1/R).
SurfaceSampler cylinder_sampler(double radius, double half_width = 5.0);

ImplicitSurface vertical_plane();
ImplicitSurface cylinder(double radius);

/// Pre-generated (p0, p) pairs: p from the sampler, p0 uniform in the box
/// [-half_width, half_width]^2 x (t0 + [-half_width, half_width]).
std::vector<SamplePair> draw_sample_pairs(const SurfaceSampler& sampler, std::size_t count, std::uint64_t seed,
                                          double t0 = 0.0, double half_width = 5.0);

/// Uniform chart samples of S cap B(p0, r) for p0 = (0, 0, t0).
std::vector<SamplePair> draw_ball_samples(const GraphicalStrip& strip, double t0, double r, std::size_t count,
                                          std::uint64_t seed);

struct PointwiseTolerances {
  double divergence = 1e-9;
  double div_zeta = 1e-10;
  double torsion_vertical = 1e-10;
  double gauge_generator = 1e-10;  // relative to max(1, rho)
  double orthogonality = 1e-14;
  double projection = 1e-12;
  double mean_curvature = 1e-9;
};

/// The divergence identity (= Q - 1), div zeta = Q - 3, the torsion/vertical
/// identity, the gauge generator identity, torsion orthogonality and
/// tangential projection on one sampler.  When
/// `minimal` is set the H-mean curvature is also required to vanish.
std::vector<IdentityReport> pointwise_identity_suite(const SurfaceSampler& sampler, std::span<const SamplePair> samples,
                                                     bool minimal, const PointwiseTolerances& tol,
                                                     unsigned workers = 1);

/// sup over the samples of |crucial_quantity| / r - 1 (clamped at 0), and the
/// agreement between the general and closed-form paths.
std::vector<IdentityReport> crucial_bound_reports(const GraphicalStrip& strip, double t0, double r,
                                                  std::span<const SamplePair> ball_samples, unsigned workers = 1);

// ---------------------------------------------------------------------------
// Integration by parts on the strip chart

struct ChartRect {
  double y_lo;
  double y_hi;
  double t_lo;
  double t_hi;
};

/// u(x, y, t) = b((y - yc)/hy) b((t - tc)/ht), b(s) = (1 - s^2)^3 on |s| < 1;
/// an ambient extension of a C^2 bump supported in the chart rectangle.
struct ChartBump {
  ChartRect support;
  ScalarField field;
};

ChartBump make_chart_bump(const ChartRect& support);

struct IbpConfig {
  int panels = 8;  // per direction, on the coarse mesh; the fine mesh doubles it
  int order = 5;
  double rel_tol = 1e-6;
};

struct IbpReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 0.0;  // L1 norm of both integrands
  double residual = 0.0;         // |lhs - rhs| on the fine mesh
  double coarse_residual = 0.0;  // |lhs - rhs| on the coarse mesh
  double relative_residual = 0.0;
  bool refinement_ok = false;  // residual <= coarse/2 + 1e-12 max(1, scale)
  bool pass = false;
  double tolerance = 0.0;

  IdentityReport as_identity_report() const;
};

/// int nabla_i^{H,S} u dsigma_H = int u (H nu_i - c_i) dsigma_H, i in {1, 2}.
/// Throws DomainError when the support reaches the edge of I.
IbpReport verify_horizontal_ibp(const GraphicalStrip& strip, const ScalarField& u, const ChartRect& support, int i,
                                const IbpConfig& cfg = {});

/// int f (T - wbar Y) g = -int g (T - wbar Y) f + int f g wbar H, g supported
/// in `support`.
IbpReport verify_vertical_ibp(const GraphicalStrip& strip, const ScalarField& f, const ScalarField& g,
                              const ChartRect& support, const IbpConfig& cfg = {});

// ---------------------------------------------------------------------------
// Cutoff machinery

/// lambda(s) = 0 for s <= 0, 1 for s >= eps, quintic smoothstep in between.
class CutoffSpec {
 public:
  explicit CutoffSpec(double epsilon);

  double epsilon() const { return epsilon_; }
  double lambda(double s) const;
  double lambda_prime(double s) const;

 private:
  double epsilon_;
};

/// Chart integrals over S cap B(p0, r), p0 = (0, 0, t0).
struct CutoffIntegrals {
  double lambda_integral = 0.0;  // int lambda(r - rho) dsigma_H
  double flux_integral = 0.0;    // int lambda'(r - rho) Phi dsigma_H, Phi the crucial quantity
  double flux_abs_integral = 0.0;  // int lambda'(r - rho) |Phi| dsigma_H
  double error = 0.0;
};

/// Computes the integrals by nested adaptive quadrature in the chart.  With
/// `with_flux` false only lambda_integral is evaluated.
CutoffIntegrals cutoff_integrals(const GraphicalStrip& strip, double t0, double r, const CutoffSpec& cutoff,
                                 const QuadratureConfig& quad, bool with_flux = true);

struct MinsurfResult {
  double lhs = 0.0;    // (Q-1) int lambda - int lambda' Phi
  double scale = 0.0;  // (Q-1) int lambda + int lambda' |Phi|
  double perimeter_term = 0.0;
  double flux_term = 0.0;
  double error = 0.0;
};

/// Requires r > 0 and epsilon < r (std::invalid_argument otherwise); throws
/// DomainError if the ball leaves the strip interval.
MinsurfResult verify_minsurf_inequality(const GraphicalStrip& strip, double t0, double r, const CutoffSpec& cutoff,
                                        const QuadratureConfig& quad);

}  // namespace heis
