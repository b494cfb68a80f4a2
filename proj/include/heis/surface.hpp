#pragma once

// Hypersurfaces of H^1: implicit level sets {phi = 0} and graphical strips
// {x = y G(t)}.  All normal quantities use the non-unit components
// (p, q, w) = (X1 phi, X2 phi, T phi); the horizontal perimeter is only ever
// evaluated through the strip chart density.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "heis/core.hpp"
#include "heis/fields.hpp"

namespace heis {

struct ImplicitSurface {
  ScalarField phi;
  std::string name = "implicit";
};

struct NormalComponents {
  double p;  // X1 phi
  double q;  // X2 phi
  double w;  // T phi
};

/// Horizontal normal data at a non-characteristic point.
struct FrameData {
  double pbar = 0.0;
  double qbar = 0.0;
  double wbar = 0.0;       // T phi / |nabla_H phi|
  double w_density = 0.0;  // |nabla_H phi|, the perimeter density in the strip chart
  HorizontalVector normal;  // N^H = (p, q), not normalised

  HorizontalVector unit_normal() const { return make_horizontal(pbar, qbar); }
};

inline constexpr double kDefaultCharacteristicTol = 1e-10;

NormalComponents implicit_normal_components(const ImplicitSurface& s, const Point& p);

/// |nabla_H phi| = sqrt(p^2 + q^2).
double angle_function(const ImplicitSurface& s, const Point& p);

/// True iff |nabla_H phi| < tol |nabla phi|.  Throws DomainError when
/// nabla phi vanishes and std::invalid_argument for tol <= 0.
bool is_characteristic(const ImplicitSurface& s, const Point& p, double tol = kDefaultCharacteristicTol);

/// Throws CharacteristicPointError at characteristic points.
FrameData horizontal_gauss_map(const ImplicitSurface& s, const Point& p);

/// (nu^H)^perp = qbar X1 - pbar X2.
HorizontalVector nu_perp(const FrameData& fd);

/// Horizontal divergence X1(pbar) + X2(qbar) of the Gauss map extended by
/// the level sets of phi.
double h_mean_curvature(const ImplicitSurface& s, const Point& p);

// ---------------------------------------------------------------------------
// Graphical strips

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double t) const { return t >= lo && t <= hi; }
  bool is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }
};

/// Where G'/(1 + G^2) varies fastest, as a hint for quadrature panelling.
struct GraphFeature {
  double center;
  double width;
};

/// G on an interval I with G, G', G''.
class GraphFunction {
 public:
  using Fn = std::function<double(double)>;

  GraphFunction(std::string name, Interval domain, Fn g, Fn dg, Fn d2g,
                std::optional<GraphFeature> feature = std::nullopt);

  static GraphFunction zero();
  static GraphFunction linear(double a, double b);
  static GraphFunction arctan(double k);
  static GraphFunction cubic(double a);
  static GraphFunction tanh(double k);

  /// Throw DomainError outside the interval.
  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  const std::string& name() const { return name_; }
  const Interval& domain() const { return domain_; }
  const std::optional<GraphFeature>& feature() const { return feature_; }

  /// t -> G(t / lambda^2), the graph function of the dilated strip.
  GraphFunction rescaled(double lambda) const;

 private:
  void check(double t) const;

  std::string name_;
  Interval domain_;
  Fn g_;
  Fn dg_;
  Fn d2g_;
  std::optional<GraphFeature> feature_;
};

struct StripCertificate {
  bool valid = true;
  std::optional<double> violation_t;  // first sample with G' < -1e-12
  std::vector<Interval> strict_intervals;  // maximal sample runs with G' > 0
  int samples = 0;
  int strict_samples = 0;

  bool strict_everywhere() const { return valid && strict_samples == samples; }
  bool strict_somewhere() const { return strict_samples > 0; }
};

/// Dense-grid check of G' >= -1e-12.  Infinite ends are reached through
/// t = s / (1 - s^2), s in (-1, 1).  Requires samples >= 2.
StripCertificate validate_graphical_strip(const GraphFunction& g, int samples);

/// Quantities of the strip {x = y G(t)} evaluated through their closed forms.
struct StripClosedForm {
  double pbar;
  double qbar;
  double wbar;
  double w_density;
};

class GraphicalStrip {
 public:
  static constexpr int kValidationSamples = 4097;

  /// Validates g; throws InvalidGraphError on a G' >= 0 violation.
  explicit GraphicalStrip(GraphFunction g);

  const GraphFunction& graph() const { return g_; }
  const StripCertificate& certificate() const { return certificate_; }

  /// phi = x - y G(t).
  const ScalarField& phi() const { return surface_.phi; }
  const ImplicitSurface& surface() const { return surface_; }

  /// (y, t) -> (y G(t), y, t).  Throws DomainError for t outside I.
  Point chart(double y, double t) const;

  /// (1 + y^2 G'/2) sqrt(1 + G^2), the perimeter density with respect to dy dt.
  double density(double y, double t) const;

  StripClosedForm closed_form(double y, double t) const;

 private:
  GraphFunction g_;
  StripCertificate certificate_;
  ImplicitSurface surface_;
};

Point strip_chart(const GraphicalStrip& strip, double y, double t);
double strip_perimeter_density(const GraphicalStrip& strip, double y, double t);

}  // namespace heis
