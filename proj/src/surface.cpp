#include "heis/surface.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "heis/errors.hpp"

namespace heis {

NormalComponents implicit_normal_components(const ImplicitSurface& s, const Point& p) {
  return {frame_derivative(s.phi, 1, p), frame_derivative(s.phi, 2, p), frame_derivative(s.phi, kVertical, p)};
}

double angle_function(const ImplicitSurface& s, const Point& p) {
  const NormalComponents n = implicit_normal_components(s, p);
  return std::hypot(n.p, n.q);
}

bool is_characteristic(const ImplicitSurface& s, const Point& p, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("is_characteristic: tol must be positive");
  const NormalComponents n = implicit_normal_components(s, p);
  const double full = std::sqrt(n.p * n.p + n.q * n.q + n.w * n.w);
  if (full == 0.0) throw DomainError("is_characteristic: degenerate defining function (grad phi = 0)");
  return std::hypot(n.p, n.q) < tol * full;
}

FrameData horizontal_gauss_map(const ImplicitSurface& s, const Point& p) {
  if (is_characteristic(s, p)) {
    throw CharacteristicPointError("horizontal Gauss map undefined at characteristic point " + to_string(p));
  }
  const NormalComponents n = implicit_normal_components(s, p);
  const double w = std::hypot(n.p, n.q);
  FrameData fd;
  fd.pbar = n.p / w;
  fd.qbar = n.q / w;
  fd.wbar = n.w / w;
  fd.w_density = w;
  fd.normal = make_horizontal(n.p, n.q);
  return fd;
}

HorizontalVector nu_perp(const FrameData& fd) { return make_horizontal(fd.qbar, -fd.pbar); }

double h_mean_curvature(const ImplicitSurface& s, const Point& p) {
  const FrameData fd = horizontal_gauss_map(s, p);
  const double P = fd.normal[0];
  const double Q = fd.normal[1];
  const double W = fd.w_density;
  const double x1p = frame_second_derivative(s.phi, 1, 1, p);
  const double x1q = frame_second_derivative(s.phi, 1, 2, p);
  const double x2p = frame_second_derivative(s.phi, 2, 1, p);
  const double x2q = frame_second_derivative(s.phi, 2, 2, p);
  return (x1p + x2q) / W - (P * (P * x1p + Q * x1q) + Q * (P * x2p + Q * x2q)) / (W * W * W);
}

// ---------------------------------------------------------------------------

GraphFunction::GraphFunction(std::string name, Interval domain, Fn g, Fn dg, Fn d2g,
                             std::optional<GraphFeature> feature)
    : name_(std::move(name)),
      domain_(domain),
      g_(std::move(g)),
      dg_(std::move(dg)),
      d2g_(std::move(d2g)),
      feature_(feature) {
  if (!(domain_.lo < domain_.hi)) throw std::invalid_argument("GraphFunction: empty interval");
}

GraphFunction GraphFunction::zero() {
  return {"zero", {}, [](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

namespace {

std::string format_params(const std::string& family, std::initializer_list<double> params) {
  std::ostringstream os;
  os.precision(17);
  os << family << ':';
  bool first = true;
  for (double v : params) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  return os.str();
}

}  // namespace

GraphFunction GraphFunction::linear(double a, double b) {
  std::optional<GraphFeature> feature;
  if (a != 0.0) feature = GraphFeature{-b / a, 1.0 / std::abs(a)};
  return {format_params("linear", {a, b}), {}, [a, b](double t) { return a * t + b; },
          [a](double) { return a; }, [](double) { return 0.0; }, feature};
}

GraphFunction GraphFunction::arctan(double k) {
  std::optional<GraphFeature> feature;
  if (k != 0.0) feature = GraphFeature{0.0, 1.0 / std::abs(k)};
  return {format_params("arctan", {k}), {}, [k](double t) { return std::atan(k * t); },
          [k](double t) { return k / (1.0 + k * k * t * t); },
          [k](double t) {
            const double d = 1.0 + k * k * t * t;
            return -2.0 * k * k * k * t / (d * d);
          },
          feature};
}

GraphFunction GraphFunction::cubic(double a) {
  std::optional<GraphFeature> feature;
  if (a != 0.0) feature = GraphFeature{0.0, std::cbrt(1.0 / std::abs(a))};
  return {format_params("cubic", {a}), {}, [a](double t) { return a * t * t * t; },
          [a](double t) { return 3.0 * a * t * t; }, [a](double t) { return 6.0 * a * t; }, feature};
}

GraphFunction GraphFunction::tanh(double k) {
  std::optional<GraphFeature> feature;
  if (k != 0.0) feature = GraphFeature{0.0, 1.0 / std::abs(k)};
  return {format_params("tanh", {k}), {}, [k](double t) { return std::tanh(k * t); },
          [k](double t) {
            const double th = std::tanh(k * t);
            return k * (1.0 - th * th);
          },
          [k](double t) {
            const double th = std::tanh(k * t);
            return -2.0 * k * k * th * (1.0 - th * th);
          },
          feature};
}

void GraphFunction::check(double t) const {
  if (!domain_.contains(t)) {
    std::ostringstream os;
    os << "graph function " << name_ << ": t = " << t << " outside [" << domain_.lo << ", " << domain_.hi << "]";
    throw DomainError(os.str());
  }
}

double GraphFunction::value(double t) const {
  check(t);
  return g_(t);
}

double GraphFunction::derivative(double t) const {
  check(t);
  return dg_(t);
}

double GraphFunction::second_derivative(double t) const {
  check(t);
  return d2g_(t);
}

GraphFunction GraphFunction::rescaled(double lambda) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("GraphFunction::rescaled: lambda must be positive");
  const double s = 1.0 / (lambda * lambda);
  std::optional<GraphFeature> feature;
  if (feature_) feature = GraphFeature{feature_->center / s, feature_->width / s};
  std::ostringstream name;
  name.precision(17);
  name << name_ << "@" << lambda;
  return {name.str(), {domain_.lo / s, domain_.hi / s}, [g = g_, s](double t) { return g(t * s); },
          [dg = dg_, s](double t) { return dg(t * s) * s; }, [d2g = d2g_, s](double t) { return d2g(t * s) * s * s; },
          feature};
}

StripCertificate validate_graphical_strip(const GraphFunction& g, int samples) {
  if (samples < 2) throw std::invalid_argument("validate_graphical_strip: samples must be >= 2");
  constexpr double kNegativeSlack = 1e-12;
  const Interval dom = g.domain();
  StripCertificate cert;
  cert.samples = samples;

  auto sample_point = [&](int k) {
    if (dom.is_finite()) return dom.lo + (dom.hi - dom.lo) * k / (samples - 1);
    // Open parameter s in (-1, 1) mapped onto the unbounded directions.
    const double s = -1.0 + 2.0 * (k + 0.5) / samples;
    const double unbounded = s / (1.0 - s * s);
    if (std::isinf(dom.lo) && std::isinf(dom.hi)) return unbounded;
    const double u = (s + 1.0) / 2.0;  // in (0, 1)
    if (std::isinf(dom.hi)) return dom.lo + u / (1.0 - u);
    return dom.hi - u / (1.0 - u);
  };

  std::optional<Interval> run;
  for (int k = 0; k < samples; ++k) {
    const double t = sample_point(k);
    const double d = g.derivative(t);
    if (d < -kNegativeSlack && cert.valid) {
      cert.valid = false;
      cert.violation_t = t;
    }
    if (d > 0.0) {
      ++cert.strict_samples;
      if (run) {
        run->lo = std::min(run->lo, t);
        run->hi = std::max(run->hi, t);
      } else {
        run = Interval{t, t};
      }
    } else if (run) {
      cert.strict_intervals.push_back(*run);
      run.reset();
    }
  }
  if (run) cert.strict_intervals.push_back(*run);
  return cert;
}

// ---------------------------------------------------------------------------

namespace {

ScalarField strip_defining_function(const GraphFunction& g) {
  using C = Coordinates<1>;
  return ScalarField{[g](const Point& p) { return p.x[0] - p.y[0] * g.value(p.t); },
                     [g](const Point& p) {
                       ScalarField::Gradient d{};
                       d[C::x(0)] = 1.0;
                       d[C::y(0)] = -g.value(p.t);
                       d[C::t()] = -p.y[0] * g.derivative(p.t);
                       return d;
                     },
                     [g](const Point& p) {
                       ScalarField::Hessian h{};
                       h[C::y(0)][C::t()] = h[C::t()][C::y(0)] = -g.derivative(p.t);
                       h[C::t()][C::t()] = -p.y[0] * g.second_derivative(p.t);
                       return h;
                     }};
}

}  // namespace

GraphicalStrip::GraphicalStrip(GraphFunction g)
    : g_(std::move(g)),
      certificate_(validate_graphical_strip(g_, kValidationSamples)),
      surface_{strip_defining_function(g_), "strip " + g_.name()} {
  if (!certificate_.valid) {
    std::ostringstream os;
    os.precision(17);
    os << "graph function " << g_.name() << " violates G' >= 0 at t = " << *certificate_.violation_t;
    throw InvalidGraphError(os.str());
  }
}

Point GraphicalStrip::chart(double y, double t) const { return make_point(y * g_.value(t), y, t); }

double GraphicalStrip::density(double y, double t) const {
  const double G = g_.value(t);
  return (1.0 + 0.5 * y * y * g_.derivative(t)) * std::sqrt(1.0 + G * G);
}

StripClosedForm GraphicalStrip::closed_form(double y, double t) const {
  const double G = g_.value(t);
  const double dG = g_.derivative(t);
  const double root = std::sqrt(1.0 + G * G);
  const double lift = 1.0 + 0.5 * y * y * dG;
  return {1.0 / root, -G / root, -y * dG / (root * lift), lift * root};
}

Point strip_chart(const GraphicalStrip& strip, double y, double t) { return strip.chart(y, t); }

double strip_perimeter_density(const GraphicalStrip& strip, double y, double t) { return strip.density(y, t); }

}  // namespace heis
