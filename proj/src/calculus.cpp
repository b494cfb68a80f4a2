#include "heis/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "heis/errors.hpp"
#include "heis/parallel.hpp"

namespace heis {

HorizontalVector project_tangential(const HorizontalVector& v, const FrameData& fd) {
  const HorizontalVector nu = fd.unit_normal();
  return v - dot(v, nu) * nu;
}

TangentialGradient tangential_gradient(const ImplicitSurface& s, const ScalarField& u, const Point& p) {
  return {project_tangential(horizontal_gradient(u, p), horizontal_gauss_map(s, p))};
}

namespace {

double div_hs(const FrameData& fd, const HorizontalField& zeta, const Point& p) {
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) sum += project_tangential(horizontal_gradient(zeta.components[i], p), fd)[i];
  return sum;
}

HorizontalVector c_hs(const FrameData& fd) { return fd.wbar * nu_perp(fd); }

double ty_operator(const FrameData& fd, const ScalarField& u, const Point& p) {
  return frame_derivative(u, kVertical, p) - fd.wbar * dot(horizontal_gradient(u, p), fd.unit_normal());
}

}  // namespace

double div_hs(const ImplicitSurface& s, const HorizontalField& zeta, const Point& p) {
  return div_hs(horizontal_gauss_map(s, p), zeta, p);
}

HorizontalVector c_hs(const ImplicitSurface& s, const Point& p) { return c_hs(horizontal_gauss_map(s, p)); }

double y_derivative(const ImplicitSurface& s, const ScalarField& u, const Point& p) {
  return dot(horizontal_gradient(u, p), horizontal_gauss_map(s, p).unit_normal());
}

double ty_operator(const ImplicitSurface& s, const ScalarField& u, const Point& p) {
  return ty_operator(horizontal_gauss_map(s, p), u, p);
}

// ---------------------------------------------------------------------------

double div_zeta_residual(const ImplicitSurface& s, const Point& p0, const Point& p) {
  return div_hs(s, zeta_field(p0), p) - (kQMinusOne - 2.0);
}

double torsion_vertical_residual(const ImplicitSurface& s, const Point& p0, const Point& p) {
  const FrameData fd = horizontal_gauss_map(s, p);
  return dot(c_hs(fd), zeta_field(p0).at(p)) + ty_operator(fd, f_field(p0), p) - 2.0;
}

double divergence_residual(const ImplicitSurface& s, const Point& p0, const Point& p) {
  const FrameData fd = horizontal_gauss_map(s, p);
  const HorizontalField zeta = zeta_field(p0);
  return div_hs(fd, zeta, p) + dot(c_hs(fd), zeta.at(p)) + ty_operator(fd, f_field(p0), p) - kQMinusOne;
}

double gauge_generator_residual(const Point& p0, const Point& p) {
  const RhoFrameDerivatives d = rho_frame_derivatives(p0, p);
  return dot(zeta_field(p0).at(p), d.horizontal()) + f_field(p0).value(p) * d.t - d.rho;
}

double torsion_orthogonality_residual(const ImplicitSurface& s, const Point& p) {
  const FrameData fd = horizontal_gauss_map(s, p);
  return dot(c_hs(fd), fd.unit_normal());
}

namespace {

void require_on_axis(const Point& p0) {
  if (p0.x[0] != 0.0 || p0.y[0] != 0.0) {
    throw DomainError("centre " + to_string(p0) + " is off the t-axis; only p0 = (0, 0, t0) is supported");
  }
}

/// Fields around a fixed on-axis centre, built once per batch.
class CrucialEvaluator {
 public:
  CrucialEvaluator(const GraphicalStrip& strip, const Point& p0)
      : strip_(strip), p0_(p0), rho_(rho_field(p0)), zeta_(zeta_field(p0)), f_(f_field(p0)) {
    require_on_axis(p0);
  }

  double operator()(const Point& p) const {
    const FrameData fd = horizontal_gauss_map(strip_.surface(), p);
    const HorizontalVector grad_rho = horizontal_gradient(rho_, p);
    const HorizontalVector tangential = project_tangential(grad_rho, fd);
    const double y_rho = dot(grad_rho, fd.unit_normal());
    const double t_rho = frame_derivative(rho_, kVertical, p);
    return dot(zeta_.at(p), tangential) + f_.value(p) * (t_rho - fd.wbar * y_rho);
  }

 private:
  const GraphicalStrip& strip_;
  Point p0_;
  ScalarField rho_;
  HorizontalField zeta_;
  ScalarField f_;
};

}  // namespace

double crucial_quantity(const GraphicalStrip& strip, const Point& p0, const Point& p) {
  return CrucialEvaluator(strip, p0)(p);
}

double crucial_quantity_closed_form(const GraphicalStrip& strip, double t0, double y, double t) {
  const GraphFunction& g = strip.graph();
  const double G = g.value(t);
  const double dG = g.derivative(t);
  const double dt = t - t0;
  const double a = y * y * (1.0 + G * G);
  const double rho = std::sqrt(std::sqrt(a * a + 16.0 * dt * dt));
  if (rho == 0.0) throw DomainError("crucial_quantity_closed_form: p = p0");
  const double half_y2g = 0.5 * y * y * dG;
  return rho - 16.0 * dt * dt * half_y2g / (rho * rho * rho * (1.0 + half_y2g));
}

// ---------------------------------------------------------------------------

IdentityReport verify_pointwise(std::string name, std::span<const SamplePair> samples,
                                const std::function<std::optional<double>(const SamplePair&)>& residual,
                                double tolerance, unsigned workers) {
  std::vector<std::optional<double>> values(samples.size());
  parallel_for(samples.size(), workers, [&](std::size_t i) {
    const auto r = residual(samples[i]);
    values[i] = r ? std::optional<double>(std::abs(*r)) : std::nullopt;
  });
  IdentityReport report;
  report.name = std::move(name);
  report.tolerance = tolerance;
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) {
      ++report.skipped;
      continue;
    }
    ++report.samples;
    const double v = *values[i];
    sum += v;
    if (v > report.max_residual || std::isnan(v)) {
      report.max_residual = v;
      report.worst_point = samples[i].p;
    }
  }
  if (report.samples > 0) report.mean_residual = sum / static_cast<double>(report.samples);
  report.pass = report.samples > 0 && report.max_residual <= tolerance;
  return report;
}

ImplicitSurface vertical_plane() { return {ScalarField::coordinate(Coordinates<1>::x(0)), "plane x=0"}; }

ImplicitSurface cylinder(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("cylinder: radius must be positive");
  const ScalarField x = ScalarField::coordinate(Coordinates<1>::x(0));
  const ScalarField y = ScalarField::coordinate(Coordinates<1>::y(0));
  std::ostringstream name;
  name << "cylinder R=" << radius;
  return {x * x + y * y - ScalarField::constant(radius * radius), name.str()};
}

SurfaceSampler strip_sampler(const GraphicalStrip& strip, double t0, double half_width) {
  const Interval dom = strip.graph().domain();
  const double lo = std::max(dom.lo, t0 - half_width);
  const double hi = std::min(dom.hi, t0 + half_width);
  if (!(lo < hi)) throw DomainError("strip_sampler: empty sampling window");
  return {"strip " + strip.graph().name(), strip.surface(),
          [strip, lo, hi, half_width](SplitMix64& rng) {
            const double y = rng.uniform(-half_width, half_width);
            const double t = rng.uniform(lo, hi);
            return strip.chart(y, t);
          },
          half_width};
}

SurfaceSampler plane_sampler(double half_width) {
  return {"plane x=0", vertical_plane(),
          [half_width](SplitMix64& rng) {
            const double y = rng.uniform(-half_width, half_width);
            const double t = rng.uniform(-half_width, half_width);
            return make_point(0.0, y, t);
          },
          half_width};
}

SurfaceSampler cylinder_sampler(double radius, double half_width) {
  ImplicitSurface s = cylinder(radius);
  std::string name = s.name;
  return {name, std::move(s),
          [radius, half_width](SplitMix64& rng) {
            const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double t = rng.uniform(-half_width, half_width);
            return make_point(radius * std::cos(theta), radius * std::sin(theta), t);
          },
          half_width};
}

std::vector<SamplePair> draw_sample_pairs(const SurfaceSampler& sampler, std::size_t count, std::uint64_t seed,
                                          double t0, double half_width) {
  SplitMix64 rng(seed);
  std::vector<SamplePair> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Point p = sampler.draw(rng);
    const double x0 = rng.uniform(-half_width, half_width);
    const double y0 = rng.uniform(-half_width, half_width);
    const double s0 = rng.uniform(t0 - half_width, t0 + half_width);
    out.push_back({make_point(x0, y0, s0), p});
  }
  return out;
}

std::vector<SamplePair> draw_ball_samples(const GraphicalStrip& strip, double t0, double r, std::size_t count,
                                          std::uint64_t seed) {
  if (!(r > 0.0)) throw std::invalid_argument("draw_ball_samples: r must be positive");
  const Interval dom = strip.graph().domain();
  const double half = 0.25 * r * r;
  if (t0 - half < dom.lo || t0 + half > dom.hi) throw DomainError("draw_ball_samples: ball leaves the strip interval");
  SplitMix64 rng(seed);
  std::vector<SamplePair> out;
  out.reserve(count);
  const Point p0 = make_point(0.0, 0.0, t0);
  for (std::size_t i = 0; i < count; ++i) {
    const double dt = half * rng.uniform(-1.0, 1.0);
    const double t = t0 + dt;
    const double G = strip.graph().value(t);
    const double ymax = std::sqrt(std::sqrt(std::max(0.0, std::pow(r, 4) - 16.0 * dt * dt))) / std::sqrt(1.0 + G * G);
    const double y = ymax * rng.uniform(-1.0, 1.0);
    out.push_back({p0, strip.chart(y, t)});
  }
  return out;
}

namespace {

template <class Fn>
std::function<std::optional<double>(const SamplePair&)> skip_characteristic(Fn fn) {
  return [fn](const SamplePair& s) -> std::optional<double> {
    try {
      return fn(s);
    } catch (const CharacteristicPointError&) {
      return std::nullopt;
    }
  };
}

}  // namespace

std::vector<IdentityReport> pointwise_identity_suite(const SurfaceSampler& sampler, std::span<const SamplePair> samples,
                                                     bool minimal, const PointwiseTolerances& tol, unsigned workers) {
  const ImplicitSurface& s = sampler.surface;
  const double rho_floor = 1e-6 * sampler.r_scale;
  const ScalarField x = ScalarField::coordinate(Coordinates<1>::x(0));
  const ScalarField y = ScalarField::coordinate(Coordinates<1>::y(0));
  const ScalarField t = ScalarField::coordinate(Coordinates<1>::t());
  const ScalarField probe = x * t + y * y - 3.0 * (x * y);

  std::vector<IdentityReport> out;
  out.push_back(verify_pointwise(
      "divergence", samples, skip_characteristic([&](const SamplePair& q) { return divergence_residual(s, q.p0, q.p); }),
      tol.divergence, workers));
  out.push_back(verify_pointwise(
      "div_zeta", samples, skip_characteristic([&](const SamplePair& q) { return div_zeta_residual(s, q.p0, q.p); }),
      tol.div_zeta, workers));
  out.push_back(verify_pointwise(
      "torsion_vertical", samples,
      skip_characteristic([&](const SamplePair& q) { return torsion_vertical_residual(s, q.p0, q.p); }),
      tol.torsion_vertical, workers));
  out.push_back(verify_pointwise(
      "gauge_generator", samples,
      [&](const SamplePair& q) -> std::optional<double> {
        const double rho = rho_value(q.p0, q.p);
        if (rho < rho_floor) return std::nullopt;
        return gauge_generator_residual(q.p0, q.p) / std::max(1.0, rho);
      },
      tol.gauge_generator, workers));
  out.push_back(verify_pointwise(
      "torsion_orthogonality", samples,
      skip_characteristic([&](const SamplePair& q) { return torsion_orthogonality_residual(s, q.p); }),
      tol.orthogonality, workers));
  out.push_back(verify_pointwise("tangential_projection", samples, skip_characteristic([&](const SamplePair& q) {
                                   const FrameData fd = horizontal_gauss_map(s, q.p);
                                   const HorizontalVector v = horizontal_gradient(probe, q.p);
                                   return dot(project_tangential(v, fd), fd.unit_normal()) / std::max(1.0, norm(v));
                                 }),
                                 tol.projection, workers));
  if (minimal) {
    out.push_back(verify_pointwise(
        "mean_curvature", samples, skip_characteristic([&](const SamplePair& q) { return h_mean_curvature(s, q.p); }),
        tol.mean_curvature, workers));
  }
  for (IdentityReport& r : out) r.name = sampler.name + "/" + r.name;
  return out;
}

std::vector<IdentityReport> crucial_bound_reports(const GraphicalStrip& strip, double t0, double r,
                                                  std::span<const SamplePair> ball_samples, unsigned workers) {
  const Point p0 = make_point(0.0, 0.0, t0);
  const CrucialEvaluator crucial(strip, p0);
  const double rho_floor = 1e-6 * r;
  std::vector<double> general(ball_samples.size());
  std::vector<double> closed(ball_samples.size());
  std::vector<double> rho(ball_samples.size());
  parallel_for(ball_samples.size(), workers, [&](std::size_t i) {
    const Point& p = ball_samples[i].p;
    rho[i] = rho_value(p0, p);
    if (rho[i] < rho_floor) return;
    general[i] = crucial(p);
    closed[i] = crucial_quantity_closed_form(strip, t0, p.y[0], p.t);
  });
  auto skip_pole = [&](auto body) {
    return [&, body](const SamplePair& q) -> std::optional<double> {
      const std::size_t i = static_cast<std::size_t>(&q - ball_samples.data());
      if (rho[i] < rho_floor) return std::nullopt;
      return body(i);
    };
  };
  std::ostringstream suffix;
  suffix << " r=" << r;
  std::vector<IdentityReport> out;
  out.push_back(verify_pointwise("crucial_bound" + suffix.str(), ball_samples,
                                 skip_pole([&](std::size_t i) { return std::max(0.0, std::abs(general[i]) / r - 1.0); }),
                                 1e-10, 1));
  out.push_back(verify_pointwise(
      "crucial_closed_form" + suffix.str(), ball_samples,
      skip_pole([&](std::size_t i) { return (general[i] - closed[i]) / std::max(1.0, rho[i]); }), 1e-10, 1));
  out.push_back(verify_pointwise("crucial_range" + suffix.str(), ball_samples, skip_pole([&](std::size_t i) {
                                   return std::max({0.0, -general[i], general[i] - rho[i]}) / std::max(1.0, rho[i]);
                                 }),
                                 1e-12, 1));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double u = 1.0 - s * s;
  return u * u * u;
}

double bump_d1(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double u = 1.0 - s * s;
  return -6.0 * s * u * u;
}

double bump_d2(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double u = 1.0 - s * s;
  return -6.0 * u * u + 24.0 * s * s * u;
}

void check_support(const GraphicalStrip& strip, const ChartRect& r) {
  if (!(r.y_lo < r.y_hi) || !(r.t_lo < r.t_hi)) throw std::invalid_argument("chart rectangle is empty");
  const Interval dom = strip.graph().domain();
  if (!(r.t_lo > dom.lo) || !(r.t_hi < dom.hi)) {
    throw DomainError("test function support touches the boundary of the strip interval");
  }
}

/// Tensor Gauss-Legendre over the chart rectangle with panels x panels cells;
/// `integrand` writes K values for the chart point (y, t).
template <std::size_t K, class Fn>
std::array<double, K> chart_integral(const ChartRect& r, int panels, int order, Fn&& integrand) {
  const auto rule = gauss_legendre_rule(order);
  const double hy = (r.y_hi - r.y_lo) / panels;
  const double ht = (r.t_hi - r.t_lo) / panels;
  std::array<double, K> total{};
  for (int a = 0; a < panels; ++a) {
    const double tc = r.t_lo + (a + 0.5) * ht;
    for (const auto& [nt, wt] : rule) {
      const double t = tc + 0.5 * ht * nt;
      for (int b = 0; b < panels; ++b) {
        const double yc = r.y_lo + (b + 0.5) * hy;
        for (const auto& [ny, wy] : rule) {
          const double y = yc + 0.5 * hy * ny;
          const double w = 0.25 * hy * ht * wt * wy;
          std::array<double, K> v{};
          integrand(y, t, v);
          for (std::size_t k = 0; k < K; ++k) total[k] += w * v[k];
        }
      }
    }
  }
  return total;
}

/// Integrates lhs, rhs, |lhs|, |rhs| on the coarse and fine meshes.
template <class Fn>
IbpReport ibp_report(std::string name, const ChartRect& support, const IbpConfig& cfg, Fn&& integrand) {
  if (cfg.panels < 1) throw std::invalid_argument("IbpConfig: panels must be >= 1");
  const auto coarse = chart_integral<4>(support, cfg.panels, cfg.order, integrand);
  const auto fine = chart_integral<4>(support, 2 * cfg.panels, cfg.order, integrand);
  IbpReport rep;
  rep.name = std::move(name);
  rep.lhs = fine[0];
  rep.rhs = fine[1];
  rep.scale = fine[2] + fine[3];
  rep.residual = std::abs(fine[0] - fine[1]);
  rep.coarse_residual = std::abs(coarse[0] - coarse[1]);
  rep.relative_residual = rep.scale > 0.0 ? rep.residual / rep.scale : rep.residual;
  rep.refinement_ok = rep.residual <= 0.5 * rep.coarse_residual + 1e-12 * std::max(1.0, rep.scale);
  rep.tolerance = cfg.rel_tol;
  rep.pass = rep.relative_residual < cfg.rel_tol && rep.refinement_ok;
  return rep;
}

}  // namespace

IdentityReport IbpReport::as_identity_report() const {
  IdentityReport r;
  r.name = name;
  r.samples = 1;
  r.max_residual = relative_residual;
  r.mean_residual = relative_residual;
  r.tolerance = tolerance;
  r.pass = pass;
  return r;
}

ChartBump make_chart_bump(const ChartRect& support) {
  using C = Coordinates<1>;
  const double yc = 0.5 * (support.y_lo + support.y_hi), hy = 0.5 * (support.y_hi - support.y_lo);
  const double tc = 0.5 * (support.t_lo + support.t_hi), ht = 0.5 * (support.t_hi - support.t_lo);
  if (!(hy > 0.0) || !(ht > 0.0)) throw std::invalid_argument("make_chart_bump: empty rectangle");
  ScalarField field{[=](const Point& p) { return bump((p.y[0] - yc) / hy) * bump((p.t - tc) / ht); },
                    [=](const Point& p) {
                      const double sy = (p.y[0] - yc) / hy, st = (p.t - tc) / ht;
                      ScalarField::Gradient g{};
                      g[C::y(0)] = bump_d1(sy) / hy * bump(st);
                      g[C::t()] = bump(sy) * bump_d1(st) / ht;
                      return g;
                    },
                    [=](const Point& p) {
                      const double sy = (p.y[0] - yc) / hy, st = (p.t - tc) / ht;
                      ScalarField::Hessian h{};
                      h[C::y(0)][C::y(0)] = bump_d2(sy) / (hy * hy) * bump(st);
                      h[C::y(0)][C::t()] = h[C::t()][C::y(0)] = bump_d1(sy) * bump_d1(st) / (hy * ht);
                      h[C::t()][C::t()] = bump(sy) * bump_d2(st) / (ht * ht);
                      return h;
                    }};
  return {support, std::move(field)};
}

IbpReport verify_horizontal_ibp(const GraphicalStrip& strip, const ScalarField& u, const ChartRect& support, int i,
                                const IbpConfig& cfg) {
  if (i != 1 && i != 2) throw std::invalid_argument("verify_horizontal_ibp: i must be 1 or 2");
  check_support(strip, support);
  const ImplicitSurface& s = strip.surface();
  const int k = i - 1;
  return ibp_report("horizontal_ibp_" + std::to_string(i) + " " + strip.graph().name(), support, cfg,
                    [&](double y, double t, std::array<double, 4>& v) {
                      const Point p = strip.chart(y, t);
                      const double w = strip.density(y, t);
                      const FrameData fd = horizontal_gauss_map(s, p);
                      const double lhs = project_tangential(horizontal_gradient(u, p), fd)[k];
                      const double H = h_mean_curvature(s, p);
                      const double rhs = u.value(p) * (H * fd.unit_normal()[k] - c_hs(fd)[k]);
                      v = {lhs * w, rhs * w, std::abs(lhs) * w, std::abs(rhs) * w};
                    });
}

IbpReport verify_vertical_ibp(const GraphicalStrip& strip, const ScalarField& f, const ScalarField& g,
                              const ChartRect& support, const IbpConfig& cfg) {
  check_support(strip, support);
  const ImplicitSurface& s = strip.surface();
  return ibp_report("vertical_ibp " + strip.graph().name(), support, cfg,
                    [&](double y, double t, std::array<double, 4>& v) {
                      const Point p = strip.chart(y, t);
                      const double w = strip.density(y, t);
                      const FrameData fd = horizontal_gauss_map(s, p);
                      const double fv = f.value(p), gv = g.value(p);
                      const double lhs = fv * ty_operator(fd, g, p);
                      const double rhs = -gv * ty_operator(fd, f, p) + fv * gv * fd.wbar * h_mean_curvature(s, p);
                      v = {lhs * w, rhs * w, std::abs(lhs) * w, std::abs(rhs) * w};
                    });
}

// ---------------------------------------------------------------------------

CutoffSpec::CutoffSpec(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("CutoffSpec: epsilon must be positive");
}

double CutoffSpec::lambda(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= epsilon_) return 1.0;
  const double u = s / epsilon_;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double CutoffSpec::lambda_prime(double s) const {
  if (s <= 0.0 || s >= epsilon_) return 0.0;
  const double u = s / epsilon_;
  const double v = 1.0 - u;
  return 30.0 * u * u * v * v / epsilon_;
}

namespace {

double slice_halfwidth(const GraphFunction& g, double t, double dt, double radius) {
  const double r4 = std::pow(radius, 4);
  const double rem = r4 - 16.0 * dt * dt;
  if (rem <= 0.0) return 0.0;
  const double G = g.value(t);
  return std::sqrt(std::sqrt(rem)) / std::sqrt(1.0 + G * G);
}

std::vector<double> outer_breakpoints(const GraphFunction& g, double t0, double half, std::initializer_list<double> extra) {
  std::vector<double> points{t0};
  for (double d : extra) {
    points.push_back(t0 - d);
    points.push_back(t0 + d);
  }
  if (g.feature()) {
    const auto graded = graded_breakpoints(t0 - half, t0 + half, g.feature()->center, g.feature()->width);
    points.insert(points.end(), graded.begin(), graded.end());
  }
  return points;
}

}  // namespace

CutoffIntegrals cutoff_integrals(const GraphicalStrip& strip, double t0, double r, const CutoffSpec& cutoff,
                                 const QuadratureConfig& quad, bool with_flux) {
  if (!(r > 0.0)) throw std::invalid_argument("cutoff_integrals: r must be positive");
  if (!(cutoff.epsilon() < r)) throw std::invalid_argument("cutoff_integrals: epsilon must be smaller than r");
  const GraphFunction& g = strip.graph();
  const double half = 0.25 * r * r;
  if (t0 - half < g.domain().lo || t0 + half > g.domain().hi) {
    throw DomainError("cutoff_integrals: ball leaves the strip interval");
  }
  const Point p0 = make_point(0.0, 0.0, t0);
  const CrucialEvaluator crucial(strip, p0);
  const double inner_r = r - cutoff.epsilon();
  const std::vector<double> tbreaks = outer_breakpoints(g, t0, half, {0.25 * inner_r * inner_r});

  // The y-slices are smooth away from the breakpoints, where Gauss-Kronrod is cheapest.
  const QuadratureConfig inner_quad = quad.with_scheme(QuadratureScheme::kAdaptiveBisection);

  CutoffIntegrals out;
  auto rho_at = [&](double y, double t) {
    const double G = g.value(t);
    const double a = y * y * (1.0 + G * G);
    const double dt = t - t0;
    return std::sqrt(std::sqrt(a * a + 16.0 * dt * dt));
  };

  const auto lambda_outer = integrate(
      [&](double t) {
        const double ymax = slice_halfwidth(g, t, t - t0, r);
        if (ymax == 0.0) return 0.0;
        const double yin = slice_halfwidth(g, t, t - t0, inner_r);
        const double breaks[] = {-yin, yin};
        return integrate([&](double y) { return cutoff.lambda(r - rho_at(y, t)) * strip.density(y, t); }, -ymax, ymax,
                         inner_quad, breaks)
            .value;
      },
      t0 - half, t0 + half, quad, tbreaks);
  out.lambda_integral = lambda_outer.value;
  out.error = lambda_outer.error;
  if (!with_flux) return out;

  // lambda' vanishes inside B(p0, r - eps), so only the annulus contributes.
  auto flux_outer = [&](bool absolute, bool& saw_negative) {
    return integrate(
        [&](double t) {
          const double ymax = slice_halfwidth(g, t, t - t0, r);
          if (ymax == 0.0) return 0.0;
          const double yin = slice_halfwidth(g, t, t - t0, inner_r);
          auto f = [&](double y) {
            const double rho = rho_at(y, t);
            const double lp = cutoff.lambda_prime(r - rho);
            if (lp == 0.0) return 0.0;
            const double phi = crucial(strip.chart(y, t));
            if (phi < 0.0) saw_negative = true;
            return lp * (absolute ? std::abs(phi) : phi) * strip.density(y, t);
          };
          return integrate(f, -ymax, -yin, inner_quad).value + integrate(f, yin, ymax, inner_quad).value;
        },
        t0 - half, t0 + half, quad, tbreaks);
  };
  bool saw_negative = false;
  const auto flux = flux_outer(false, saw_negative);
  out.flux_integral = flux.value;
  out.error += flux.error;
  // With no negative sample the absolute pass would repeat the same evaluations.
  out.flux_abs_integral = flux.value;
  if (saw_negative) {
    bool unused = false;
    out.flux_abs_integral = flux_outer(true, unused).value;
  }
  return out;
}

MinsurfResult verify_minsurf_inequality(const GraphicalStrip& strip, double t0, double r, const CutoffSpec& cutoff,
                                        const QuadratureConfig& quad) {
  const CutoffIntegrals ints = cutoff_integrals(strip, t0, r, cutoff, quad, true);
  MinsurfResult res;
  res.perimeter_term = kQMinusOne * ints.lambda_integral;
  res.flux_term = ints.flux_integral;
  res.lhs = res.perimeter_term - res.flux_term;
  res.scale = res.perimeter_term + ints.flux_abs_integral;
  res.error = kQMinusOne * ints.error;
  return res;
}

}  // namespace heis
