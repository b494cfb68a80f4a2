#include <doctest.h>

#include <cmath>

#include "heis/calculus.hpp"
#include "heis/errors.hpp"
#include "heis/perimeter.hpp"
#include "oracles.hpp"

using namespace heis;

namespace {

const double kSqrt2 = std::sqrt(2.0);

using C = Coordinates<1>;

std::vector<GraphFunction> builtin_graphs() {
  return {GraphFunction::zero(), GraphFunction::linear(1, 0), GraphFunction::arctan(1), GraphFunction::cubic(1),
          GraphFunction::tanh(1)};
}

bool all_pass(const std::vector<IdentityReport>& reports) {
  bool ok = !reports.empty();
  for (const IdentityReport& r : reports) {
    INFO(r.name, " max ", r.max_residual, " tol ", r.tolerance);
    CHECK(r.pass);
    ok = ok && r.pass;
  }
  return ok;
}

}  // namespace

TEST_CASE("tangential operators at a known point") {
  const GraphicalStrip strip(GraphFunction::linear(1, 0));
  const ImplicitSurface& S = strip.surface();
  const Point p = make_point(2, 2, 1);
  const HorizontalVector c = c_hs(S, p);
  CHECK(c[0] == doctest::Approx(1.0 / 3.0));
  CHECK(c[1] == doctest::Approx(1.0 / 3.0));
  CHECK(y_derivative(S, ScalarField::coordinate(C::t()), p) == doctest::Approx(-kSqrt2));
  // (T - wbar Y) t = 1 - wbar Y t = 1 - (-2/(3 sqrt 2)) (-sqrt 2) = 1/3.
  CHECK(ty_operator(S, ScalarField::coordinate(C::t()), p) == doctest::Approx(1.0 / 3.0));

  const FrameData fd = horizontal_gauss_map(S, p);
  const HorizontalVector proj = project_tangential(make_horizontal(1.0, 0.0), fd);
  CHECK(proj[0] == doctest::Approx(0.5));
  CHECK(proj[1] == doctest::Approx(0.5));
}

TEST_CASE("tangential gradient of zeta") {
  for (const GraphFunction& g : builtin_graphs()) {
    const GraphicalStrip s(g);
    const Point p0 = make_point(0.0, 0.0, 0.4);
    const HorizontalField zeta = zeta_field(p0);
    for (const Point& q : oracle::random_points(100, 53, 3.0)) {
      const Point p = s.chart(q.y[0], q.t);
      const FrameData fd = horizontal_gauss_map(s.surface(), p);
      const HorizontalVector g1 = tangential_gradient(s.surface(), zeta.components[0], p).value;
      const HorizontalVector g2 = tangential_gradient(s.surface(), zeta.components[1], p).value;
      CHECK(std::abs(g1[0] - (1 - fd.pbar * fd.pbar)) <= 1e-12);
      CHECK(std::abs(g2[1] - (1 - fd.qbar * fd.qbar)) <= 1e-12);
      CHECK(std::abs(div_hs(s.surface(), zeta, p) - (kQMinusOne - 2)) <= 1e-12);
      CHECK(std::abs(dot(c_hs(s.surface(), p), fd.unit_normal())) <= 1e-14);
    }
  }
}

TEST_CASE("pointwise identities on strips, plane and cylinder") {
  const PointwiseTolerances tol;
  for (const GraphFunction& g : builtin_graphs()) {
    const GraphicalStrip s(g);
    const SurfaceSampler sampler = strip_sampler(s, 0.5);
    const auto samples = draw_sample_pairs(sampler, 300, 61, 0.5);
    CHECK(all_pass(pointwise_identity_suite(sampler, samples, true, tol, 2)));
  }
  const SurfaceSampler plane = plane_sampler();
  CHECK(all_pass(pointwise_identity_suite(plane, draw_sample_pairs(plane, 300, 67), true, tol)));
  // The cylinder is not H-minimal; every identity except H = 0 must still hold.
  const SurfaceSampler cyl = cylinder_sampler(1.5);
  const auto cyl_reports = pointwise_identity_suite(cyl, draw_sample_pairs(cyl, 300, 71), false, tol);
  CHECK(all_pass(cyl_reports));
  bool has_mean_curvature = false;
  for (const IdentityReport& r : cyl_reports) has_mean_curvature |= r.name.find("mean_curvature") != std::string::npos;
  CHECK_FALSE(has_mean_curvature);
  const auto cyl_minimal = pointwise_identity_suite(cyl, draw_sample_pairs(cyl, 100, 73), true, tol);
  bool caught = false;
  for (const IdentityReport& r : cyl_minimal) {
    if (r.name.find("mean_curvature") != std::string::npos) {
      caught = !r.pass;
      CHECK(r.max_residual == doctest::Approx(1 / 1.5));
    }
  }
  CHECK(caught);
}

TEST_CASE("verify_pointwise bookkeeping") {
  std::vector<SamplePair> samples(10);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i].p = make_point(static_cast<double>(i), 0, 0);
  const IdentityReport r = verify_pointwise(
      "probe", samples,
      [](const SamplePair& s) -> std::optional<double> {
        if (s.p.x[0] == 3.0) return std::nullopt;
        return -s.p.x[0] * 1e-3;
      },
      5e-3, 3);
  CHECK(r.samples == 9);
  CHECK(r.skipped == 1);
  CHECK(r.max_residual == doctest::Approx(9e-3));
  CHECK(r.worst_point.x[0] == 9.0);
  CHECK_FALSE(r.pass);
  const IdentityReport empty = verify_pointwise("none", {}, [](const SamplePair&) { return 0.0; }, 1.0);
  CHECK_FALSE(empty.pass);
}

TEST_CASE("crucial quantity") {
  // On the plane x = 0, Phi = rho.
  const GraphicalStrip zero(GraphFunction::zero());
  for (const Point& q : oracle::random_points(50, 79, 2.0)) {
    const Point p = zero.chart(q.y[0], q.t);
    const Point p0 = make_point(0, 0, 0.3);
    if (rho_value(p0, p) < 1e-6) continue;
    CHECK(crucial_quantity(zero, p0, p) == doctest::Approx(rho_value(p0, p)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(crucial_quantity(zero, make_point(1, 0, 0), make_point(0, 1, 1)), DomainError);
  CHECK_THROWS_AS(crucial_quantity(zero, make_point(0, 0, 1), make_point(0, 0, 1)), DomainError);

  for (const GraphFunction& g : builtin_graphs()) {
    const GraphicalStrip s(g);
    for (const Point& q : oracle::random_points(100, 83, 2.0)) {
      const double t0 = 0.25;
      const Point p = s.chart(q.y[0], q.t);
      const Point p0 = make_point(0, 0, t0);
      const double rho = rho_value(p0, p);
      if (rho < 1e-6) continue;
      const double general = crucial_quantity(s, p0, p);
      CHECK(std::abs(general - crucial_quantity_closed_form(s, t0, q.y[0], q.t)) <= 1e-10 * std::max(1.0, rho));
      // G' >= 0 makes the correction term non-positive and bounded by rho.
      CHECK(general <= rho * (1 + 1e-12));
      CHECK(general >= -1e-12 * rho);
    }
  }
  for (double r : {0.5, 1.0, 10.0}) {
    const GraphicalStrip s(GraphFunction::arctan(1));
    const auto samples = draw_ball_samples(s, 0.0, r, 2000, 89);
    CHECK(all_pass(crucial_bound_reports(s, 0.0, r, samples, 2)));
  }
}

TEST_CASE("integration by parts on strip charts") {
  for (const GraphFunction& g : builtin_graphs()) {
    const GraphicalStrip s(g);
    for (const ChartRect rect : {ChartRect{-1, 1, -0.5, 0.5}, ChartRect{0.2, 2.5, 0.1, 1.3}}) {
      const ChartBump bump = make_chart_bump(rect);
      for (int i : {1, 2}) {
        const IbpReport rep = verify_horizontal_ibp(s, bump.field, rect, i);
        INFO(g.name(), " i=", i, " residual ", rep.relative_residual);
        CHECK(rep.pass);
        // On the plane x = 0 the first tangential component vanishes identically.
        if (g.name() != GraphFunction::zero().name() || i == 2) CHECK(rep.scale > 0.0);
      }
      const ScalarField x = ScalarField::coordinate(C::x(0));
      const ScalarField t = ScalarField::coordinate(C::t());
      const ScalarField y = ScalarField::coordinate(C::y(0));
      const ScalarField weight = ScalarField::constant(1.0) + x * t + 0.5 * y;
      const IbpReport vert = verify_vertical_ibp(s, weight, bump.field, rect);
      INFO(g.name(), " vertical residual ", vert.relative_residual);
      CHECK(vert.pass);
    }
  }
}

TEST_CASE("integration by parts converges under refinement") {
  const GraphicalStrip s(GraphFunction::arctan(1));
  const ChartRect rect{-1.5, 2.0, -0.7, 0.9};
  const ChartBump bump = make_chart_bump(rect);
  IbpConfig coarse;
  coarse.panels = 2;
  coarse.order = 3;
  const IbpReport rep = verify_horizontal_ibp(s, bump.field, rect, 1, coarse);
  CHECK(rep.coarse_residual > 1e-8 * rep.scale);
  CHECK(rep.residual < 0.5 * rep.coarse_residual);
  CHECK(rep.refinement_ok);

  // A field that is not compactly supported in the rectangle breaks the identity.
  const ScalarField not_bump = ScalarField::constant(1.0) + ScalarField::coordinate(C::y(0));
  CHECK_FALSE(verify_horizontal_ibp(s, not_bump, rect, 2).pass);

  const GraphFunction bounded("bounded", {-1.0, 1.0}, [](double t) { return t; }, [](double) { return 1.0; },
                              [](double) { return 0.0; });
  const GraphicalStrip bs(bounded);
  CHECK_THROWS_AS(verify_horizontal_ibp(bs, bump.field, ChartRect{-1, 1, -1, 0.5}, 1), DomainError);
  CHECK_THROWS_AS(verify_horizontal_ibp(s, bump.field, rect, 3), std::invalid_argument);
}

TEST_CASE("cutoff function") {
  const CutoffSpec cut(0.2);
  CHECK(cut.lambda(-1.0) == 0.0);
  CHECK(cut.lambda(0.0) == 0.0);
  CHECK(cut.lambda(0.2) == 1.0);
  CHECK(cut.lambda(5.0) == 1.0);
  CHECK(cut.lambda(0.1) == doctest::Approx(0.5));
  CHECK(oracle::simpson([&](double s) { return cut.lambda_prime(s); }, 0.0, 0.2, 2000) ==
        doctest::Approx(1.0).epsilon(1e-10));
  for (double s : {0.03, 0.07, 0.15}) {
    CHECK(cut.lambda_prime(s) == doctest::Approx((cut.lambda(s + 1e-6) - cut.lambda(s - 1e-6)) / 2e-6).epsilon(1e-7));
  }
  CHECK_THROWS_AS(CutoffSpec(0.0), std::invalid_argument);
}

TEST_CASE("mollified perimeter against the co-area oracle") {
  // int lambda(r - rho) dsigma = int_{r-eps}^{r} lambda'(r - s) P(s) ds.
  for (const GraphFunction& g : {GraphFunction::zero(), GraphFunction::linear(1, 0), GraphFunction::arctan(1)}) {
    const GraphicalStrip s(g);
    for (double r : {0.5, 2.0}) {
      const double eps = r / 10;
      const CutoffSpec cut(eps);
      const double mollified = mollified_perimeter(s, 0.0, r, cut);
      const double oracle_value = oracle::simpson(
          [&](double u) { return cut.lambda_prime(r - u) * perimeter_in_ball(s, 0.0, u).value; }, r - eps, r, 400);
      INFO(g.name(), " r=", r);
      CHECK(mollified == doctest::Approx(oracle_value).epsilon(1e-8));
      CHECK(mollified >= perimeter_in_ball(s, 0.0, r - eps).value);
      CHECK(mollified <= perimeter_in_ball(s, 0.0, r).value);
    }
  }
  CHECK_THROWS_AS(mollified_perimeter(GraphicalStrip(GraphFunction::zero()), 0.0, 1.0, CutoffSpec(1.5)),
                  std::invalid_argument);
}

TEST_CASE("minimal-surface cutoff identity") {
  for (const GraphFunction& g : builtin_graphs()) {
    const GraphicalStrip s(g);
    for (double r : {0.5, 2.0}) {
      const MinsurfResult res = verify_minsurf_inequality(s, 0.0, r, CutoffSpec(r / 10), {});
      INFO(g.name(), " r=", r, " lhs ", res.lhs, " scale ", res.scale);
      CHECK(std::abs(res.lhs) <= 1e-8 * res.scale);
      CHECK(res.perimeter_term > 0.0);
    }
  }
}
