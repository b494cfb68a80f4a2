#include "heis/perimeter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "heis/errors.hpp"
#include "heis/parallel.hpp"

namespace heis {

namespace {

/// r^4 - 16 dt^2 in factored form, clamped at 0.
double slice_radicand(double r, double dt) {
  const double r2 = r * r;
  return std::max(0.0, (r2 - 4.0 * dt) * (r2 + 4.0 * dt));
}

void require_positive_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("radius must be positive and finite");
}

void require_ball_inside(const GraphicalStrip& strip, double t0, double r) {
  const Interval& dom = strip.graph().domain();
  const double half = 0.25 * r * r;
  if (t0 - half < dom.lo || t0 + half > dom.hi) {
    std::ostringstream os;
    os << "ball of radius " << r << " about t0 = " << t0 << " leaves the domain of " << strip.graph().name();
    throw DomainError(os.str());
  }
}

QuadratureScheme other_scheme(QuadratureScheme s) {
  return s == QuadratureScheme::kTanhSinh ? QuadratureScheme::kAdaptiveBisection : QuadratureScheme::kTanhSinh;
}

/// Breakpoints for an integrand in t over [a, b] carrying the graph feature.
std::vector<double> feature_breakpoints(const GraphFunction& g, double a, double b) {
  if (!g.feature()) return {};
  return graded_breakpoints(a, b, g.feature()->center, g.feature()->width);
}

/// The inner integral at t = t0 + dt, with the radicand taken from dt.
double slice_perimeter(const GraphicalStrip& strip, double t0, double r, double dt) {
  const double t = t0 + dt;
  const double G = strip.graph().value(t);
  const double dG = strip.graph().derivative(t);
  const double q = std::sqrt(std::sqrt(slice_radicand(r, dt)));
  return 2.0 * (q + dG * q * q * q / (6.0 * (1.0 + G * G)));
}

/// Outer t-integral of inner_integral.  Each half [t0, t0 +- r^2/4] is
/// reached through t = t0 +- (r^2/4)(1 - (1 - s)^4), s in [0, 1], which
/// removes the (r^2/4 - |t - t0|)^{1/4} behaviour at the slice ends.
QuadratureResult direct_perimeter(const GraphicalStrip& strip, double t0, double r, const QuadratureConfig& quad) {
  const double half = 0.25 * r * r;
  QuadratureResult total;
  for (const double sign : {-1.0, 1.0}) {
    std::vector<double> breaks;
    for (double t : feature_breakpoints(strip.graph(), t0 - half, t0 + half)) {
      const double u = sign * (t - t0) / half;
      if (u > 0.0 && u < 1.0) breaks.push_back(1.0 - std::sqrt(std::sqrt(1.0 - u)));
    }
    total += integrate(
        [&](double s) {
          const double v = 1.0 - s;
          const double one_minus_v4 = s * (2.0 - s) * (1.0 + v * v);
          return slice_perimeter(strip, t0, r, sign * half * one_minus_v4) * 4.0 * half * v * v * v;
        },
        0.0, 1.0, quad, breaks);
  }
  return total;
}

}  // namespace

double ball_slice_bounds(const GraphicalStrip& strip, double t0, double r, double t) {
  require_positive_radius(r);
  const double rad = slice_radicand(r, t - t0);
  if (rad == 0.0) return 0.0;
  const double G = strip.graph().value(t);
  return std::sqrt(std::sqrt(rad)) / std::sqrt(1.0 + G * G);
}

double inner_integral(const GraphicalStrip& strip, double t0, double r, double t) {
  require_positive_radius(r);
  if (std::abs(t - t0) > 0.25 * r * r) throw DomainError("inner_integral: t lies outside the ball");
  return slice_perimeter(strip, t0, r, t - t0);
}

QuadratureResult omega_constant(const QuadratureConfig& quad) {
  return integrate([](double tau) { return std::sqrt(std::sqrt((1.0 - tau) * (1.0 + tau))); }, 0.0, 1.0, quad);
}

QuadratureResult large_r_correction(const GraphicalStrip& strip, double t0, double r, const QuadratureConfig& quad) {
  require_positive_radius(r);
  require_ball_inside(strip, t0, r);
  const GraphFunction& g = strip.graph();
  const double scale = 0.25 * r * r;
  std::vector<double> breaks{0.0};
  if (g.feature()) {
    const auto graded = graded_breakpoints(-1.0, 1.0, (g.feature()->center - t0) / scale, g.feature()->width / scale);
    breaks.insert(breaks.end(), graded.begin(), graded.end());
  }
  QuadratureResult res = integrate(
      [&](double tau) {
        const double t = t0 + scale * tau;
        const double G = g.value(t);
        const double w = (1.0 - tau) * (1.0 + tau);
        return g.derivative(t) / (1.0 + G * G) * std::pow(w, 0.75);
      },
      -1.0, 1.0, quad, breaks);
  const double factor = r * r / 12.0;
  res.value *= factor;
  res.error *= factor;
  return res;
}

PerimeterEstimate perimeter_in_ball(const GraphicalStrip& strip, double t0, double r, const QuadratureConfig& quad) {
  require_positive_radius(r);
  require_ball_inside(strip, t0, r);
  const double r3 = r * r * r;
  const QuadratureResult omega = omega_constant(quad);
  const QuadratureResult corr = large_r_correction(strip, t0, r, quad);

  const QuadratureResult direct = direct_perimeter(strip, t0, r, quad.with_scheme(other_scheme(quad.scheme)));

  PerimeterEstimate est;
  est.value = r3 * (omega.value + corr.value);
  est.direct = direct.value;
  const double diff = std::abs(est.value - est.direct);
  est.error = r3 * (omega.error + corr.error) + diff;
  if (!(est.value > 0.0) || diff > kPathAgreementTol * std::abs(est.value)) {
    std::ostringstream os;
    os.precision(17);
    os << "perimeter paths disagree at r = " << r << ": reduced " << est.value << ", direct " << est.direct;
    throw QuadratureError(os.str());
  }
  return est;
}

std::vector<double> make_grid(double r_min, double r_max, int count, bool logarithmic) {
  if (count < 2) throw std::invalid_argument("grid needs at least 2 points");
  if (!(r_min > 0.0) || !(r_min < r_max) || !std::isfinite(r_max)) {
    throw std::invalid_argument("grid needs 0 < rmin < rmax");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double n = count - 1;
  for (int k = 0; k < count; ++k) {
    const double s = k / n;
    grid[k] = logarithmic ? std::exp(std::log(r_min) + s * (std::log(r_max) - std::log(r_min)))
                          : r_min + s * (r_max - r_min);
  }
  grid.front() = r_min;
  grid.back() = r_max;
  return grid;
}

ProfileTable profile(const GraphicalStrip& strip, double t0, std::span<const double> r_grid,
                     const QuadratureConfig& quad, unsigned workers) {
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    if (!(r_grid[k] > 0.0)) throw std::invalid_argument("profile: radii must be positive");
    if (k > 0 && !(r_grid[k] > r_grid[k - 1])) throw std::invalid_argument("profile: grid must be strictly increasing");
  }
  if (!r_grid.empty()) require_ball_inside(strip, t0, r_grid.back());
  ProfileTable table;
  table.t0 = t0;
  table.g_name = strip.graph().name();
  table.rows.resize(r_grid.size());
  parallel_for(r_grid.size(), workers, [&](std::size_t k) {
    const double r = r_grid[k];
    const PerimeterEstimate est = perimeter_in_ball(strip, t0, r, quad);
    table.rows[k] = {r, est.value, est.value / std::pow(r, kProfileExponent), est.error};
  });
  return table;
}

MonotonicityCertificate monotonicity_check(const ProfileTable& table, double slack) {
  MonotonicityCertificate cert;
  cert.slack = slack;
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    const double drop = table.rows[k - 1].ratio - table.rows[k].ratio;
    cert.worst_drop = std::max(cert.worst_drop, drop);
    if (drop > slack && !cert.first_violation) {
      cert.first_violation = k;
      cert.pass = false;
    }
  }
  return cert;
}

LimitEstimate small_r_limit(const GraphicalStrip& strip, double t0, const QuadratureConfig& quad, int levels) {
  if (levels < 2) throw std::invalid_argument("small_r_limit: levels must be >= 2");
  const Interval& dom = strip.graph().domain();
  const double room = std::min(t0 - dom.lo, dom.hi - t0);
  if (!(room > 0.0)) throw DomainError("small_r_limit: t0 must lie in the interior of the domain");
  const double r0 = std::min(0.2, 2.0 * std::sqrt(room));

  LimitEstimate out;
  std::vector<double> h;
  for (int k = 0; k < levels; ++k) {
    const double r = r0 / std::ldexp(1.0, k);
    out.radii.push_back(r);
    out.ratios.push_back(perimeter_in_ball(strip, t0, r, quad).value / (r * r * r));
    h.push_back(r * r);
  }
  // Neville's tableau for the polynomial in h through (h_k, ratio_k), at h = 0.
  std::vector<double> col = out.ratios;
  double previous = col.back();
  for (int j = 1; j < levels; ++j) {
    previous = col.back();
    for (int k = levels - 1; k >= j; --k) {
      col[k] = col[k] + (col[k] - col[k - 1]) * h[k] / (h[k - j] - h[k]);
    }
  }
  out.value = col.back();
  out.error = std::abs(out.value - previous);
  return out;
}

double mollified_perimeter(const GraphicalStrip& strip, double t0, double r, const CutoffSpec& cutoff,
                           const QuadratureConfig& quad) {
  return cutoff_integrals(strip, t0, r, cutoff, quad, false).lambda_integral;
}

}  // namespace heis
