#include "heis/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "heis/errors.hpp"

namespace heis {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("QuadratureConfig: tolerances must be positive");
  if (max_depth < 1) throw std::invalid_argument("QuadratureConfig: max_depth must be >= 1");
}

std::string to_string(QuadratureScheme s) {
  return s == QuadratureScheme::kTanhSinh ? "tanh-sinh" : "adaptive-bisection";
}

namespace {

constexpr double kFailureFactor = 1e3;
// Boost's tanh-sinh halves the step at each level; max_depth caps the levels.
constexpr int kMaxTanhSinhLevels = 20;
constexpr int kMaxBisectionLevels = 15;

QuadratureResult integrate_panel(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
  QuadratureResult r;
  double l1 = 0.0;
  if (a == b) return r;
  // Both Boost integrators misjudge their tolerance on short panels away from
  // the origin, so every panel is mapped onto [-1, 1] first.
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  // Boost stops on error <= tol * L1 only, so abs_tol is folded into the
  // relative tolerance through a single 15-point estimate of L1.
  double l1_guess = 0.0;
  boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      [&f, mid, half](double x) { return half * f(mid + half * x); }, -1.0, 1.0, 0, 0.0, nullptr, &l1_guess);
  const double tol = l1_guess > 0.0 ? std::min(std::max(cfg.rel_tol, cfg.abs_tol / l1_guess), 1e-6) : cfg.rel_tol;
  if (cfg.scheme == QuadratureScheme::kTanhSinh) {
    // xc is the signed distance to the nearer end (negative on the left),
    // which keeps abscissas next to a and b exact.
    const auto g = [&f, a, b, mid, half](double x, double xc) {
      if (x < -0.5) return half * f(a - half * xc);
      if (x > 0.5) return half * f(b - half * xc);
      return half * f(mid + half * x);
    };
    const auto levels = static_cast<std::size_t>(std::min(cfg.max_depth, kMaxTanhSinhLevels));
    if (levels == kMaxTanhSinhLevels) {
      thread_local boost::math::quadrature::tanh_sinh<double> shared(kMaxTanhSinhLevels);
      r.value = shared.integrate(g, -1.0, 1.0, tol, &r.error, &l1);
    } else {
      boost::math::quadrature::tanh_sinh<double> ts(levels);
      r.value = ts.integrate(g, -1.0, 1.0, tol, &r.error, &l1);
    }
  } else {
    const auto g = [&f, mid, half](double x) { return half * f(mid + half * x); };
    const auto levels = static_cast<unsigned>(std::min(cfg.max_depth, kMaxBisectionLevels));
    r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, -1.0, 1.0, levels, tol,
                                                                             &r.error, &l1);
  }
  if (!std::isfinite(r.value)) throw QuadratureError("quadrature produced a non-finite value");
  const double allowed = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(l1));
  if (r.error > kFailureFactor * allowed) {
    std::ostringstream os;
    os << to_string(cfg.scheme) << " quadrature on [" << a << ", " << b << "] did not converge: error estimate "
       << r.error << " vs tolerance " << allowed;
    throw QuadratureError(os.str());
  }
  return r;
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
  cfg.validate();
  return integrate_panel(f, a, b, cfg);
}

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg,
                           std::span<const double> breakpoints) {
  cfg.validate();
  const double lo = std::min(a, b), hi = std::max(a, b);
  std::vector<double> nodes{lo};
  for (double p : breakpoints) {
    if (p > lo && p < hi) nodes.push_back(p);
  }
  nodes.push_back(hi);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) total += integrate_panel(f, nodes[i], nodes[i + 1], cfg);
  if (a > b) total.value = -total.value;
  return total;
}

std::vector<double> graded_breakpoints(double a, double b, double center, double width) {
  std::vector<double> points;
  if (!(width > 0.0) || !std::isfinite(center)) return points;
  auto keep = [&](double p) {
    if (p > a && p < b) points.push_back(p);
  };
  keep(center);
  const double span = std::max(std::abs(center - a), std::abs(b - center));
  for (double d = width / 16.0; d < span; d *= 2.0) {
    keep(center - d);
    keep(center + d);
  }
  std::sort(points.begin(), points.end());
  return points;
}

namespace {

template <int Order>
std::vector<std::pair<double, double>> expand_rule() {
  using Rule = boost::math::quadrature::gauss<double, Order>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  std::vector<std::pair<double, double>> rule;
  // Boost stores the non-negative half; an odd order starts with the centre.
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      rule.emplace_back(0.0, w[i]);
    } else {
      rule.emplace_back(-x[i], w[i]);
      rule.emplace_back(x[i], w[i]);
    }
  }
  std::sort(rule.begin(), rule.end());
  return rule;
}

}  // namespace

std::vector<std::pair<double, double>> gauss_legendre_rule(int order) {
  switch (order) {
    case 3: return expand_rule<3>();
    case 5: return expand_rule<5>();
    case 7: return expand_rule<7>();
    case 10: return expand_rule<10>();
    default: throw std::invalid_argument("gauss_legendre_rule: order must be 3, 5, 7 or 10");
  }
}

double gauss_legendre_composite(const Integrand& f, double a, double b, int panels, int order) {
  if (panels < 1) throw std::invalid_argument("gauss_legendre_composite: panels must be >= 1");
  using boost::math::quadrature::gauss;
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * h;
    const double hi = (k + 1 == panels) ? b : lo + h;
    switch (order) {
      case 3: sum += gauss<double, 3>::integrate(f, lo, hi); break;
      case 5: sum += gauss<double, 5>::integrate(f, lo, hi); break;
      case 7: sum += gauss<double, 7>::integrate(f, lo, hi); break;
      case 10: sum += gauss<double, 10>::integrate(f, lo, hi); break;
      default: throw std::invalid_argument("gauss_legendre_composite: order must be 3, 5, 7 or 10");
    }
  }
  return sum;
}

}  // namespace heis
