#include "heis/cli.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "heis/errors.hpp"

namespace heis {

namespace {

using nlohmann::ordered_json;

double parse_number(std::string_view text, std::string_view spec) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw InvalidGraphError("bad number '" + std::string(text) + "' in G spec '" + std::string(spec) + "'");
  }
  return v;
}

std::vector<double> parse_params(std::string_view list, std::string_view spec) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = list.find(',', start);
    out.push_back(parse_number(list.substr(start, comma - start), spec));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

GraphFunction parse_g_spec(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  const std::string_view family = spec.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string_view::npos) params = parse_params(spec.substr(colon + 1), spec);

  auto expect = [&](std::size_t n) {
    if (params.size() != n) {
      throw InvalidGraphError("G spec '" + std::string(spec) + "' expects " + std::to_string(n) + " parameter(s)");
    }
  };
  std::optional<GraphFunction> g;
  if (family == "zero") {
    if (colon != std::string_view::npos) expect(0);
    g = GraphFunction::zero();
  } else if (family == "linear") {
    expect(2);
    g = GraphFunction::linear(params[0], params[1]);
  } else if (family == "arctan") {
    expect(1);
    g = GraphFunction::arctan(params[0]);
  } else if (family == "cubic") {
    expect(1);
    g = GraphFunction::cubic(params[0]);
  } else if (family == "tanh") {
    expect(1);
    g = GraphFunction::tanh(params[0]);
  } else {
    throw InvalidGraphError("unknown G family in '" + std::string(spec) +
                            "'; expected zero | linear:a,b | arctan:k | cubic:a | tanh:k");
  }
  const StripCertificate cert = validate_graphical_strip(*g, GraphicalStrip::kValidationSamples);
  if (!cert.valid) {
    std::ostringstream os;
    os << "G spec '" << spec << "' is not a graphical strip: G' < 0 at t = " << *cert.violation_t;
    throw InvalidGraphError(os.str());
  }
  return *g;
}

void RunConfig::validate() const {
  if (!std::isfinite(t0)) throw UsageError("--t0 must be finite");
  if (command == Command::kProfile) {
    if (!(r_min > 0.0) || !(r_min < r_max) || !std::isfinite(r_max)) throw UsageError("need 0 < --rmin < --rmax");
    if (points < 2) throw UsageError("--points must be at least 2");
  }
  if (!(r > 0.0) || !std::isfinite(r)) throw UsageError("--r must be positive");
  if (command == Command::kVerify && samples == 0) throw UsageError("--samples must be positive");
  if (tol && !(*tol > 0.0)) throw UsageError("--tol must be positive");
}

QuadratureConfig RunConfig::quadrature() const {
  QuadratureConfig q;
  if (tol && command != Command::kVerify) q.rel_tol = *tol;
  return q;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::kProfile: return "profile";
    case Command::kVerify: return "verify";
    case Command::kOmega: return "omega";
    case Command::kLimits: return "limits";
  }
  return "unknown";
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string profile_csv(const ProfileTable& table) {
  std::string out = "r,perimeter,ratio,err_estimate\n";
  for (const ProfileRow& row : table.rows) {
    out += format_double(row.r) + ',' + format_double(row.perimeter) + ',' + format_double(row.ratio) + ',' +
           format_double(row.err_estimate) + '\n';
  }
  return out;
}

std::vector<ProfileRow> parse_profile_csv(std::string_view csv) {
  std::vector<ProfileRow> rows;
  std::size_t pos = csv.find('\n');
  if (pos == std::string_view::npos || csv.substr(0, pos) != "r,perimeter,ratio,err_estimate") {
    throw std::invalid_argument("profile CSV: missing header");
  }
  ++pos;
  while (pos < csv.size()) {
    const std::size_t end = csv.find('\n', pos);
    const std::string_view line = csv.substr(pos, end - pos);
    pos = end == std::string_view::npos ? csv.size() : end + 1;
    if (line.empty()) continue;
    std::array<double, 4> v{};
    std::size_t start = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const std::size_t comma = k + 1 < v.size() ? line.find(',', start) : line.size();
      if (comma == std::string_view::npos) throw std::invalid_argument("profile CSV: short row");
      const auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + comma, v[k]);
      if (ec != std::errc{} || ptr != line.data() + comma) throw std::invalid_argument("profile CSV: bad number");
      start = comma + 1;
    }
    rows.push_back({v[0], v[1], v[2], v[3]});
  }
  return rows;
}

namespace {

ordered_json config_json(const RunConfig& cfg) {
  ordered_json j;
  j["command"] = to_string(cfg.command);
  j["g"] = cfg.g_spec;
  j["t0"] = cfg.t0;
  if (cfg.command == Command::kProfile) {
    j["rmin"] = cfg.r_min;
    j["rmax"] = cfg.r_max;
    j["points"] = cfg.points;
    j["grid"] = cfg.log_grid ? "log" : "linear";
  }
  if (cfg.command == Command::kVerify) {
    j["seed"] = cfg.seed;
    j["samples"] = cfg.samples;
  }
  j["r"] = cfg.r;
  if (cfg.tol) j["tol"] = *cfg.tol;
  return j;
}

ordered_json report_json(const IdentityReport& r) {
  ordered_json j;
  j["name"] = r.name;
  j["samples"] = r.samples;
  j["max_residual"] = r.max_residual;
  j["mean_residual"] = r.mean_residual;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  return j;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Derives independent sub-seeds from the user seed.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 mix(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
  return mix.next();
}

}  // namespace

CommandOutput run_profile(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const GraphicalStrip strip(parse_g_spec(cfg.g_spec));
  const std::vector<double> grid = make_grid(cfg.r_min, cfg.r_max, cfg.points, cfg.log_grid);
  const ProfileTable table = profile(strip, cfg.t0, grid, cfg.quadrature(), cfg.workers);
  double max_ratio = 0.0;
  for (const ProfileRow& row : table.rows) max_ratio = std::max(max_ratio, row.ratio);
  const MonotonicityCertificate cert = monotonicity_check(table, 1e-8 * max_ratio);

  CommandOutput out;
  out.exit_code = cert.pass ? exit_code::kPass : exit_code::kVerificationFailed;
  if (cfg.format == OutputFormat::kCsv) {
    out.body = profile_csv(table);
    return out;
  }
  ordered_json j;
  j["config"] = config_json(cfg);
  ordered_json rows = ordered_json::array();
  for (const ProfileRow& row : table.rows) {
    rows.push_back({{"r", row.r}, {"perimeter", row.perimeter}, {"ratio", row.ratio}, {"err_estimate", row.err_estimate}});
  }
  j["rows"] = std::move(rows);
  j["monotonicity"] = {{"pass", cert.pass},
                       {"slack", cert.slack},
                       {"worst_drop", cert.worst_drop},
                       {"first_violation", cert.first_violation ? ordered_json(*cert.first_violation) : ordered_json()}};
  j["wall_time_seconds"] = seconds_since(start);
  out.body = j.dump(2) + "\n";
  return out;
}

CommandOutput run_verify(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const GraphicalStrip strip(parse_g_spec(cfg.g_spec));
  const unsigned workers = cfg.workers;
  const QuadratureConfig quad = cfg.quadrature();

  PointwiseTolerances tol;
  if (cfg.tol) {
    tol = {*cfg.tol, *cfg.tol, *cfg.tol, *cfg.tol, *cfg.tol, *cfg.tol, *cfg.tol};
  }
  std::vector<IdentityReport> reports;

  const SurfaceSampler sampler = strip_sampler(strip, cfg.t0);
  const auto pairs = draw_sample_pairs(sampler, cfg.samples, sub_seed(cfg.seed, 0), cfg.t0);
  for (IdentityReport& r : pointwise_identity_suite(sampler, pairs, true, tol, workers)) reports.push_back(std::move(r));

  const auto ball = draw_ball_samples(strip, cfg.t0, cfg.r, cfg.samples, sub_seed(cfg.seed, 1));
  for (IdentityReport& r : crucial_bound_reports(strip, cfg.t0, cfg.r, ball, workers)) {
    if (cfg.tol) r.tolerance = *cfg.tol, r.pass = r.samples > 0 && r.max_residual <= *cfg.tol;
    reports.push_back(std::move(r));
  }

  const ChartRect rect{-1.0, 1.0, cfg.t0 - 0.5, cfg.t0 + 0.5};
  const ChartBump bump = make_chart_bump(rect);
  IbpConfig ibp;
  if (cfg.tol) ibp.rel_tol = *cfg.tol;
  using C = Coordinates<1>;
  const ScalarField weight = ScalarField::constant(1.0) + ScalarField::coordinate(C::x(0)) *
                                                              ScalarField::coordinate(C::t()) +
                             0.5 * ScalarField::coordinate(C::y(0));
  reports.push_back(verify_horizontal_ibp(strip, bump.field, rect, 1, ibp).as_identity_report());
  reports.push_back(verify_horizontal_ibp(strip, bump.field, rect, 2, ibp).as_identity_report());
  reports.push_back(verify_vertical_ibp(strip, weight, bump.field, rect, ibp).as_identity_report());

  const MinsurfResult ms = verify_minsurf_inequality(strip, cfg.t0, cfg.r, CutoffSpec(cfg.r / 10.0), quad);
  IdentityReport minsurf;
  minsurf.name = "minsurf r=" + format_double(cfg.r);
  minsurf.samples = 1;
  minsurf.max_residual = ms.scale > 0.0 ? std::abs(ms.lhs) / ms.scale : std::abs(ms.lhs);
  minsurf.mean_residual = minsurf.max_residual;
  minsurf.tolerance = cfg.tol.value_or(1e-8);
  minsurf.pass = minsurf.max_residual <= minsurf.tolerance;
  reports.push_back(minsurf);

  bool all_pass = true;
  ordered_json results = ordered_json::array();
  for (const IdentityReport& r : reports) {
    all_pass = all_pass && r.pass;
    results.push_back(report_json(r));
  }
  ordered_json j;
  j["config"] = config_json(cfg);
  j["results"] = std::move(results);
  j["wall_time_seconds"] = seconds_since(start);
  return {all_pass ? exit_code::kPass : exit_code::kVerificationFailed, j.dump(2) + "\n"};
}

CommandOutput run_omega(const RunConfig& cfg) {
  const QuadratureResult omega = omega_constant(cfg.quadrature());
  std::ostringstream os;
  os << "omega = " << format_double(omega.value) << " +/- " << format_double(omega.error) << '\n';
  return {exit_code::kPass, os.str()};
}

CommandOutput run_limits(const RunConfig& cfg) {
  const GraphicalStrip strip(parse_g_spec(cfg.g_spec));
  const QuadratureConfig quad = cfg.quadrature();
  const double omega = omega_constant(quad).value;
  const LimitEstimate small = small_r_limit(strip, cfg.t0, quad);
  std::ostringstream os;
  os << "omega = " << format_double(omega) << '\n';
  os << "small_r_limit = " << format_double(small.value) << " +/- " << format_double(small.error) << '\n';
  std::array<double, 3> corr{};
  for (int k = 0; k < 3; ++k) {
    const double r = cfg.r * (1 << k);
    corr[k] = large_r_correction(strip, cfg.t0, r, quad).value;
    os << "r = " << format_double(r) << ": correction = " << format_double(corr[k])
       << ", ratio = " << format_double(omega + corr[k]) << '\n';
  }
  const double d1 = std::abs(corr[1] - corr[0]);
  const double d2 = std::abs(corr[2] - corr[1]);
  const char* trend = d2 <= 0.5 * d1 || d2 <= 1e-12 * std::max(1.0, std::abs(corr[2])) ? "converging" : "growing";
  os << "trend = " << trend << " (increments " << format_double(d1) << ", " << format_double(d2) << ")\n";
  return {exit_code::kPass, os.str()};
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    CommandOutput result;
    switch (cfg.command) {
      case Command::kProfile: result = run_profile(cfg); break;
      case Command::kVerify: result = run_verify(cfg); break;
      case Command::kOmega: result = run_omega(cfg); break;
      case Command::kLimits: result = run_limits(cfg); break;
    }
    if (cfg.out.empty()) {
      out << result.body;
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw UsageError("cannot open output file " + cfg.out);
      file << result.body;
    }
    return result.exit_code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_code::kUsage;
  } catch (const InvalidGraphError& e) {
    err << "invalid G: " << e.what() << '\n';
    return exit_code::kInvalidGraph;
  } catch (const QuadratureError& e) {
    err << "quadrature failure: " << e.what() << '\n';
    return exit_code::kQuadratureFailure;
  } catch (const DomainError& e) {
    err << "domain violation: " << e.what() << '\n';
    return exit_code::kDomainViolation;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_code::kUsage;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monotonicity profiles and identity checks for graphical strips in the Heisenberg group"};
  RunConfig cfg;
  std::string command;
  std::string format = "csv";
  bool linear = false;
  bool log = false;
  double tol = 0.0;

  app.add_option("command", command, "profile | verify | omega | limits")
      ->required()
      ->check(CLI::IsMember({"profile", "verify", "omega", "limits"}));
  app.add_option("--g", cfg.g_spec, "zero | linear:a,b | arctan:k | cubic:a | tanh:k")->capture_default_str();
  app.add_option("--t0", cfg.t0, "ball centre (0, 0, t0)")->capture_default_str();
  app.add_option("--rmin", cfg.r_min, "smallest profile radius")->capture_default_str();
  app.add_option("--rmax", cfg.r_max, "largest profile radius")->capture_default_str();
  app.add_option("--points", cfg.points, "profile grid size")->capture_default_str();
  auto* log_flag = app.add_flag("--log", log, "log-spaced grid (default)");
  app.add_flag("--linear", linear, "linearly spaced grid")->excludes(log_flag);
  app.add_option("--seed", cfg.seed, "64-bit sample seed")->capture_default_str();
  app.add_option("--samples", cfg.samples, "samples per identity")->capture_default_str();
  auto* tol_opt = app.add_option("--tol", tol, "verify: identity tolerance; otherwise quadrature tolerance");
  app.add_option("--r", cfg.r, "ball radius for verify and limits")->capture_default_str();
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--workers", cfg.workers, "worker threads, 0 = hardware concurrency")->capture_default_str();
  app.set_config("--config", "", "flat key=value file mirroring the flags; flags win");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_code::kUsage;
  }
  if (command == "profile") cfg.command = Command::kProfile;
  if (command == "verify") cfg.command = Command::kVerify;
  if (command == "omega") cfg.command = Command::kOmega;
  if (command == "limits") cfg.command = Command::kLimits;
  cfg.log_grid = !linear;
  cfg.format = format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
  if (cfg.command == Command::kVerify) cfg.format = OutputFormat::kJson;
  if (tol_opt->count() > 0) cfg.tol = tol;
  return run_command(cfg, out, err);
}

}  // namespace heis
