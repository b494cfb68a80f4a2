#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "heis/cli.hpp"
#include "heis/errors.hpp"

using namespace heis;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "heis");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json without_timing(nlohmann::json j) {
  j.erase("wall_time_seconds");
  return j;
}

}  // namespace

TEST_CASE("G family strings") {
  CHECK(parse_g_spec("zero").derivative(1.0) == 0.0);
  const GraphFunction lin = parse_g_spec("linear:2,0.5");
  CHECK(lin.value(1.0) == doctest::Approx(2.5));
  CHECK(parse_g_spec("arctan:3").value(1.0) == doctest::Approx(std::atan(3.0)));
  CHECK(parse_g_spec("cubic:2").value(2.0) == doctest::Approx(16.0));
  CHECK(parse_g_spec("tanh:0.5").value(2.0) == doctest::Approx(std::tanh(1.0)));
  for (const char* bad : {"", "linear", "linear:1", "linear:1,x", "arctan:", "sine:1", "linear:1,0,2", "cubic:1e"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_g_spec(bad), InvalidGraphError);
  }
  CHECK_THROWS_AS(parse_g_spec("linear:-1,0"), InvalidGraphError);
  CHECK_THROWS_AS(parse_g_spec("arctan:-1"), InvalidGraphError);
}

TEST_CASE("number formatting and CSV round trip") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  const GraphicalStrip s(parse_g_spec("arctan:1"));
  const ProfileTable table = profile(s, 0.0, make_grid(0.1, 10.0, 12, true));
  const std::string csv = profile_csv(table);
  CHECK(csv.rfind("r,perimeter,ratio,err_estimate\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  const auto rows = parse_profile_csv(csv);
  REQUIRE(rows.size() == table.rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].r == table.rows[k].r);
    CHECK(rows[k].perimeter == table.rows[k].perimeter);
    CHECK(rows[k].ratio == table.rows[k].ratio);
    CHECK(rows[k].err_estimate == table.rows[k].err_estimate);
  }
  CHECK_THROWS_AS(parse_profile_csv("r,perimeter\n1,2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_profile_csv("r,perimeter,ratio,err_estimate\n1,2,x,4\n"), std::invalid_argument);
}

TEST_CASE("exit codes") {
  CHECK(run({"profile", "--g", "linear:1,0", "--points", "8"}).code == exit_code::kPass);
  CHECK(run({"profile", "--rmin", "2", "--rmax", "1"}).code == exit_code::kUsage);
  CHECK(run({"profile", "--bogus"}).code == exit_code::kUsage);
  CHECK(run({"frobnicate"}).code == exit_code::kUsage);
  CHECK(run({}).code == exit_code::kUsage);
  CHECK(run({"profile", "--points", "1"}).code == exit_code::kUsage);
  CHECK(run({"profile", "--format", "xml"}).code == exit_code::kUsage);
  const Run bad_g = run({"profile", "--g", "linear:-1,0"});
  CHECK(bad_g.code == exit_code::kInvalidGraph);
  CHECK_FALSE(bad_g.err.empty());
  CHECK(run({"profile", "--g", "wiggle:1"}).code == exit_code::kInvalidGraph);
  CHECK(run({"verify", "--g", "arctan:1", "--samples", "50", "--tol", "1e-18"}).code ==
        exit_code::kVerificationFailed);
  CHECK(run({"profile", "--tol", "-1"}).code == exit_code::kUsage);
}

TEST_CASE("profile output") {
  const Run csv = run({"profile", "--g", "tanh:1", "--t0", "1", "--rmin", "0.1", "--rmax", "10", "--points", "5"});
  REQUIRE(csv.code == 0);
  const auto rows = parse_profile_csv(csv.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows.front().r == 0.1);
  CHECK(rows.back().r == 10.0);

  const Run lin = run({"profile", "--linear", "--rmin", "1", "--rmax", "3", "--points", "3"});
  REQUIRE(lin.code == 0);
  CHECK(parse_profile_csv(lin.out)[1].r == doctest::Approx(2.0));
  CHECK(run({"profile", "--log", "--linear"}).code == exit_code::kUsage);

  const Run js = run({"profile", "--format", "json", "--points", "6", "--g", "cubic:1"});
  REQUIRE(js.code == 0);
  const auto j = nlohmann::json::parse(js.out);
  CHECK(j.at("rows").size() == 6);
  CHECK(j.at("monotonicity").at("pass").get<bool>());
  CHECK(j.contains("config"));
  CHECK(j.contains("wall_time_seconds"));
}

TEST_CASE("results do not depend on the worker count") {
  const std::vector<std::string> base{"profile", "--format", "json", "--g", "arctan:2", "--points", "32"};
  auto with = [&](const char* w) {
    auto args = base;
    args.insert(args.end(), {"--workers", w});
    return run(args);
  };
  const Run one = with("1");
  const Run four = with("4");
  REQUIRE(one.code == 0);
  REQUIRE(four.code == 0);
  CHECK(without_timing(nlohmann::json::parse(one.out)) == without_timing(nlohmann::json::parse(four.out)));

  const std::vector<std::string> vbase{"verify", "--g", "tanh:1", "--samples", "40", "--seed", "7"};
  auto vwith = [&](const char* w) {
    auto args = vbase;
    args.insert(args.end(), {"--workers", w});
    return run(args);
  };
  const Run v1 = vwith("1");
  const Run v4 = vwith("4");
  REQUIRE(v1.code == 0);
  CHECK(without_timing(nlohmann::json::parse(v1.out)) == without_timing(nlohmann::json::parse(v4.out)));
}

TEST_CASE("verify report") {
  const Run v = run({"verify", "--g", "linear:1,0", "--samples", "60", "--r", "2"});
  REQUIRE(v.code == 0);
  const auto j = nlohmann::json::parse(v.out);
  const auto& results = j.at("results");
  CHECK(results.size() > 8);
  for (const auto& r : results) {
    INFO(r.at("name").get<std::string>());
    CHECK(r.at("pass").get<bool>());
    CHECK(r.at("max_residual").get<double>() <= r.at("tolerance").get<double>());
  }
  CHECK(j.at("config").at("seed").get<std::uint64_t>() == 42);
}

TEST_CASE("omega and limits") {
  const Run o = run({"omega"});
  REQUIRE(o.code == 0);
  CHECK(o.out.find("omega = 0.874019184764") == 0);
  const Run l = run({"limits", "--g", "linear:1,0", "--r", "100"});
  REQUIRE(l.code == 0);
  CHECK(l.out.find("converging") != std::string::npos);
}

TEST_CASE("config file with flags taking precedence") {
  const auto path = std::filesystem::current_path() / "test_cli_config.toml";
  {
    std::ofstream f(path);
    f << "g = \"arctan:1\"\nrmin = 0.5\nrmax = 5\npoints = 4\n";
  }
  const Run from_file = run({"profile", "--config", path.string()});
  REQUIRE(from_file.code == 0);
  const auto rows = parse_profile_csv(from_file.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows.front().r == 0.5);
  CHECK(rows.back().r == 5.0);

  const Run override = run({"profile", "--config", path.string(), "--points", "3", "--rmax", "2"});
  REQUIRE(override.code == 0);
  const auto orows = parse_profile_csv(override.out);
  REQUIRE(orows.size() == 3);
  CHECK(orows.back().r == 2.0);
  CHECK(orows.front().r == 0.5);
  std::filesystem::remove(path);

  CHECK(run({"profile", "--config", "/nonexistent/heis.toml"}).code == exit_code::kUsage);
}

TEST_CASE("output file") {
  const auto path = std::filesystem::current_path() / "test_cli_out.csv";
  const Run r = run({"profile", "--points", "4", "--out", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(parse_profile_csv(ss.str()).size() == 4);
  std::filesystem::remove(path);
}
