#pragma once

// Command-line front end: G-family parsing, run configuration, the four
// commands and their CSV / JSON output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "heis/calculus.hpp"
#include "heis/perimeter.hpp"
#include "heis/surface.hpp"

namespace heis {

namespace exit_code {
inline constexpr int kPass = 0;
inline constexpr int kVerificationFailed = 1;
inline constexpr int kInvalidGraph = 2;
inline constexpr int kQuadratureFailure = 3;
inline constexpr int kDomainViolation = 4;
inline constexpr int kUsage = 64;
}  // namespace exit_code

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// zero | linear:a,b | arctan:k | cubic:a | tanh:k.  Throws InvalidGraphError
/// on a syntax error or when the dense-grid check finds G' < 0.
GraphFunction parse_g_spec(std::string_view spec);

enum class Command { kProfile, kVerify, kOmega, kLimits };
enum class OutputFormat { kCsv, kJson };

struct RunConfig {
  Command command = Command::kProfile;
  std::string g_spec = "linear:1,0";
  double t0 = 0.0;
  double r_min = 1e-2;
  double r_max = 1e2;
  int points = 64;
  bool log_grid = true;
  std::uint64_t seed = 42;
  std::size_t samples = 1000;
  std::optional<double> tol;  // verify: identity tolerance; otherwise quadrature rel_tol
  double r = 1.0;
  std::string out;  // empty writes to the output stream
  OutputFormat format = OutputFormat::kCsv;
  unsigned workers = 0;  // 0 picks the hardware concurrency

  /// Throws UsageError on an inconsistent configuration.
  void validate() const;
  QuadratureConfig quadrature() const;
};

std::string to_string(Command c);

/// Shortest decimal with 17 significant digits, no locale.
std::string format_double(double v);

/// Header `r,perimeter,ratio,err_estimate`, LF line endings.
std::string profile_csv(const ProfileTable& table);
/// Parses the rows written by profile_csv.  Throws std::invalid_argument.
std::vector<ProfileRow> parse_profile_csv(std::string_view csv);

struct CommandOutput {
  int exit_code = exit_code::kPass;
  std::string body;
};

CommandOutput run_profile(const RunConfig& cfg);
CommandOutput run_verify(const RunConfig& cfg);
CommandOutput run_omega(const RunConfig& cfg);
CommandOutput run_limits(const RunConfig& cfg);

/// Dispatches on cfg.command, maps exceptions to exit codes, writes the body
/// to cfg.out (or `out`) and diagnostics to `err`.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line: `heis <profile|verify|omega|limits> [flags]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace heis
