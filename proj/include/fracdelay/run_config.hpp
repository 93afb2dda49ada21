#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "json.hpp"

namespace fracdelay {

enum class Command { Simulate, Curve, Classify, Atlas, Regions, Sweep, Verify, Figure };

std::string_view to_string(Command c);
/// Throws DomainError for unknown names.
Command parse_command(std::string_view name);

enum class OutputFormat { Csv, Json };

/// Everything a command needs.  Fields a command does not use are ignored
/// by it but still validated and echoed.
struct RunConfig {
  Command command = Command::Classify;
  double alpha = 0.5;
  std::complex<double> a = 0.0;
  double b = 0.0;
  int tau = 1;
  std::size_t steps = 10000;
  /// Resolution: curve base samples, atlas alpha points, sweep samples, or
  /// points per axis of a verify scan.  0 picks the command's default.
  std::size_t grid = 0;
  /// linear, logistic, cubic, henon, lozi
  std::string map = "linear";
  /// Map parameter (lambda, beta, A) for a nonlinear simulate.
  double param = 0.0;
  /// Parameter range: sweep (map parameter), regions and verify (b), verify (a).
  std::optional<std::pair<double, double>> range;
  std::optional<std::pair<double, double>> a_range;
  double x0 = 1.0;
  int figure = 0;
  std::string out;
  OutputFormat format = OutputFormat::Csv;
  unsigned threads = 0;

  /// Throws DomainError naming the first offending field.
  void validate() const;
};

/// "re,im" or "re".
std::complex<double> parse_complex(std::string_view text);
/// "lo,hi" with lo <= hi.
std::pair<double, double> parse_range(std::string_view text);

nlohmann::json to_json(const RunConfig& cfg);
/// Unknown keys are rejected; missing keys keep their defaults.
RunConfig run_config_from_json(const nlohmann::json& j);

}  // namespace fracdelay
