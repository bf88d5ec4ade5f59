#pragma once

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace census {

inline constexpr std::string_view kVersion = "0.1.0";

/// Fully resolved experiment options of one subcommand run. The textual form is one
/// "key=value" line per entry, led by "subcommand=<name>"; lines may carry a leading
/// "# " so the block embedded at the top of a CSV output parses back unchanged.
struct ExperimentConfig {
  std::string subcommand;
  std::map<std::string, std::string> options;

  std::string to_text() const;
  static ExperimentConfig parse_text(std::string_view text);
  /// Reads a config file, a CSV output (leading comment block) or a JSON output.
  static ExperimentConfig load(const std::string& path);

  bool operator==(const ExperimentConfig&) const = default;
};

/// Locale-independent shortest form with 17 significant digits ("%.17g" with '.').
std::string format_real(double value);

/// Dispatches `args` (without the program name). Exit status 0 on success,
/// 1 on a validation error (message names the field), 2 on an internal error.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace census
