#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fxt_mvi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// run | bounds | sweep | gen-data | verify
struct CliCommand {
  std::string verb;
  std::optional<std::filesystem::path> config_path;
  /// Flag values given on the command line, keyed by flag name without "--".
  std::map<std::string, std::string> overrides;
};

/// Flat "key = value" config file. Blank lines and '#' comments are ignored;
/// keys use the flag names ("kappa1", "max-steps", ...; '_' is accepted for
/// '-'). Throws Error(config_error) with "path:line:" diagnostics.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

/// Parses argv (argv[0] is the program name), runs the verb and returns the
/// process exit code: 0 success, 1 validation/config error, 2 runtime or
/// numeric failure.
int parse_and_dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace fxt_mvi::cli
