// Subcommands of the command-line tool. Each returns a process exit code.

#ifndef SRGEO_CLI_COMMANDS_HPP
#define SRGEO_CLI_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace srgeo::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,  // oracle thresholds or invariant suite
  kExitConfig = 2,
  kExitIntegration = 3,
  kExitViolation = 4,  // classification pair outside the allowed list
};

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dir = ".";
  std::optional<std::size_t> count;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

// simulate | classify | sweep | oracle | render | check
int run_command(const std::string& name, const CommandOptions& opts, std::ostream& out,
                std::ostream& err);

}  // namespace srgeo::cli

#endif  // SRGEO_CLI_COMMANDS_HPP
