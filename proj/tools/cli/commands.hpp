#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace molcap::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3 };

/// Command-line overrides; each one beats the matching config field.
struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;   ///< output directory
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;          ///< "json" or "csv"
  std::optional<int> threads;
};

/// Runs one of capacity, sweep, simulate, diffusion, reduce. Summaries go to `out`,
/// diagnostics to `err`; the return value is the process exit status.
int run_command(const std::string& name, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

}  // namespace molcap::cli
