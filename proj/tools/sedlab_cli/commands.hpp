#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sedlab_cli/run_config.hpp"

namespace sedlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

inline constexpr const char* kVersion = "0.1.0";

struct CommonOptions {
  std::string subcommand;
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "sedlab-out";
  unsigned threads = 1;
  std::string format = "csv";
  std::vector<std::string> overrides;  ///< "section.key=value"
};

/// Declared keys and defaults for a subcommand (sed-run, sed-spectrum,
/// whichpath, walker). Throws ConfigError for unknown subcommands.
RunConfig make_config(const std::string& subcommand);

/// Resolves the configuration (defaults, then file, then flags), runs the
/// subcommand and writes its outputs. Returns the process exit code; error
/// messages go to `err`.
int run_command(const CommonOptions& options, std::ostream& out, std::ostream& err);

/// argv front end (CLI11).
int main_entry(int argc, char** argv);

}  // namespace sedlab::cli
