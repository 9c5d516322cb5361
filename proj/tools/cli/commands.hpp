#ifndef QBACKBONE_CLI_COMMANDS_HPP
#define QBACKBONE_CLI_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace qbackbone::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;

struct CommonOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> policy;
  std::optional<std::string> source;
};

struct SimulateOptions : CommonOptions {
  /// Directory receiving timeseries.csv, frames.csv, summary.csv,
  /// sources.csv and config.json.
  std::filesystem::path out;
  std::optional<std::string> memory;
};

struct SweepOptions : CommonOptions {
  std::string memory;
  std::size_t seeds_per_point = 10;
  std::filesystem::path out;
  unsigned threads = 0;
};

struct PassesOptions : CommonOptions {
  double min_elevation_deg = 20.0;
};

struct LinkbudgetOptions : CommonOptions {
  std::optional<double> step_s;
};

int cmd_simulate(const SimulateOptions& opts, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& err);
int cmd_passes(const PassesOptions& opts, std::ostream& out, std::ostream& err);
int cmd_linkbudget(const LinkbudgetOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. Data goes to `out` or files, diagnostics to
/// `err`. Returns 0 on success, 1 for usage/parse/validation errors, 2 for
/// I/O errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qbackbone::cli

#endif  // QBACKBONE_CLI_COMMANDS_HPP
