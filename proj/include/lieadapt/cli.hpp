#ifndef LIEADAPT_CLI_HPP
#define LIEADAPT_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lieadapt/adaptive.hpp"

namespace lieadapt {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitConfig = 2,
  kExitDivergence = 3,
  kExitPartialSweep = 4,
};

/// Command-line overrides layered on top of the config file.
struct CliOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

/// Rolls out the nominal-parameter controller; writes trajectory.csv,
/// metrics.json and the effective config.toml.
int cmd_simulate(const CliOptions& opts);

/// Identification followed by nominal vs reconstructed tracking; writes
/// summary.json, dataset.csv, trajectory_nominal.csv,
/// trajectory_adaptive.csv and config.toml.
int cmd_adapt(const CliOptions& opts);

/// Monte Carlo sweep; writes sweep.csv, aggregate.csv, failures.csv and
/// config.toml. Returns kExitPartialSweep below 90% successful cells.
int cmd_sweep(const CliOptions& opts);

/// Parses `simulate|adapt|sweep --config <path> [--out <dir>] [--seed <u64>]
/// [--jobs <n>]` and dispatches.
int run_cli(int argc, const char* const* argv);

void write_trajectory_csv(std::ostream& os,
                          const std::vector<TrajectorySample>& samples);

}  // namespace lieadapt

#endif  // LIEADAPT_CLI_HPP
