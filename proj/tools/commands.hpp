#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fedstrat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Environment variable naming the default output root.
inline constexpr const char* kOutEnv = "FEDSTRAT_OUT";

struct Options {
  std::filesystem::path out_root = "runs";
  std::size_t threads = 1;
  std::optional<std::uint64_t> seed_override;
  bool force = false;   // allow replacing a run dir produced by a different config
  bool timing = false;  // fill wall_time_ms (makes rounds.csv non-reproducible)
  std::ostream* out = &std::cout;
  std::ostream* err = &std::cerr;
};

/// Output root from $FEDSTRAT_OUT, else "runs".
std::filesystem::path default_out_root();

/// Runs one scenario into <out_root>/<label>/ (rounds.csv, summary.json,
/// config.json, manifest.json) and prints the summary.
int cmd_run(const std::filesystem::path& config_file, const Options& opts);

/// Runs one scenario per value of `key` (a dotted scalar config field),
/// each into <out_root>/<label>__<key>=<value>/, and writes
/// <out_root>/<label>__sweep_<key>/comparison.csv.
int cmd_sweep(const std::filesystem::path& config_file, const std::string& key,
              const std::vector<std::string>& values, const Options& opts);

/// Renders accuracy.svg (all runs overlaid) and, for adaptive runs,
/// selection_<run>.svg into `opts.out_root`.
int cmd_plot(const std::vector<std::filesystem::path>& run_dirs, const Options& opts);

}  // namespace fedstrat::cli
