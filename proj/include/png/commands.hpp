#ifndef PNG_COMMANDS_HPP
#define PNG_COMMANDS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "png/metrics.hpp"
#include "png/run_config.hpp"
#include "png/trajectory_io.hpp"

namespace png {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeFailure = 3;

/// Executes a parsed config. Never throws for evaluation failures; those
/// come back as an incomplete file.
TrajectoryFile execute_run(const RunConfig& cfg);

/// Loads the config, runs it, writes the trajectory to `out_override` or the
/// config's output path and prints a summary of the final iterate.
int cmd_run(const std::string& config_path, const std::optional<std::string>& out_override,
            std::ostream& out, std::ostream& err);

struct MetricsOptions {
  /// Explicit reference front (trajectory or numeric CSV). Takes precedence.
  std::optional<std::string> ref_front_path;
  /// Use the non-dominated union of all inputs as the IGD+ reference.
  bool pool = false;
  LossVector hv_ref = (LossVector(2) << 0.6, 0.6).finished();
  /// Rows with iter < from_iter are ignored; -1 keeps only each file's last iteration.
  long from_iter = 0;
  /// Reference sample count when the problem's front oracle is used.
  int oracle_samples = 2000;
};

/// Prints IGD+ and HV of the dominance-filtered checkpoint set of each input.
int cmd_metrics(const std::vector<std::string>& trajectory_paths, const MetricsOptions& opts,
                std::ostream& out, std::ostream& err);

/// Writes per-point loss-space polylines plus a sampled front overlay when the
/// problem has a known front. Writes to `out` when `out_path` is empty.
int cmd_export_plot(const std::string& trajectory_path, const std::string& out_path,
                    int front_samples, std::ostream& out, std::ostream& err);

}  // namespace png

#endif  // PNG_COMMANDS_HPP
