#ifndef PNG_RUN_CONFIG_HPP
#define PNG_RUN_CONFIG_HPP

// One JSON document fully determines a run. Layout (defaults in brackets):
//
//   {
//     "problem":   {"name": "toy" | "zdt2", "n": int [problem default]},
//     "mode":      "png" | "mgd" | "linear-scalarization" | "gradient-descent-on-F" ["png"],
//     "criterion": {"kind": "...", "r": [..]}            required for png / gradient-descent-on-F,
//     "ensemble_size": int [1],
//     "init": {"kind": "random-gaussian", "scale": [1.0], "seed": [0]}
//           | {"kind": "explicit", "points": [[..], ..]}
//           | {"kind": "linear-scalarization-warmstart", "scale", "seed",
//              "weights": [[..], ..], "iters": int, "step_size": [run step size]},
//     "step_size": real [problem default],
//     "max_iters": int [1000],
//     "control":   {"alpha": [0.5], "gamma": [0.1], "beta": [0.9],
//                   "alpha_decay_power": [0], "shared_eps_floor": [false]},
//     "qp":        {"tol": [1e-8], "max_iters": [100], "refine_active_set": [true]},
//     "scalarization_weights": [[..], ..]                 linear-scalarization mode only,
//     "output":    path
//   }
//
// Unknown keys are rejected. The schema is published in schema/run_config.schema.json.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "png/criteria.hpp"
#include "png/navigator.hpp"
#include "png/simplex_qp.hpp"

namespace png {

/// A schema violation; `path()` names the offending field, e.g. "criterion.r[1]".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class InitKind { kRandomGaussian, kExplicit, kLinearScalarizationWarmstart };

struct InitSpec {
  InitKind kind = InitKind::kRandomGaussian;
  double scale = 1.0;
  std::uint64_t seed = 0;
  std::vector<ParameterVector> points;
  std::vector<SimplexWeights> weights;
  long iters = 0;
  std::optional<double> step_size;
};

struct RunConfig {
  std::string problem;
  Eigen::Index dimension = 0;
  std::optional<CriterionSpec> criterion;
  int ensemble_size = 1;
  InitSpec init;
  OptimizerConfig optimizer;
  ControlSchedule schedule;
  QpSolverConfig qp;
  std::string output;
  /// "fnv1a64:<16 hex digits>" over the canonical document minus "output".
  std::string hash;
};

/// Parses and validates; every failure is a ConfigError with a field path.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::string& path);

/// 64-bit FNV-1a of `bytes` formatted as "fnv1a64:%016x".
std::string fnv1a64_hex(std::string_view bytes);

/// Starting points for the run described by `cfg`.
std::vector<ParameterVector> initial_points(const RunConfig& cfg, const ObjectiveSet& objs);

}  // namespace png

#endif  // PNG_RUN_CONFIG_HPP
