#ifndef PNG_NAVIGATOR_HPP
#define PNG_NAVIGATOR_HPP

// Direction selection and the iteration engine.
//
// PNG picks, at every iterate, the vector closest to grad F whose inner product
// with every objective gradient is at least phi. phi follows the stationarity
// measure g: when g falls to the threshold gamma * eps0 the control switches
// off and the step is plain gradient descent on F; otherwise phi = alpha * g.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "png/criteria.hpp"
#include "png/objectives.hpp"
#include "png/simplex_qp.hpp"

namespace png {

/// Control parameter: a finite lower bound on every objective's descent rate,
/// or "off". Never represented by an infinite float.
class Phi {
 public:
  static Phi off() { return Phi(); }
  static Phi bound(double value) { return Phi(value); }

  bool is_off() const { return !value_.has_value(); }
  /// Precondition: !is_off().
  double value() const { return *value_; }

  friend bool operator==(const Phi&, const Phi&) = default;

 private:
  Phi() = default;
  explicit Phi(double v) : value_(v) {}
  std::optional<double> value_;
};

struct ControlSchedule {
  double alpha = 0.5;
  double gamma = 0.1;
  /// Discount of the running gradient-norm average.
  double beta = 0.9;
  /// alpha_k = alpha / (1 + k)^power; 0 keeps alpha constant.
  double alpha_decay_power = 0.0;
  /// Running average of (1/m) sum_i ||grad l_i||^2.
  double eps0 = 0.0;
  /// False until the first observation seeds eps0.
  bool initialized = false;

  double threshold() const { return gamma * eps0; }
  double alpha_at(long iter) const;
};

void validate(const ControlSchedule& sched);

/// phi = alpha_k * g above the threshold gamma * eps0, control off at or below it.
Phi compute_phi(const ControlSchedule& sched, double g, long iter = 0);

/// Folds (1/m) sum_i ||grad l_i||^2 into eps0. The first call seeds eps0 with
/// the raw value; later calls discount by beta.
ControlSchedule update_eps_floor(ControlSchedule sched, const JacobianMatrix& jac);

struct Direction {
  Vector v;
  Vector gradF_part;
  Vector weighted_loss_part;
  /// Multipliers of the direction QP; absent when the control is off or the
  /// direction did not come from it.
  std::optional<DualMultipliers> lambda;
  Phi phi = Phi::off();
};

/// PNG direction from a precomputed Jacobian, grad F and stationarity g.
Direction png_direction(const JacobianMatrix& jac, const Vector& gradF, double g,
                        const ControlSchedule& sched, const QpSolverConfig& qp_cfg,
                        long iter = 0);

/// Convenience form: evaluates the Jacobian and g at theta.
Direction png_direction(const ObjectiveSet& objs, const ParameterVector& theta,
                        const Vector& gradF, const ControlSchedule& sched,
                        const QpSolverConfig& qp_cfg);

/// MGD: v = sum_i w_i grad l_i with w the min-norm weights.
Direction mgd_direction(const JacobianMatrix& jac, const QpSolverConfig& qp_cfg);
Direction mgd_direction(const ObjectiveSet& objs, const ParameterVector& theta,
                        const QpSolverConfig& qp_cfg);

/// v = sum_i w_i grad l_i for fixed weights.
Direction linear_scalarization_direction(const JacobianMatrix& jac, const SimplexWeights& weights);

/// theta - xi v.
ParameterVector step(const ParameterVector& theta, const Direction& dir, double xi);

enum class Mode { kPng, kMgd, kLinearScalarization, kGradientDescentOnF };

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);

struct OptimizerConfig {
  double step_size = 0.05;
  long max_iters = 1000;
  Mode mode = Mode::kPng;
  /// Linear mode only: one shared weight vector, or one per ensemble point.
  std::vector<SimplexWeights> scalarization_weights;
  std::uint64_t seed = 0;
  /// Ensembles: one eps floor per point (default) or a single floor fed by the
  /// mean over points.
  bool shared_eps_floor = false;
};

void validate(const OptimizerConfig& cfg);

struct TrajectoryRecord {
  long iter = 0;
  long point_id = 0;
  ParameterVector theta;
  LossVector losses;
  double g = 0.0;
  /// The applied control for PNG; off for the other modes.
  Phi phi = Phi::off();
  /// Criterion value of the whole ensemble at this iteration; NaN without a criterion.
  double F = 0.0;
  double v_norm = 0.0;
};

struct RunResult {
  /// Ordered by (iter, point_id); iterations 0..max_iters inclusive.
  std::vector<TrajectoryRecord> records;
  bool complete = true;
  /// Why the run stopped early when !complete.
  std::string failure;
};

/// Single-point run of the selected mode. `criterion` may be null for the MGD
/// and linear modes. Evaluation failures stop the run and return the records
/// gathered so far with `complete == false`.
RunResult run_single(const ObjectiveSet& objs, const Criterion* criterion,
                     const ParameterVector& theta0, const OptimizerConfig& opt_cfg,
                     const ControlSchedule& sched, const QpSolverConfig& qp_cfg);

/// Synchronous run of N points. The criterion sees all loss vectors at once;
/// each point then solves its own direction QP against its own gradients, g and phi.
RunResult run_ensemble(const ObjectiveSet& objs, const Criterion* criterion,
                       std::span<const ParameterVector> thetas0, const OptimizerConfig& opt_cfg,
                       const ControlSchedule& sched, const QpSolverConfig& qp_cfg);

/// N points with i.i.d. N(0, scale^2) entries.
std::vector<ParameterVector> random_gaussian_init(Eigen::Index n, int count, double scale,
                                                  std::uint64_t seed);

/// Runs `iters` linear-scalarization steps from each start. `weights` holds one
/// shared vector or one per point.
std::vector<ParameterVector> linear_scalarization_warmstart(
    const ObjectiveSet& objs, std::span<const ParameterVector> starts,
    const std::vector<SimplexWeights>& weights, long iters, double step_size);

}  // namespace png

#endif  // PNG_NAVIGATOR_HPP
