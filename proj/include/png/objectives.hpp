#ifndef PNG_OBJECTIVES_HPP
#define PNG_OBJECTIVES_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "png/types.hpp"

namespace png {

/// One differentiable loss l(theta) with its analytic gradient.
/// Both callables must be pure.
struct Objective {
  std::function<double(const ParameterVector&)> value;
  std::function<Vector(const ParameterVector&)> gradient;
};

/// Axis-aligned bounds applied by clipping after each step.
struct Box {
  double lower = 0.0;
  double upper = 1.0;
};

/// m objectives over an n-dimensional parameter. Immutable after construction,
/// so a single instance may be shared by concurrent evaluations.
class ObjectiveSet {
 public:
  ObjectiveSet(Eigen::Index dimension, std::vector<Objective> objectives,
               std::string name = {}, std::optional<Box> box = std::nullopt);

  Eigen::Index num_objectives() const { return static_cast<Eigen::Index>(objectives_.size()); }
  Eigen::Index dimension() const { return dimension_; }
  const std::string& name() const { return name_; }
  const Objective& objective(Eigen::Index i) const { return objectives_.at(static_cast<std::size_t>(i)); }

  const std::optional<Box>& box() const { return box_; }
  /// Clamps theta into the box; identity when the problem has none.
  ParameterVector clip(ParameterVector theta) const;

 private:
  Eigen::Index dimension_;
  std::vector<Objective> objectives_;
  std::string name_;
  std::optional<Box> box_;
};

/// (l_1(theta), ..., l_m(theta)). Throws DimensionError on a wrong-length theta
/// and EvaluationError if any value is NaN or infinite.
LossVector evaluate_losses(const ObjectiveSet& objs, const ParameterVector& theta);

/// Stacks the objective gradients row-wise (m x n).
JacobianMatrix evaluate_jacobian(const ObjectiveSet& objs, const ParameterVector& theta);

/// Relation of `b` to `a` under minimization.
enum class Dominance {
  kStrict,        // b <= a componentwise and b != a
  kWeak,          // b == a
  kIncomparable,  // neither
};

Dominance dominates(const LossVector& a, const LossVector& b);

/// b <= a in every coordinate.
bool weakly_dominates(const LossVector& b, const LossVector& a);

}  // namespace png

#endif  // PNG_OBJECTIVES_HPP
