#include "png/objectives.hpp"

#include <cmath>
#include <utility>

namespace png {

ObjectiveSet::ObjectiveSet(Eigen::Index dimension, std::vector<Objective> objectives,
                           std::string name, std::optional<Box> box)
    : dimension_(dimension), objectives_(std::move(objectives)), name_(std::move(name)),
      box_(box) {
  if (dimension_ < 1) throw DimensionError("ObjectiveSet: dimension must be >= 1");
  if (objectives_.empty()) throw DimensionError("ObjectiveSet: needs at least one objective");
  for (const auto& o : objectives_) {
    if (!o.value || !o.gradient) throw std::invalid_argument("ObjectiveSet: empty evaluator");
  }
}

ParameterVector ObjectiveSet::clip(ParameterVector theta) const {
  if (box_) theta = theta.cwiseMax(box_->lower).cwiseMin(box_->upper);
  return theta;
}

LossVector evaluate_losses(const ObjectiveSet& objs, const ParameterVector& theta) {
  require_same_size(theta.size(), objs.dimension(), "evaluate_losses: theta");
  LossVector out(objs.num_objectives());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out(i) = objs.objective(i).value(theta);
    if (!std::isfinite(out(i))) {
      throw EvaluationError("objective " + std::to_string(i) + " of '" + objs.name() +
                            "' is not finite");
    }
  }
  return out;
}

JacobianMatrix evaluate_jacobian(const ObjectiveSet& objs, const ParameterVector& theta) {
  require_same_size(theta.size(), objs.dimension(), "evaluate_jacobian: theta");
  JacobianMatrix jac(objs.num_objectives(), objs.dimension());
  for (Eigen::Index i = 0; i < jac.rows(); ++i) {
    const Vector grad = objs.objective(i).gradient(theta);
    require_same_size(grad.size(), objs.dimension(), "evaluate_jacobian: gradient");
    if (!grad.allFinite()) {
      throw EvaluationError("gradient of objective " + std::to_string(i) + " of '" +
                            objs.name() + "' is not finite");
    }
    jac.row(i) = grad.transpose();
  }
  return jac;
}

bool weakly_dominates(const LossVector& b, const LossVector& a) {
  require_same_size(b.size(), a.size(), "weakly_dominates");
  return (b.array() <= a.array()).all();
}

Dominance dominates(const LossVector& a, const LossVector& b) {
  if (!weakly_dominates(b, a)) return Dominance::kIncomparable;
  return (b.array() < a.array()).any() ? Dominance::kStrict : Dominance::kWeak;
}

}  // namespace png
