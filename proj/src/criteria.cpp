#include "png/criteria.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace png {
namespace {

void require_positive(const Vector& r, const char* who) {
  if (!(r.array() > 0).all() || !r.allFinite()) {
    throw DomainError(std::string(who) + ": reference entries must be finite and > 0");
  }
}

CriterionEval single(double value, Vector grad) {
  CriterionEval out;
  out.value = value;
  out.loss_space_grads.push_back(std::move(grad));
  return out;
}

}  // namespace

std::string_view to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::kWeightedDistance: return "weighted-distance";
    case CriterionKind::kComplexCosine: return "complex-cosine";
    case CriterionKind::kNonUniformity: return "non-uniformity";
    case CriterionKind::kEnergyDistance: return "energy-distance";
  }
  return "unknown";
}

std::optional<CriterionKind> parse_criterion_kind(std::string_view name) {
  for (auto kind : {CriterionKind::kWeightedDistance, CriterionKind::kComplexCosine,
                    CriterionKind::kNonUniformity, CriterionKind::kEnergyDistance}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

CriterionEval weighted_distance(const LossVector& losses, const Vector& reference) {
  require_same_size(reference.size(), losses.size(), "weighted_distance: reference");
  require_positive(reference, "weighted_distance");
  const Vector diff = losses - reference;
  const double value = (diff.array().square() / reference.array()).sum();
  return single(value, (2.0 * diff.array() / reference.array()).matrix());
}

CriterionEval complex_cosine(const LossVector& losses, const Vector& reference) {
  if (losses.size() != 2) throw DimensionError("complex_cosine: needs exactly two objectives");
  require_same_size(reference.size(), 2, "complex_cosine: reference");
  constexpr double pi = std::numbers::pi;
  const double a = pi * (losses(0) - reference(0)) / 2.0;
  const double b = pi * (losses(1) - reference(1));
  const double shifted = std::cos(b) + 1.0;
  Vector grad(2);
  grad << (pi / 2.0) * std::sin(a), -2.0 * pi * shifted * std::sin(b);
  return single(-std::cos(a) + shifted * shifted, std::move(grad));
}

CriterionEval non_uniformity(const LossVector& losses, const Vector& reference) {
  require_same_size(reference.size(), losses.size(), "non_uniformity: reference");
  require_positive(reference, "non_uniformity");
  const Vector weighted = reference.cwiseProduct(losses);
  if (!(weighted.array() > 0).all()) {
    throw DomainError("non_uniformity: weighted losses r_i * l_i must be > 0");
  }
  const double total = weighted.sum();
  const double m = static_cast<double>(losses.size());
  const Eigen::ArrayXd p = weighted.array() / total;
  const Eigen::ArrayXd log_ratio = (m * p).log();
  const double value = (p * log_ratio).sum();
  // dF/da_i = (log(m p_i) - F) / S, then chain a_i = r_i l_i.
  const Eigen::ArrayXd grad = reference.array() * (log_ratio - value) / total;
  return single(value, grad.matrix());
}

CriterionEval energy_distance(std::span<const LossVector> points, double guard) {
  if (points.size() < 2) throw DimensionError("energy_distance: needs at least two points");
  const Eigen::Index m = points.front().size();
  CriterionEval out;
  out.loss_space_grads.assign(points.size(), Vector::Zero(m));
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_same_size(points[i].size(), m, "energy_distance: point");
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const Vector diff = points[i] - points[j];
      const double sq = diff.squaredNorm();
      if (std::sqrt(sq) <= guard) {
        throw DomainError("energy_distance: points " + std::to_string(i) + " and " +
                          std::to_string(j) + " coincide in loss space");
      }
      out.value += 2.0 / sq;
      const Vector g = (-4.0 / (sq * sq)) * diff;
      out.loss_space_grads[i] += g;
      out.loss_space_grads[j] -= g;
    }
  }
  return out;
}

Criterion::Criterion(CriterionSpec spec, Eigen::Index num_objectives) : spec_(std::move(spec)) {
  switch (spec_.kind) {
    case CriterionKind::kWeightedDistance:
    case CriterionKind::kNonUniformity:
      require_same_size(spec_.reference.size(), num_objectives, "criterion reference");
      require_positive(spec_.reference, std::string(to_string(spec_.kind)).c_str());
      break;
    case CriterionKind::kComplexCosine:
      if (num_objectives != 2) throw DimensionError("complex-cosine needs exactly two objectives");
      require_same_size(spec_.reference.size(), 2, "criterion reference");
      if (!spec_.reference.allFinite()) throw DomainError("complex-cosine: reference not finite");
      break;
    case CriterionKind::kEnergyDistance:
      break;
  }
}

CriterionEval Criterion::evaluate(const LossVector& losses) const {
  switch (spec_.kind) {
    case CriterionKind::kWeightedDistance: return weighted_distance(losses, spec_.reference);
    case CriterionKind::kComplexCosine: return complex_cosine(losses, spec_.reference);
    case CriterionKind::kNonUniformity: return non_uniformity(losses, spec_.reference);
    case CriterionKind::kEnergyDistance:
      throw DimensionError("energy-distance is defined on an ensemble of at least two points");
  }
  throw std::logic_error("unknown criterion kind");
}

CriterionEval Criterion::evaluate(std::span<const LossVector> points) const {
  if (is_ensemble()) return energy_distance(points);
  CriterionEval out;
  for (const auto& losses : points) {
    CriterionEval one = evaluate(losses);
    out.value += one.value;
    out.loss_space_grads.push_back(std::move(one.loss_space_grads.front()));
  }
  return out;
}

}  // namespace png
