#ifndef PNG_CRITERIA_HPP
#define PNG_CRITERIA_HPP

// Criterion functions F defined on loss space. Each returns its value and
// dF/dL per point; the navigator chains dF/dL through the Jacobian.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "png/types.hpp"

namespace png {

enum class CriterionKind {
  kWeightedDistance,
  kComplexCosine,
  kNonUniformity,
  kEnergyDistance,
};

std::string_view to_string(CriterionKind kind);
std::optional<CriterionKind> parse_criterion_kind(std::string_view name);

struct CriterionSpec {
  CriterionKind kind = CriterionKind::kWeightedDistance;
  /// Reference / preference vector r; unused by the energy distance.
  Vector reference;
};

struct CriterionEval {
  double value = 0.0;
  /// dF/dL_k for every point k, each of length m.
  std::vector<Vector> loss_space_grads;
};

/// Pairwise distances at or below this are treated as coincident points.
inline constexpr double kEnergySingularityGuard = 1e-8;

/// sum_i (l_i - r_i)^2 / r_i. Requires r > 0.
CriterionEval weighted_distance(const LossVector& losses, const Vector& reference);

/// -cos(pi (l_1 - r_1) / 2) + (cos(pi (l_2 - r_2)) + 1)^2, two objectives only.
/// The second term is read as a function of l_2.
CriterionEval complex_cosine(const LossVector& losses, const Vector& reference);

/// KL divergence of the normalized weighted losses r_i l_i / sum_s r_s l_s from
/// the uniform distribution. Zero exactly when all r_i l_i coincide.
CriterionEval non_uniformity(const LossVector& losses, const Vector& reference);

/// sum over ordered pairs i != j of ||L_i - L_j||^-2.
CriterionEval energy_distance(std::span<const LossVector> points,
                              double guard = kEnergySingularityGuard);

/// A validated criterion ready for the engine.
///
/// Single-point kinds applied to several points are summed (separable), so an
/// ensemble of one behaves exactly like a single run.
class Criterion {
 public:
  /// Throws DomainError for a reference vector the kind cannot accept and
  /// DimensionError when `num_objectives` is incompatible with the kind.
  Criterion(CriterionSpec spec, Eigen::Index num_objectives);

  const CriterionSpec& spec() const { return spec_; }
  bool is_ensemble() const { return spec_.kind == CriterionKind::kEnergyDistance; }

  CriterionEval evaluate(std::span<const LossVector> points) const;
  CriterionEval evaluate(const LossVector& losses) const;

 private:
  CriterionSpec spec_;
};

}  // namespace png

#endif  // PNG_CRITERIA_HPP
