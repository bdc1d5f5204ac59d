#ifndef PNG_METRICS_HPP
#define PNG_METRICS_HPP

#include <vector>

#include "png/types.hpp"

namespace png {

using ApproximationSet = std::vector<LossVector>;

/// IGD+: mean over reference points r of min_a || max(a - r, 0) ||.
/// The reference samples act as a uniform counting measure on the front.
double igd_plus(const ApproximationSet& reference_front, const ApproximationSet& approx);

/// Area dominated by `approx` and bounded by `reference` (two objectives).
/// Points with a coordinate at or beyond the reference contribute nothing.
double hypervolume_2d(const ApproximationSet& approx, const LossVector& reference);

/// Mutually non-dominated subset in input order. Of several identical points
/// the first is kept.
ApproximationSet nondominated_filter(const ApproximationSet& points);

}  // namespace png

#endif  // PNG_METRICS_HPP
