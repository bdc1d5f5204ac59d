#include "png/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "png/objectives.hpp"

namespace png {
namespace {

Eigen::Index common_dimension(const ApproximationSet& a, const char* what) {
  if (a.empty()) throw std::invalid_argument(std::string(what) + ": empty set");
  const Eigen::Index m = a.front().size();
  for (const auto& p : a) {
    require_same_size(p.size(), m, what);
    if (!p.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
  }
  return m;
}

}  // namespace

double igd_plus(const ApproximationSet& reference_front, const ApproximationSet& approx) {
  const Eigen::Index m = common_dimension(reference_front, "igd_plus reference");
  require_same_size(common_dimension(approx, "igd_plus approximation"), m, "igd_plus");
  double total = 0.0;
  for (const auto& r : reference_front) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : approx) best = std::min(best, (a - r).cwiseMax(0.0).norm());
    total += best;
  }
  return total / static_cast<double>(reference_front.size());
}

double hypervolume_2d(const ApproximationSet& approx, const LossVector& reference) {
  const Eigen::Index m = common_dimension(approx, "hypervolume_2d");
  if (m != 2 || reference.size() != 2) {
    throw DimensionError("hypervolume_2d: only two objectives are supported");
  }
  std::vector<LossVector> inside;
  for (const auto& p : approx) {
    if (p(0) < reference(0) && p(1) < reference(1)) inside.push_back(p);
  }
  std::sort(inside.begin(), inside.end(), [](const LossVector& a, const LossVector& b) {
    return a(0) != b(0) ? a(0) < b(0) : a(1) < b(1);
  });
  double area = 0.0;
  double level = reference(1);
  for (const auto& p : inside) {
    if (p(1) < level) {
      area += (reference(0) - p(0)) * (level - p(1));
      level = p(1);
    }
  }
  return area;
}

ApproximationSet nondominated_filter(const ApproximationSet& points) {
  const Eigen::Index m = common_dimension(points, "nondominated_filter");
  const std::size_t count = points.size();
  std::vector<bool> keep(count, false);

  if (m == 2) {
    // Sweep in (l_1, l_2, index) order; a point survives only if it strictly
    // lowers the best l_2 seen so far.
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& pa = points[a];
      const auto& pb = points[b];
      if (pa(0) != pb(0)) return pa(0) < pb(0);
      if (pa(1) != pb(1)) return pa(1) < pb(1);
      return a < b;
    });
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t idx : order) {
      if (points[idx](1) < best) {
        keep[idx] = true;
        best = points[idx](1);
      }
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < count && !dominated; ++j) {
        if (i == j) continue;
        const Dominance rel = dominates(points[i], points[j]);
        dominated = rel == Dominance::kStrict || (rel == Dominance::kWeak && j < i);
      }
      keep[i] = !dominated;
    }
  }

  ApproximationSet out;
  for (std::size_t i = 0; i < count; ++i) {
    if (keep[i]) out.push_back(points[i]);
  }
  return out;
}

}  // namespace png
