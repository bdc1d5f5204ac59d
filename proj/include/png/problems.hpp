#ifndef PNG_PROBLEMS_HPP
#define PNG_PROBLEMS_HPP

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "png/objectives.hpp"

namespace png {

/// Samples K loss vectors on a problem's true Pareto front.
using ParetoFrontOracle = std::function<std::vector<LossVector>(int)>;

/// The constant vector n^{-1/2} (1, ..., 1); unit norm.
Vector toy_eta(Eigen::Index n);

/// Two losses l_1 = 1 - exp(-||theta - eta||^2) and l_2 = 1 - exp(-||theta + eta||^2).
/// The Pareto set is the segment {t eta : t in [-1, 1]}.
ObjectiveSet toy_problem(Eigen::Index n = 10);

/// Losses at theta = t eta (independent of n since ||eta|| = 1).
LossVector toy_front_point(double t);

/// K points on the toy front from an even grid over t in [-1, 1].
std::vector<LossVector> toy_front_oracle(int samples);

/// Standard ZDT2 on [0, 1]^n:
///   f_1 = x_1,  h = 1 + 9 sum_{j>=2} x_j / (n - 1),  f_2 = h (1 - (x_1 / h)^2).
/// Carries the unit box, so the engine clips after each step.
ObjectiveSet zdt2(Eigen::Index n = 30);

/// K points of f_2 = 1 - f_1^2 from an even grid over f_1 in [0, 1].
std::vector<LossVector> zdt2_front_oracle(int samples);

/// Problem lookup by name ("toy", "zdt2"). Throws std::invalid_argument on unknown names.
ObjectiveSet make_problem(std::string_view name, Eigen::Index n);
bool is_known_problem(std::string_view name);
Eigen::Index default_dimension(std::string_view name);
/// Benchmark default for the step size xi.
double default_step_size(std::string_view name);
std::optional<ParetoFrontOracle> front_oracle(std::string_view name);

}  // namespace png

#endif  // PNG_PROBLEMS_HPP
