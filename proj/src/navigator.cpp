#include "png/navigator.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace png {
namespace {

const SimplexWeights& weights_for(const std::vector<SimplexWeights>& weights, std::size_t point) {
  if (weights.size() == 1) return weights.front();
  return weights.at(point);
}

void validate_weights(const SimplexWeights& w, Eigen::Index m) {
  require_same_size(w.size(), m, "scalarization weights");
  if ((w.array() < 0).any() || std::abs(w.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("scalarization weights must be nonnegative and sum to 1");
  }
}

}  // namespace

double ControlSchedule::alpha_at(long iter) const {
  if (alpha_decay_power == 0.0) return alpha;
  return alpha / std::pow(1.0 + static_cast<double>(iter), alpha_decay_power);
}

void validate(const ControlSchedule& sched) {
  if (!(sched.alpha >= 0) || !std::isfinite(sched.alpha)) {
    throw std::invalid_argument("alpha must be finite and >= 0");
  }
  if (!(sched.gamma > 0) || !std::isfinite(sched.gamma)) {
    throw std::invalid_argument("gamma must be finite and > 0");
  }
  if (!(sched.beta > 0 && sched.beta < 1)) throw std::invalid_argument("beta must lie in (0, 1)");
  if (!(sched.alpha_decay_power >= 0)) {
    throw std::invalid_argument("alpha_decay_power must be >= 0");
  }
  if (!(sched.eps0 >= 0) || !std::isfinite(sched.eps0)) {
    throw std::invalid_argument("eps0 must be finite and >= 0");
  }
}

Phi compute_phi(const ControlSchedule& sched, double g, long iter) {
  if (g <= sched.threshold()) return Phi::off();
  return Phi::bound(sched.alpha_at(iter) * g);
}

ControlSchedule update_eps_floor(ControlSchedule sched, const JacobianMatrix& jac) {
  if (jac.rows() == 0) throw DimensionError("update_eps_floor: empty Jacobian");
  const double raw = jac.squaredNorm() / static_cast<double>(jac.rows());
  if (!sched.initialized) {
    sched.eps0 = raw;
    sched.initialized = true;
  } else {
    sched.eps0 = sched.beta * sched.eps0 + (1.0 - sched.beta) * raw;
  }
  return sched;
}

Direction png_direction(const JacobianMatrix& jac, const Vector& gradF, double g,
                        const ControlSchedule& sched, const QpSolverConfig& qp_cfg, long iter) {
  require_same_size(gradF.size(), jac.cols(), "png_direction: gradF");
  Direction dir;
  dir.phi = compute_phi(sched, g, iter);
  if (dir.phi.is_off()) {
    dir.v = gradF;
    dir.gradF_part = gradF;
    dir.weighted_loss_part = Vector::Zero(gradF.size());
    return dir;
  }
  const auto dual = png_dual_solve(jac, gradF, dir.phi.value(), qp_cfg);
  auto parts = assemble_direction(jac, gradF, dual.lambda);
  dir.v = std::move(parts.v);
  dir.gradF_part = std::move(parts.gradF_part);
  dir.weighted_loss_part = std::move(parts.weighted_loss_part);
  dir.lambda = dual.lambda;
  return dir;
}

Direction png_direction(const ObjectiveSet& objs, const ParameterVector& theta,
                        const Vector& gradF, const ControlSchedule& sched,
                        const QpSolverConfig& qp_cfg) {
  const JacobianMatrix jac = evaluate_jacobian(objs, theta);
  const double g = min_norm_weights(jac, qp_cfg).g;
  return png_direction(jac, gradF, g, sched, qp_cfg);
}

Direction mgd_direction(const JacobianMatrix& jac, const QpSolverConfig& qp_cfg) {
  const auto res = min_norm_weights(jac, qp_cfg);
  return linear_scalarization_direction(jac, res.weights);
}

Direction mgd_direction(const ObjectiveSet& objs, const ParameterVector& theta,
                        const QpSolverConfig& qp_cfg) {
  return mgd_direction(evaluate_jacobian(objs, theta), qp_cfg);
}

Direction linear_scalarization_direction(const JacobianMatrix& jac, const SimplexWeights& weights) {
  require_same_size(weights.size(), jac.rows(), "linear_scalarization_direction: weights");
  Direction dir;
  dir.weighted_loss_part = jac.transpose() * weights;
  dir.gradF_part = Vector::Zero(jac.cols());
  dir.v = dir.weighted_loss_part;
  return dir;
}

ParameterVector step(const ParameterVector& theta, const Direction& dir, double xi) {
  require_same_size(dir.v.size(), theta.size(), "step: direction");
  if (!(xi > 0)) throw std::invalid_argument("step: xi must be > 0");
  return theta - xi * dir.v;
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kPng: return "png";
    case Mode::kMgd: return "mgd";
    case Mode::kLinearScalarization: return "linear-scalarization";
    case Mode::kGradientDescentOnF: return "gradient-descent-on-F";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (auto mode : {Mode::kPng, Mode::kMgd, Mode::kLinearScalarization, Mode::kGradientDescentOnF}) {
    if (name == to_string(mode)) return mode;
  }
  return std::nullopt;
}

void validate(const OptimizerConfig& cfg) {
  if (!(cfg.step_size > 0) || !std::isfinite(cfg.step_size)) {
    throw std::invalid_argument("step_size must be finite and > 0");
  }
  if (cfg.max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
  if (cfg.mode == Mode::kLinearScalarization && cfg.scalarization_weights.empty()) {
    throw std::invalid_argument("linear-scalarization mode needs scalarization_weights");
  }
}

RunResult run_single(const ObjectiveSet& objs, const Criterion* criterion,
                     const ParameterVector& theta0, const OptimizerConfig& opt_cfg,
                     const ControlSchedule& sched, const QpSolverConfig& qp_cfg) {
  if (criterion != nullptr && criterion->is_ensemble()) {
    throw std::invalid_argument("run_single needs a single-point criterion");
  }
  return run_ensemble(objs, criterion, std::span(&theta0, 1), opt_cfg, sched, qp_cfg);
}

RunResult run_ensemble(const ObjectiveSet& objs, const Criterion* criterion,
                       std::span<const ParameterVector> thetas0, const OptimizerConfig& opt_cfg,
                       const ControlSchedule& sched, const QpSolverConfig& qp_cfg) {
  validate(opt_cfg);
  validate(sched);
  validate(qp_cfg);
  const std::size_t count = thetas0.size();
  const Eigen::Index m = objs.num_objectives();
  if (count == 0) throw std::invalid_argument("run_ensemble: no starting points");
  const bool needs_criterion =
      opt_cfg.mode == Mode::kPng || opt_cfg.mode == Mode::kGradientDescentOnF;
  if (needs_criterion && criterion == nullptr) {
    throw std::invalid_argument(std::string(to_string(opt_cfg.mode)) + " mode needs a criterion");
  }
  if (criterion != nullptr && criterion->is_ensemble() && count < 2) {
    throw std::invalid_argument("ensemble criterion needs at least two points");
  }
  if (opt_cfg.mode == Mode::kLinearScalarization) {
    if (opt_cfg.scalarization_weights.size() != 1 && opt_cfg.scalarization_weights.size() != count) {
      throw std::invalid_argument("scalarization_weights: need one vector or one per point");
    }
    for (const auto& w : opt_cfg.scalarization_weights) validate_weights(w, m);
  }
  for (const auto& t : thetas0) require_same_size(t.size(), objs.dimension(), "initial theta");

  RunResult result;
  result.records.reserve(count * static_cast<std::size_t>(opt_cfg.max_iters + 1));
  std::vector<ParameterVector> thetas(thetas0.begin(), thetas0.end());
  std::vector<ControlSchedule> schedules(opt_cfg.shared_eps_floor ? 1 : count, sched);
  std::vector<LossVector> losses(count);
  std::vector<JacobianMatrix> jacobians(count);
  std::vector<Direction> directions(count);

  for (long iter = 0;; ++iter) {
    try {
      for (std::size_t i = 0; i < count; ++i) {
        losses[i] = evaluate_losses(objs, thetas[i]);
        jacobians[i] = evaluate_jacobian(objs, thetas[i]);
      }

      double f_value = std::numeric_limits<double>::quiet_NaN();
      std::vector<Vector> grad_f(count);
      if (criterion != nullptr) {
        const CriterionEval eval = criterion->evaluate(std::span<const LossVector>(losses));
        if (!std::isfinite(eval.value)) throw EvaluationError("criterion value is not finite");
        f_value = eval.value;
        for (std::size_t i = 0; i < count; ++i) {
          grad_f[i] = jacobians[i].transpose() * eval.loss_space_grads[i];
          if (!grad_f[i].allFinite()) throw EvaluationError("criterion gradient is not finite");
        }
      }

      if (opt_cfg.shared_eps_floor) {
        // One floor fed by the mean over points: stack every Jacobian.
        JacobianMatrix stacked(m * static_cast<Eigen::Index>(count), objs.dimension());
        for (std::size_t i = 0; i < count; ++i) {
          stacked.middleRows(m * static_cast<Eigen::Index>(i), m) = jacobians[i];
        }
        schedules[0] = update_eps_floor(schedules[0], stacked);
      }

      for (std::size_t i = 0; i < count; ++i) {
        const JacobianMatrix& jac = jacobians[i];
        const auto hull = min_norm_weights(jac, qp_cfg);
        ControlSchedule& own = schedules[opt_cfg.shared_eps_floor ? 0 : i];
        if (!opt_cfg.shared_eps_floor) own = update_eps_floor(own, jac);

        switch (opt_cfg.mode) {
          case Mode::kPng:
            directions[i] = png_direction(jac, grad_f[i], hull.g, own, qp_cfg, iter);
            break;
          case Mode::kMgd:
            directions[i] = linear_scalarization_direction(jac, hull.weights);
            break;
          case Mode::kLinearScalarization:
            directions[i] =
                linear_scalarization_direction(jac, weights_for(opt_cfg.scalarization_weights, i));
            break;
          case Mode::kGradientDescentOnF:
            directions[i] = Direction{grad_f[i], grad_f[i], Vector::Zero(jac.cols()),
                                      std::nullopt, Phi::off()};
            break;
        }

        TrajectoryRecord rec;
        rec.iter = iter;
        rec.point_id = static_cast<long>(i);
        rec.theta = thetas[i];
        rec.losses = losses[i];
        rec.g = hull.g;
        rec.phi = directions[i].phi;
        rec.F = f_value;
        rec.v_norm = directions[i].v.norm();
        result.records.push_back(std::move(rec));
      }
    } catch (const std::exception& e) {
      // Drop any records of the failing iteration so every kept iteration is whole.
      while (!result.records.empty() && result.records.back().iter == iter) {
        result.records.pop_back();
      }
      result.complete = false;
      result.failure = "iteration " + std::to_string(iter) + ": " + e.what();
      return result;
    }

    if (iter >= opt_cfg.max_iters) break;
    for (std::size_t i = 0; i < count; ++i) {
      thetas[i] = objs.clip(step(thetas[i], directions[i], opt_cfg.step_size));
      if (!thetas[i].allFinite()) {
        result.complete = false;
        result.failure = "iteration " + std::to_string(iter) + ": parameters became non-finite";
        return result;
      }
    }
  }
  return result;
}

std::vector<ParameterVector> random_gaussian_init(Eigen::Index n, int count, double scale,
                                                  std::uint64_t seed) {
  if (n < 1 || count < 1) throw std::invalid_argument("random_gaussian_init: empty request");
  if (!(scale >= 0)) throw std::invalid_argument("random_gaussian_init: scale must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<ParameterVector> out;
  for (int k = 0; k < count; ++k) {
    ParameterVector theta(n);
    for (Eigen::Index j = 0; j < n; ++j) theta(j) = scale * dist(rng);
    out.push_back(std::move(theta));
  }
  return out;
}

std::vector<ParameterVector> linear_scalarization_warmstart(
    const ObjectiveSet& objs, std::span<const ParameterVector> starts,
    const std::vector<SimplexWeights>& weights, long iters, double step_size) {
  if (weights.size() != 1 && weights.size() != starts.size()) {
    throw std::invalid_argument("warm start: need one weight vector or one per point");
  }
  if (!(step_size > 0)) throw std::invalid_argument("warm start: step_size must be > 0");
  for (const auto& w : weights) validate_weights(w, objs.num_objectives());
  std::vector<ParameterVector> out(starts.begin(), starts.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (long k = 0; k < iters; ++k) {
      const JacobianMatrix jac = evaluate_jacobian(objs, out[i]);
      out[i] = objs.clip(step(out[i], linear_scalarization_direction(jac, weights_for(weights, i)),
                              step_size));
    }
  }
  return out;
}

}  // namespace png
