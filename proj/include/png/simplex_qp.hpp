#ifndef PNG_SIMPLEX_QP_HPP
#define PNG_SIMPLEX_QP_HPP

// Small dense QPs behind the navigator:
//
//   min-norm point:  min_{w in simplex} || J^T w ||^2           (stationarity g and MGD)
//   direction dual:  max_{lambda >= 0} -1/2 || gradF + J^T lambda ||^2 + phi * sum(lambda)
//
// Both are solved by projected gradient on the m x m Gram matrix J J^T with a
// fixed step 1/L, where L is the Gershgorin bound on the Gram spectrum. The
// iterate is then refined by an equality-constrained solve on its support,
// which is accepted only if it satisfies the KKT conditions.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "png/types.hpp"

namespace png {

struct QpSolverConfig {
  int max_iters = 100;
  /// Absolute max-norm change between consecutive iterates.
  double tol = 1e-8;
  /// Polish the projected-gradient iterate on its support.
  bool refine_active_set = true;
  /// Dual multipliers beyond this magnitude are treated as divergence.
  double divergence_cap = 1e8;
};

inline void validate(const QpSolverConfig& cfg) {
  if (cfg.max_iters < 1) throw std::invalid_argument("QpSolverConfig: max_iters must be >= 1");
  if (!(cfg.tol > 0)) throw std::invalid_argument("QpSolverConfig: tol must be > 0");
}

template <typename Scalar>
struct MinNormResult {
  VectorX<Scalar> weights;
  /// Attained squared norm || J^T w ||^2.
  Scalar g = 0;
  int iterations = 0;
  /// False when max_iters was hit and no refinement certified the optimum.
  bool converged = false;
};

template <typename Scalar>
struct DualResult {
  VectorX<Scalar> lambda;
  int iterations = 0;
  bool converged = false;
};

/// Direction v = gradF + J^T lambda together with its two summands.
template <typename Scalar>
struct AssembledDirection {
  VectorX<Scalar> v;
  VectorX<Scalar> gradF_part;
  VectorX<Scalar> weighted_loss_part;
};

namespace detail {

/// Max absolute row sum; an upper bound on the largest eigenvalue of a symmetric matrix.
template <typename Derived>
typename Derived::Scalar gershgorin_bound(const Eigen::MatrixBase<Derived>& gram) {
  if (gram.size() == 0) return 0;
  return gram.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Scalar>
Scalar kkt_scale(const MatrixX<Scalar>& gram) {
  const Scalar diag = gram.size() ? gram.diagonal().cwiseAbs().maxCoeff() : Scalar(0);
  return std::max<Scalar>(Scalar(1), diag);
}

/// Min-norm point over the simplex with Gram matrix `gram`, support refinement included.
template <typename Scalar>
MinNormResult<Scalar> min_norm_on_gram(const MatrixX<Scalar>& gram, const QpSolverConfig& cfg);

/// Outcome of the reduced problem on a support set.
template <typename Scalar>
struct ReducedStep {
  /// Minimizer of the reduced problem; empty when it is unbounded.
  VectorX<Scalar> solution;
  /// When unbounded: a null-space direction of strictly decreasing objective.
  VectorX<Scalar> ray;
};

/// Solves the reduced problem on `support` with the other coordinates fixed at
/// zero. With `simplex` set the reduced weights are constrained to sum to one
/// and `lin` is ignored (that problem is bounded below by zero).
template <typename Scalar>
ReducedStep<Scalar> solve_on_support(const MatrixX<Scalar>& gram, const VectorX<Scalar>& lin,
                                     const std::vector<Eigen::Index>& support, bool simplex) {
  const Eigen::Index m = gram.rows();
  const auto k = static_cast<Eigen::Index>(support.size());
  ReducedStep<Scalar> out;
  out.solution = VectorX<Scalar>::Zero(m);
  if (k == 0) return out;
  const Eigen::Index dim = simplex ? k + 1 : k;
  MatrixX<Scalar> kkt = MatrixX<Scalar>::Zero(dim, dim);
  VectorX<Scalar> rhs = VectorX<Scalar>::Zero(dim);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) kkt(r, c) = gram(support[r], support[c]);
    if (!simplex) rhs(r) = -lin(support[r]);
  }
  if (simplex) {
    kkt.block(0, k, k, 1).setOnes();
    kkt.block(k, 0, 1, k).setOnes();
    rhs(k) = 1;
  }
  const Scalar scale = kkt_scale(gram);
  const Eigen::CompleteOrthogonalDecomposition<MatrixX<Scalar>> dec(kkt);
  const VectorX<Scalar> sol = dec.solve(rhs);
  if (sol.allFinite() && (kkt * sol - rhs).cwiseAbs().maxCoeff() <= Scalar(1e-9) * scale) {
    for (Eigen::Index i = 0; i < k; ++i) out.solution(support[i]) = sol(i);
    return out;
  }
  out.solution.resize(0);
  if (simplex) return out;

  // Singular and inconsistent: the linear term has a component in the null
  // space of the reduced Gram matrix, along which the objective decreases.
  const Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(kkt);
  VectorX<Scalar> ray_local = VectorX<Scalar>::Zero(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (eig.eigenvalues()(j) <= Scalar(1e-10) * scale) {
      const auto u = eig.eigenvectors().col(j);
      ray_local += u * u.dot(rhs);
    }
  }
  out.ray = VectorX<Scalar>::Zero(m);
  for (Eigen::Index i = 0; i < k; ++i) out.ray(support[i]) = ray_local(i);
  return out;
}

/// Feasible active-set refinement seeded with a projected-gradient iterate.
///
/// Minimizes 1/2 x^T G x + lin^T x over x >= 0 (and sum(x) = 1 when `simplex`).
/// Each round solves the reduced problem on the current support. A reduced
/// solution with negative entries (or an unbounded reduced problem) is followed
/// only up to the first coordinate that hits zero, which then leaves the
/// support. Once the reduced solution is nonnegative, the coordinate with the
/// most negative reduced gradient enters. Returns true when the KKT conditions
/// hold, in which case `x` holds the certified optimum.
template <typename Scalar>
bool refine_active_set(const MatrixX<Scalar>& gram, const VectorX<Scalar>& lin, bool simplex,
                       VectorX<Scalar>& x) {
  const Eigen::Index m = gram.rows();
  const Scalar slack = Scalar(1e-12) * kkt_scale(gram);
  std::vector<bool> in(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) in[i] = x(i) > 0;
  VectorX<Scalar> cur = x;

  const Eigen::Index max_rounds = 8 * m + 16;
  for (Eigen::Index round = 0; round < max_rounds; ++round) {
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (in[i]) support.push_back(i);
    }
    if (simplex && support.empty()) return false;
    const ReducedStep<Scalar> reduced = solve_on_support(gram, lin, support, simplex);

    // Direction to follow from the current point, and the largest step allowed.
    VectorX<Scalar> dir;
    Scalar limit = 1;
    if (reduced.solution.size() != 0) {
      dir = reduced.solution - cur;
    } else if (reduced.ray.size() != 0 && reduced.ray.squaredNorm() > 0) {
      dir = reduced.ray;
      limit = std::numeric_limits<Scalar>::infinity();
    } else {
      return false;
    }

    Scalar step = limit;
    Eigen::Index blocking = -1;
    for (Eigen::Index i : support) {
      if (dir(i) < 0) {
        const Scalar t = std::max<Scalar>(cur(i), 0) / -dir(i);
        if (t < step) {
          step = t;
          blocking = i;
        }
      }
    }
    if (blocking >= 0) {
      cur += step * dir;
      for (Eigen::Index i : support) {
        if (i == blocking || cur(i) <= 0) {
          cur(i) = 0;
          in[i] = false;
        }
      }
      if (simplex) cur /= cur.sum();
      continue;
    }
    if (!std::isfinite(step)) return false;  // unbounded: primal infeasible

    cur = reduced.solution;
    // Reduced gradient; for the simplex the reference level is the multiplier
    // of the sum constraint, x^T G x.
    const VectorX<Scalar> grad = gram * cur + lin;
    const Scalar level = simplex ? cur.dot(gram * cur) : Scalar(0);
    Eigen::Index enter = -1;
    Scalar worst = -slack;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (in[i]) continue;
      const Scalar gap = grad(i) - level;
      if (gap < worst) {
        worst = gap;
        enter = i;
      }
    }
    if (enter < 0) {
      x = cur;
      return true;
    }
    in[enter] = true;
  }
  return false;
}

}  // namespace detail

/// Euclidean projection onto the probability simplex.
///
/// Uses the pivot-elimination scheme: shift all coordinates by a common
/// threshold, drop those that fall to zero, and repeat until the active set is
/// stable. Terminates in at most m passes.
template <typename Derived>
VectorX<typename Derived::Scalar> project_simplex(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = x.size();
  if (m == 0) throw DimensionError("project_simplex: empty input");
  if (!x.allFinite()) throw DomainError("project_simplex: non-finite input");

  std::vector<bool> active(static_cast<std::size_t>(m), true);
  Eigen::Index count = m;
  Scalar tau = 0;
  for (;;) {
    Scalar sum = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (active[i]) sum += x(i);
    }
    tau = (sum - Scalar(1)) / static_cast<Scalar>(count);
    bool changed = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (active[i] && x(i) - tau <= 0) {
        active[i] = false;
        --count;
        changed = true;
      }
    }
    if (!changed || count == 0) break;
  }

  VectorX<Scalar> out(m);
  for (Eigen::Index i = 0; i < m; ++i) out(i) = active[i] ? x(i) - tau : Scalar(0);
  if (count == 0) {
    // Only reachable through rounding; fall back to the largest coordinate.
    out.setZero();
    Eigen::Index best = 0;
    x.maxCoeff(&best);
    out(best) = 1;
  }
  return out;
}

template <typename Scalar>
MinNormResult<Scalar> detail::min_norm_on_gram(const MatrixX<Scalar>& gram,
                                               const QpSolverConfig& cfg) {
  validate(cfg);
  const Eigen::Index m = gram.rows();
  MinNormResult<Scalar> res;
  res.weights = VectorX<Scalar>::Constant(m, Scalar(1) / static_cast<Scalar>(m));
  const auto objective = [&](const VectorX<Scalar>& w) {
    return std::max<Scalar>(Scalar(0), w.dot(gram * w));
  };

  if (m == 1) {
    res.g = objective(res.weights);
    res.converged = true;
    return res;
  }
  const Scalar lip = gershgorin_bound(gram);
  if (!(lip > 0)) {
    res.converged = true;
    return res;
  }

  VectorX<Scalar>& w = res.weights;
  for (res.iterations = 0; res.iterations < cfg.max_iters;) {
    VectorX<Scalar> next = project_simplex(w - (gram * w) / lip);
    const Scalar change = (next - w).cwiseAbs().maxCoeff();
    w = std::move(next);
    ++res.iterations;
    if (change < cfg.tol) {
      res.converged = true;
      break;
    }
  }

  if (cfg.refine_active_set) {
    VectorX<Scalar> cand = w;
    const VectorX<Scalar> no_lin = VectorX<Scalar>::Zero(m);
    if (refine_active_set<Scalar>(gram, no_lin, true, cand) &&
        objective(cand) <= objective(w) + Scalar(1e-12) * kkt_scale(gram)) {
      w = cand;
      res.converged = true;
    }
  }
  res.g = objective(w);
  return res;
}

/// Minimum-norm convex combination of the rows of `jac`.
/// Returns the weights and g = || sum_i w_i grad_i ||^2.
template <typename Derived>
MinNormResult<typename Derived::Scalar> min_norm_weights(const Eigen::MatrixBase<Derived>& jac,
                                                         const QpSolverConfig& cfg = {}) {
  using Scalar = typename Derived::Scalar;
  if (jac.rows() == 0) throw DimensionError("min_norm_weights: empty Jacobian");
  const MatrixX<Scalar> gram = jac * jac.transpose();
  MinNormResult<Scalar> res = detail::min_norm_on_gram<Scalar>(gram, cfg);
  // Recompute from the primal vector so g is a true squared norm.
  res.g = (jac.transpose() * res.weights).squaredNorm();
  return res;
}

/// Multipliers of the constrained direction problem
///
///   min_v 1/2 || gradF - v ||^2   s.t.  grad_i^T v >= phi  for all i,
///
/// found by projected gradient ascent on its dual starting from lambda = 0.
/// Throws InfeasibleDirection when phi > 0 and zero lies in the convex hull of
/// the gradients, or when the multipliers exceed `cfg.divergence_cap`.
template <typename DerivedJ, typename DerivedF>
DualResult<typename DerivedJ::Scalar> png_dual_solve(const Eigen::MatrixBase<DerivedJ>& jac,
                                                     const Eigen::MatrixBase<DerivedF>& gradF,
                                                     typename DerivedJ::Scalar phi,
                                                     const QpSolverConfig& cfg = {}) {
  using Scalar = typename DerivedJ::Scalar;
  validate(cfg);
  if (jac.rows() == 0) throw DimensionError("png_dual_solve: empty Jacobian");
  require_same_size(gradF.size(), jac.cols(), "png_dual_solve: gradF");
  if (!std::isfinite(phi)) throw DomainError("png_dual_solve: phi must be finite");

  const Eigen::Index m = jac.rows();
  const MatrixX<Scalar> gram = jac * jac.transpose();
  // Dual objective in minimization form: 1/2 l^T G l + lin^T l.
  const VectorX<Scalar> lin = (jac * gradF).array() - phi;

  if (phi > 0) {
    // Farkas: infeasible iff some convex combination of the gradients vanishes.
    const auto hull = detail::min_norm_on_gram<Scalar>(gram, cfg);
    if (hull.g <= Scalar(1e-14) * detail::kkt_scale(gram)) {
      throw InfeasibleDirection("png_dual_solve: no direction reaches descent rate phi = " +
                                std::to_string(phi) + " (Pareto-stationary gradients)");
    }
  }

  DualResult<Scalar> res;
  res.lambda = VectorX<Scalar>::Zero(m);
  const Scalar lip = detail::gershgorin_bound(gram);
  if (!(lip > 0)) {
    // All gradients vanish: only phi <= 0 is feasible, and then nothing binds.
    res.converged = true;
    return res;
  }

  VectorX<Scalar>& lam = res.lambda;
  for (res.iterations = 0; res.iterations < cfg.max_iters;) {
    VectorX<Scalar> next = (lam - (gram * lam + lin) / lip).cwiseMax(Scalar(0));
    const Scalar change = (next - lam).cwiseAbs().maxCoeff();
    lam = std::move(next);
    ++res.iterations;
    if (lam.maxCoeff() > cfg.divergence_cap) {
      throw InfeasibleDirection("png_dual_solve: multipliers diverged beyond " +
                                std::to_string(cfg.divergence_cap));
    }
    if (change < cfg.tol) {
      res.converged = true;
      break;
    }
  }

  if (cfg.refine_active_set && detail::refine_active_set<Scalar>(gram, lin, false, lam)) {
    res.converged = true;
    if (lam.maxCoeff() > cfg.divergence_cap) {
      throw InfeasibleDirection("png_dual_solve: multipliers diverged beyond " +
                                std::to_string(cfg.divergence_cap));
    }
  }
  return res;
}

/// v = gradF + J^T lambda.
template <typename DerivedJ, typename DerivedF, typename DerivedL>
AssembledDirection<typename DerivedJ::Scalar> assemble_direction(
    const Eigen::MatrixBase<DerivedJ>& jac, const Eigen::MatrixBase<DerivedF>& gradF,
    const Eigen::MatrixBase<DerivedL>& lambda) {
  require_same_size(gradF.size(), jac.cols(), "assemble_direction: gradF");
  require_same_size(lambda.size(), jac.rows(), "assemble_direction: lambda");
  AssembledDirection<typename DerivedJ::Scalar> out;
  out.gradF_part = gradF;
  out.weighted_loss_part = jac.transpose() * lambda;
  out.v = out.gradF_part + out.weighted_loss_part;
  return out;
}

}  // namespace png

#endif  // PNG_SIMPLEX_QP_HPP
