#ifndef PNG_TYPES_HPP
#define PNG_TYPES_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace png {

// Dense aliases. Kernels in simplex_qp.hpp are templated on the Eigen
// expression type; everything that touches the engine runs in double.
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;

/// Model parameters theta, length n.
using ParameterVector = Vector;
/// Objective values (l_1, ..., l_m).
using LossVector = Vector;
/// Row i holds the gradient of objective i; shape m x n.
using JacobianMatrix = Matrix;
/// Nonnegative weights summing to one.
using SimplexWeights = Vector;
/// Nonnegative multipliers of the direction QP.
using DualMultipliers = Vector;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An objective or criterion produced NaN/Inf, or was evaluated outside its domain.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The constrained direction problem has no solution (unbounded dual).
class InfeasibleDirection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_same_size(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(b) +
                         ", got " + std::to_string(a));
  }
}

}  // namespace png

#endif  // PNG_TYPES_HPP
