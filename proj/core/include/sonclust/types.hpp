#pragma once

#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace sonclust {

/// d x n matrix, column j holds observation j (or its centroid).
using DataMatrix = Eigen::MatrixXd;

/// d x |E| matrix, column e corresponds to edge e of the associated graph.
using EdgeMatrix = Eigen::MatrixXd;

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Thrown when a solver meets an impossible numerical state: non-finite
/// iterates, negative curvature on a positive definite system, or a stalled
/// line search.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sonclust
