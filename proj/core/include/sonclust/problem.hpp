#pragma once

#include "sonclust/graph.hpp"
#include "sonclust/prox.hpp"

namespace sonclust {

/// Immutable problem instance: the data matrix, the fusion graph, and the
/// penalty spec. Safe to share across threads after construction.
struct Problem {
  Problem(DataMatrix A_in, WeightedGraph graph_in, double gamma);

  DataMatrix A;
  WeightedGraph graph;
  WeightedNormSpec spec;
  SparseMatrix lap;  // unweighted Laplacian of the graph, cached for B*B

  int d() const { return static_cast<int>(A.rows()); }
  int n() const { return static_cast<int>(A.cols()); }
};

/// Relative KKT residuals used for termination and reporting.
struct KKTResidual {
  double eta_P = 0.0;
  double eta_D = 0.0;
  double eta = 0.0;

  double max() const { return std::max(eta_P, std::max(eta_D, eta)); }
};

/// Primal/dual variables and diagnostics of a finished solve.
struct SolveResult {
  DataMatrix X;   // d x n centroids
  EdgeMatrix U;   // d x |E|
  EdgeMatrix Z;   // d x |E| multiplier
  DataMatrix V;   // d x n dual variable, = B*(Z) at optimality
  KKTResidual kkt;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  int outer_iters = 0;
  int total_newton_iters = 0;
  int total_cg_iters = 0;
  double final_sigma = 0.0;  // penalty in force when the run stopped
  bool converged = false;
};

/// Initial point for a solver run.
struct WarmStart {
  DataMatrix X;
  EdgeMatrix U;
  EdgeMatrix Z;
};

}  // namespace sonclust
