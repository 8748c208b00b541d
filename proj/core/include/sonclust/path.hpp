#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sonclust/iadmm.hpp"
#include "sonclust/ssnal.hpp"

namespace sonclust {

/// Settings for a clustering-path run over an increasing gamma grid.
struct PathConfig {
  std::vector<double> gamma_grid;  // strictly increasing, positive
  bool warm_start = true;          // chain each solve from the previous optimum
  SolverConfig solver;
  double cluster_tol = 1e-5;  // relative centroid merge tolerance
  int warmstart_sweeps = 100; // ADMM sweeps before the first grid point (0 = off)
  AdmmConfig admm;
};

struct ClusterAssignment {
  std::vector<int> labels;  // per observation, ids 0..num_clusters-1
  int num_clusters = 0;
};

/// Solve record for one grid point.
struct PathPoint {
  double gamma = 0.0;
  DataMatrix X;
  std::vector<int> assignment;
  int num_clusters = 0;
  KKTResidual kkt;
  double primal_obj = 0.0;
  int outer_iters = 0;
  int newton_iters = 0;
  int cg_iters = 0;
  double solve_seconds = 0.0;      // SSNAL time
  double warmstart_seconds = 0.0;  // ADMM time (first grid point only)
  bool converged = false;
};

struct ClusteringPath {
  std::vector<PathPoint> points;
  /// Set when a solver failure truncated the path after the last recorded
  /// grid point.
  std::optional<std::string> error;
};

/// Builds the k-NN graph once and traces the path over config.gamma_grid.
/// With warm_start, the first gamma is initialized by warmstart_sweeps
/// ADMM sweeps and each later gamma by the previous optimum; otherwise
/// every gamma starts from the default initial point.
ClusteringPath clustering_path(const DataMatrix& A, int k, double phi, const PathConfig& config);

/// Union-find over graph edges: observations i, j merge when
/// ||x_i - x_j|| <= cluster_tol * (1 + max(||x_i||, ||x_j||)). Cluster ids
/// are ordered by each cluster's smallest member index. all_pairs audits
/// the same rule over every pair instead of just graph edges.
ClusterAssignment extract_clusters(const DataMatrix& X_star, const WeightedGraph& graph,
                                   double cluster_tol, bool all_pairs = false);

}  // namespace sonclust
