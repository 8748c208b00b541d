#pragma once

#include <vector>

#include "sonclust/types.hpp"

namespace sonclust {

/// Undirected edge with 0-based endpoints, stored with i < j.
struct Edge {
  int i = 0;
  int j = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted undirected graph over n observation nodes. The edge list is
/// sorted lexicographically by (i, j) and the position of an edge in the
/// list is its column index in any associated EdgeMatrix.
class WeightedGraph {
 public:
  /// Validates and takes ownership of an edge set. Requires 0 <= i < j < n,
  /// no duplicate pairs, lexicographic order, one weight per edge. Edges
  /// with weight <= 0 are dropped.
  WeightedGraph(int num_nodes, std::vector<Edge> edges, Vector weights);

  int num_nodes() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Vector& weights() const { return weights_; }
  const std::vector<int>& node_degrees() const { return degrees_; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  Vector weights_;
  std::vector<int> degrees_;
};

/// Builds the symmetrized k-nearest-neighbor graph of the columns of A.
/// Edge (i, j) is kept when j is among i's k nearest neighbors (Euclidean)
/// or i is among j's, with weight exp(-phi * ||a_i - a_j||^2). Neighbor
/// ties are broken toward the smaller node index, so the result is a
/// deterministic function of (A, k, phi).
WeightedGraph build_knn_graph(const DataMatrix& A, int k, double phi);

/// B(X): column e = x_i - x_j for edge e = (i, j).
EdgeMatrix apply_B(const WeightedGraph& g, const DataMatrix& X);

/// B*(Z): node i accumulates +Z^(e), node j accumulates -Z^(e) over the
/// edges e = (i, j) incident to it. Adjoint of apply_B under the Frobenius
/// inner product.
DataMatrix apply_B_adjoint(const WeightedGraph& g, const EdgeMatrix& Z);

/// Unweighted graph Laplacian L = diag(J e) - J of the 0/1 adjacency J.
/// Satisfies apply_B_adjoint(g, apply_B(g, X)) = X * L.
SparseMatrix laplacian(const WeightedGraph& g);

/// Laplacian of the symmetric matrix M with M_ij = edge_scalars[e] for edge
/// e = (i, j) and zeros elsewhere. Zero scalars contribute no fill.
SparseMatrix scaled_laplacian(const WeightedGraph& g, const Vector& edge_scalars);

}  // namespace sonclust
