#include "sonclust/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace sonclust {

WeightedGraph::WeightedGraph(int num_nodes, std::vector<Edge> edges, Vector weights)
    : n_(num_nodes) {
  if (n_ < 1) {
    throw std::invalid_argument("WeightedGraph: need at least one node");
  }
  if (weights.size() != static_cast<Eigen::Index>(edges.size())) {
    throw std::invalid_argument("WeightedGraph: one weight per edge required");
  }
  edges_.reserve(edges.size());
  std::vector<double> kept;
  kept.reserve(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& ed = edges[e];
    if (ed.i < 0 || ed.j <= ed.i || ed.j >= n_) {
      throw std::invalid_argument("WeightedGraph: edge endpoints must satisfy 0 <= i < j < n");
    }
    if (!edges_.empty()) {
      const Edge& prev = edges_.back();
      if (std::pair(ed.i, ed.j) <= std::pair(prev.i, prev.j)) {
        throw std::invalid_argument("WeightedGraph: edges must be sorted by (i, j) without duplicates");
      }
    }
    if (!(weights[static_cast<Eigen::Index>(e)] > 0.0)) {
      continue;  // zero-weight edges are dropped
    }
    edges_.push_back(ed);
    kept.push_back(weights[static_cast<Eigen::Index>(e)]);
  }
  weights_ = Eigen::Map<const Vector>(kept.data(), static_cast<Eigen::Index>(kept.size()));
  degrees_.assign(static_cast<std::size_t>(n_), 0);
  for (const Edge& ed : edges_) {
    ++degrees_[static_cast<std::size_t>(ed.i)];
    ++degrees_[static_cast<std::size_t>(ed.j)];
  }
}

WeightedGraph build_knn_graph(const DataMatrix& A, int k, double phi) {
  const int n = static_cast<int>(A.cols());
  if (n < 1) {
    throw std::invalid_argument("build_knn_graph: empty data matrix");
  }
  if (!A.allFinite()) {
    throw std::invalid_argument("build_knn_graph: data matrix must be finite");
  }
  if (k < 1 || k > n - 1) {
    throw std::invalid_argument("build_knn_graph: k must satisfy 1 <= k <= n-1");
  }
  if (phi < 0.0) {
    throw std::invalid_argument("build_knn_graph: phi must be nonnegative");
  }

  // Brute-force all pairwise squared distances, one node at a time. Ties on
  // distance go to the smaller index so the edge set is deterministic.
  std::vector<std::pair<int, int>> directed;  // (i, j) with j a neighbor of i
  directed.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
  std::vector<std::pair<double, int>> cand(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    std::size_t m = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      cand[m++] = {(A.col(i) - A.col(j)).squaredNorm(), j};
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    for (int t = 0; t < k; ++t) {
      directed.emplace_back(i, cand[static_cast<std::size_t>(t)].second);
    }
  }

  // Symmetrize by union and store each pair once with i < j.
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(directed.size());
  for (auto [i, j] : directed) {
    pairs.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  Vector weights(static_cast<Eigen::Index>(pairs.size()));
  Eigen::Index e = 0;
  for (auto [i, j] : pairs) {
    edges.push_back({i, j});
    weights[e++] = std::exp(-phi * (A.col(i) - A.col(j)).squaredNorm());
  }
  return WeightedGraph(static_cast<int>(n), std::move(edges), std::move(weights));
}

EdgeMatrix apply_B(const WeightedGraph& g, const DataMatrix& X) {
  if (X.cols() != g.num_nodes()) {
    throw std::invalid_argument("apply_B: X must have one column per graph node");
  }
  EdgeMatrix out(X.rows(), g.num_edges());
  const auto& edges = g.edges();
  for (int e = 0; e < g.num_edges(); ++e) {
    out.col(e) = X.col(edges[static_cast<std::size_t>(e)].i) -
                 X.col(edges[static_cast<std::size_t>(e)].j);
  }
  return out;
}

DataMatrix apply_B_adjoint(const WeightedGraph& g, const EdgeMatrix& Z) {
  if (Z.cols() != g.num_edges()) {
    throw std::invalid_argument("apply_B_adjoint: Z must have one column per graph edge");
  }
  DataMatrix out = DataMatrix::Zero(Z.rows(), g.num_nodes());
  const auto& edges = g.edges();
  for (int e = 0; e < g.num_edges(); ++e) {
    out.col(edges[static_cast<std::size_t>(e)].i) += Z.col(e);
    out.col(edges[static_cast<std::size_t>(e)].j) -= Z.col(e);
  }
  return out;
}

SparseMatrix scaled_laplacian(const WeightedGraph& g, const Vector& edge_scalars) {
  if (edge_scalars.size() != g.num_edges()) {
    throw std::invalid_argument("scaled_laplacian: one scalar per edge required");
  }
  const int n = g.num_nodes();
  Vector diag = Vector::Zero(n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * static_cast<std::size_t>(g.num_edges()) + static_cast<std::size_t>(n));
  const auto& edges = g.edges();
  for (int e = 0; e < g.num_edges(); ++e) {
    const double s = edge_scalars[e];
    if (s == 0.0) continue;
    const auto [i, j] = edges[static_cast<std::size_t>(e)];
    trip.emplace_back(i, j, -s);
    trip.emplace_back(j, i, -s);
    diag[i] += s;
    diag[j] += s;
  }
  for (int i = 0; i < n; ++i) {
    if (diag[i] != 0.0) trip.emplace_back(i, i, diag[i]);
  }
  SparseMatrix L(n, n);
  L.setFromTriplets(trip.begin(), trip.end());
  L.makeCompressed();
  return L;
}

SparseMatrix laplacian(const WeightedGraph& g) {
  return scaled_laplacian(g, Vector::Ones(g.num_edges()));
}

}  // namespace sonclust
