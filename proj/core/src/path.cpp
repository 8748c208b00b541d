#include "sonclust/path.hpp"

#include <chrono>
#include <numeric>
#include <utility>

namespace sonclust {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int a) {
    while (parent_[static_cast<std::size_t>(a)] != a) {
      parent_[static_cast<std::size_t>(a)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(a)])];
      a = parent_[static_cast<std::size_t>(a)];
    }
    return a;
  }

  void merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);  // keep the smaller index as root
    parent_[static_cast<std::size_t>(b)] = a;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

ClusterAssignment extract_clusters(const DataMatrix& X_star, const WeightedGraph& graph,
                                   double cluster_tol, bool all_pairs) {
  const int n = static_cast<int>(X_star.cols());
  if (n != graph.num_nodes()) {
    throw std::invalid_argument("extract_clusters: column count must match the graph");
  }
  Vector norms(n);
  for (int i = 0; i < n; ++i) norms[i] = X_star.col(i).norm();

  const auto mergeable = [&](int i, int j) {
    return (X_star.col(i) - X_star.col(j)).norm() <=
           cluster_tol * (1.0 + std::max(norms[i], norms[j]));
  };

  UnionFind uf(n);
  if (all_pairs) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (mergeable(i, j)) uf.merge(i, j);
      }
    }
  } else {
    for (const Edge& e : graph.edges()) {
      if (mergeable(e.i, e.j)) uf.merge(e.i, e.j);
    }
  }

  ClusterAssignment out;
  out.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> root_label(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int r = uf.find(i);
    if (root_label[static_cast<std::size_t>(r)] < 0) {
      root_label[static_cast<std::size_t>(r)] = out.num_clusters++;
    }
    out.labels[static_cast<std::size_t>(i)] = root_label[static_cast<std::size_t>(r)];
  }
  return out;
}

ClusteringPath clustering_path(const DataMatrix& A, int k, double phi,
                               const PathConfig& config) {
  if (config.gamma_grid.empty()) {
    throw std::invalid_argument("clustering_path: gamma grid must be nonempty");
  }
  for (std::size_t g = 0; g < config.gamma_grid.size(); ++g) {
    if (!(config.gamma_grid[g] > 0.0)) {
      throw std::invalid_argument("clustering_path: gamma values must be positive");
    }
    if (g > 0 && !(config.gamma_grid[g] > config.gamma_grid[g - 1])) {
      throw std::invalid_argument("clustering_path: gamma grid must be strictly increasing");
    }
  }

  const WeightedGraph graph = build_knn_graph(A, k, phi);
  ClusteringPath path;
  path.points.reserve(config.gamma_grid.size());
  std::optional<WarmStart> init;
  const SolverConfig& solver = config.solver;

  for (std::size_t g = 0; g < config.gamma_grid.size(); ++g) {
    const double gamma = config.gamma_grid[g];
    Problem problem(A, graph, gamma);
    PathPoint point;
    point.gamma = gamma;
    try {
      if (g == 0 && config.warm_start && config.warmstart_sweeps > 0) {
        const auto t0 = Clock::now();
        SolveResult admm = iadmm_run(problem, config.admm, std::nullopt,
                                     AdmmStop::budget(config.warmstart_sweeps));
        point.warmstart_seconds = seconds_since(t0);
        init = WarmStart{std::move(admm.X), std::move(admm.U), std::move(admm.Z)};
      }
      const auto t0 = Clock::now();
      SolveResult res = solve(problem, solver, init);
      point.solve_seconds = seconds_since(t0);

      ClusterAssignment clusters = extract_clusters(res.X, graph, config.cluster_tol);
      point.assignment = std::move(clusters.labels);
      point.num_clusters = clusters.num_clusters;
      point.kkt = res.kkt;
      point.primal_obj = res.primal_obj;
      point.outer_iters = res.outer_iters;
      point.newton_iters = res.total_newton_iters;
      point.cg_iters = res.total_cg_iters;
      point.converged = res.converged;

      if (config.warm_start) {
        init = WarmStart{std::move(res.X), std::move(res.U), std::move(res.Z)};
        point.X = init->X;
      } else {
        init.reset();
        point.X = std::move(res.X);
      }
      path.points.push_back(std::move(point));
    } catch (const NumericalError& err) {
      path.error = err.what();
      break;
    }
  }
  return path;
}

}  // namespace sonclust
