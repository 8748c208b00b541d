#include "sonclust/problem.hpp"

#include <utility>

namespace sonclust {

Problem::Problem(DataMatrix A_in, WeightedGraph graph_in, double gamma)
    : A(std::move(A_in)), graph(std::move(graph_in)) {
  if (graph.num_nodes() != A.cols()) {
    throw std::invalid_argument("Problem: graph node count must match the observation count");
  }
  if (!A.allFinite()) {
    throw std::invalid_argument("Problem: data matrix must be finite");
  }
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("Problem: gamma must be positive");
  }
  spec = WeightedNormSpec{gamma, graph.weights()};
  lap = laplacian(graph);
}

}  // namespace sonclust
