// Microbenchmarks for the solver's hot operations: the incidence operators,
// the column-wise prox, the structured Jacobian matvec, and one end-to-end
// solve at small scale.

#include <benchmark/benchmark.h>

#include "sonclust/datagen.hpp"
#include "sonclust/iadmm.hpp"
#include "sonclust/ssnal.hpp"
#include "sonclust/ssncg.hpp"

using namespace sonclust;

namespace {

struct Scene {
  Problem problem;
  DataMatrix X;
  EdgeMatrix Z;

  static Scene make(int n, double gamma) {
    const LabeledDataset data = two_half_moons(n, 0.1, 42);
    WeightedGraph graph = build_knn_graph(data.data, 10, 0.5);
    Problem problem(data.data, std::move(graph), gamma);
    Rng rng(7);
    DataMatrix X(problem.d(), problem.n());
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      for (Eigen::Index r = 0; r < X.rows(); ++r) X(r, c) = rng.normal();
    }
    EdgeMatrix Z = 0.3 * EdgeMatrix::Random(problem.d(), problem.graph.num_edges());
    return Scene{std::move(problem), std::move(X), std::move(Z)};
  }
};

void BM_apply_B(benchmark::State& state) {
  const Scene scene = Scene::make(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_B(scene.problem.graph, scene.X));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_apply_B)->Arg(1000)->Arg(4000)->Arg(16000)->Complexity();

void BM_apply_B_adjoint(benchmark::State& state) {
  const Scene scene = Scene::make(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_B_adjoint(scene.problem.graph, scene.Z));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_apply_B_adjoint)->Arg(1000)->Arg(4000)->Arg(16000)->Complexity();

void BM_prox_p(benchmark::State& state) {
  const Scene scene = Scene::make(static_cast<int>(state.range(0)), 1.0);
  const EdgeMatrix U = apply_B(scene.problem.graph, scene.X);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prox_p(U, 0.5, scene.problem.spec));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_prox_p)->Arg(1000)->Arg(4000)->Arg(16000)->Complexity();

void BM_jacobian_matvec(benchmark::State& state) {
  const Scene scene = Scene::make(static_cast<int>(state.range(0)), 1.0);
  const JacobianInfo info = select_jacobian(scene.X, scene.Z, 10.0, scene.problem);
  DataMatrix H = scene.X;
  for (auto _ : state) {
    H = jacobian_vector_product(info, scene.problem, H);
    H /= H.norm();
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_jacobian_matvec)->Arg(1000)->Arg(4000)->Arg(16000)->Complexity();

void BM_newton_factorization(benchmark::State& state) {
  const Scene scene = Scene::make(static_cast<int>(state.range(0)), 1.0);
  const JacobianInfo info = select_jacobian(scene.X, scene.Z, 10.0, scene.problem);
  CgPreconditioner precond(info, scene.problem);
  for (auto _ : state) {
    precond.refactorize(info, scene.problem);
    benchmark::ClobberMemory();
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_newton_factorization)->Arg(1000)->Arg(4000)->Arg(16000)->Complexity();

void BM_solve_halfmoon(benchmark::State& state) {
  const LabeledDataset data = two_half_moons(static_cast<int>(state.range(0)), 0.1, 42);
  const WeightedGraph graph = build_knn_graph(data.data, 10, 0.5);
  Problem problem(data.data, graph, 2.0);
  SolverConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(problem, config));
  }
}
BENCHMARK(BM_solve_halfmoon)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_iadmm_sweeps(benchmark::State& state) {
  const LabeledDataset data = two_half_moons(static_cast<int>(state.range(0)), 0.1, 42);
  const WeightedGraph graph = build_knn_graph(data.data, 10, 0.5);
  Problem problem(data.data, graph, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(iadmm_run(problem, AdmmConfig{}, std::nullopt, AdmmStop::budget(100)));
  }
}
BENCHMARK(BM_iadmm_sweeps)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
