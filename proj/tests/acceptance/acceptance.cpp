// Acceptance suite: end-to-end checks of the solver stack at pinned
// tolerances, one pass/fail line per criterion. Runs everything by
// default; `--criterion N` selects one, `--list` enumerates.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "../oracles.hpp"
#include "sonclust/datagen.hpp"
#include "sonclust/iadmm.hpp"
#include "sonclust/path.hpp"
#include "sonclust/ssnal.hpp"
#include "sonclust/ssncg.hpp"

using namespace sonclust;
namespace t = sonclust::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// --------------------------------------------------------------------------
// 1. KKT convergence and wall time on the half-moon gamma grid

Outcome criterion_kkt_convergence() {
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(0.2 * i);
  bool pass = true;
  std::string detail;
  for (int n : {200, 500, 1000}) {
    const LabeledDataset data = two_half_moons(n, 0.1, 1);
    PathConfig config;
    config.gamma_grid = grid;
    config.solver.tol = 1e-6;
    const ClusteringPath path = clustering_path(data.data, 10, 0.5, config);
    double max_kkt = 0.0;
    double max_time = 0.0;
    bool all = path.points.size() == grid.size() && !path.error.has_value();
    for (const PathPoint& point : path.points) {
      all = all && point.converged && point.kkt.max() <= 1e-6;
      max_kkt = std::max(max_kkt, point.kkt.max());
      max_time = std::max(max_time, point.solve_seconds);
    }
    all = all && max_time <= 10.0;
    pass = pass && all;
    detail += " n=" + std::to_string(n) + ":" + (all ? "ok" : "FAIL") +
              " max_kkt=" + fmt(max_kkt) + " max_t=" + fmt(max_time) + "s;";
  }
  return {pass, "50-point grid x {200,500,1000}:" + detail};
}

// --------------------------------------------------------------------------
// 2. Cross-solver objective agreement at KKT 1e-7

Outcome criterion_cross_solver() {
  bool pass = true;
  double worst = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    const int n = 30 + 7 * inst;
    const double gamma = 0.3 + 0.17 * inst;
    Problem p = t::random_problem(9000 + static_cast<std::uint64_t>(inst), n, 2, 5, gamma);

    SolverConfig newton_config;
    newton_config.tol = 1e-7;
    const SolveResult newton = solve(p, newton_config);

    const SolveResult admm = iadmm_run(p, AdmmConfig{}, std::nullopt, AdmmStop::tolerance(1e-7));

    const double rel = std::abs(admm.primal_obj - newton.primal_obj) / std::abs(newton.primal_obj);
    worst = std::max(worst, rel);
    pass = pass && newton.converged && admm.converged && rel <= 1e-6;
  }
  return {pass, "10 instances, worst relative objective gap " + fmt(worst) + " (<= 1e-6)"};
}

// --------------------------------------------------------------------------
// 3. Newton iteration economy on the unbalanced mixture

Outcome criterion_newton_economy() {
  const LabeledDataset data = unbalanced_gaussian(1, unbalanced_gaussian_spec(5));  // n = 1300
  PathConfig config;
  config.gamma_grid = {0.2, 0.4, 0.6, 0.8, 1.0};
  const ClusteringPath path = clustering_path(data.data, 10, 0.5, config);
  bool pass = path.points.size() == 5 && !path.error.has_value();
  std::string counts;
  for (const PathPoint& point : path.points) {
    pass = pass && point.converged && point.newton_iters <= 60;
    counts += " " + std::to_string(point.newton_iters);
  }
  return {pass, "Newton iterations per gamma:" + counts + " (each <= 60)"};
}

// --------------------------------------------------------------------------
// 4. Cluster recovery against ground truth

Outcome criterion_recovery() {
  // half moons at the figure's parameters: perfect recovery expected
  const LabeledDataset moons = two_half_moons(1000, 0.1, 1);
  PathConfig moon_config;
  moon_config.gamma_grid = {5.0};
  const ClusteringPath moon_path = clustering_path(moons.data, 20, 0.5, moon_config);
  const double moon_ri =
      t::rand_index(moon_path.points.at(0).assignment, moons.labels);
  const bool moon_ok = moon_path.points.at(0).converged &&
                       t::same_partition(moon_path.points.at(0).assignment, moons.labels);

  // unbalanced mixture (our parameterization): Rand index >= 0.99
  const LabeledDataset mix = unbalanced_gaussian(1);
  PathConfig mix_config;
  mix_config.gamma_grid = {1.0};
  const ClusteringPath mix_path = clustering_path(mix.data, 10, 0.5, mix_config);
  const double mix_ri = t::rand_index(mix_path.points.at(0).assignment, mix.labels);
  const bool mix_ok = mix_path.points.at(0).converged && mix_ri >= 0.99;

  return {moon_ok && mix_ok, "halfmoon n=1000 k=20 gamma=5 RI=" + fmt(moon_ri) +
                                 " (= 1 required); ugauss n=6500 k=10 gamma=1 RI=" +
                                 fmt(mix_ri) + " (>= 0.99)"};
}

// --------------------------------------------------------------------------
// 5. Dense-oracle equivalence of the structured Jacobian matvec

Outcome criterion_jacobian_oracle() {
  const auto t0 = Clock::now();
  Rng rng(7100);
  double worst = 0.0;
  int checked = 0;
  for (int inst = 0; inst < 10; ++inst) {
    Problem p = t::random_problem(7200 + static_cast<std::uint64_t>(inst), 5 + inst % 8,
                                  1 + inst % 3, 2, 0.2 + 0.15 * (inst % 5));
    const double sigma = 0.2 + 2.5 * rng.uniform();
    const DataMatrix X = t::random_matrix(rng, p.d(), p.n());
    const EdgeMatrix Z_tilde = 0.5 * t::random_matrix(rng, p.d(), p.graph.num_edges());
    const JacobianInfo info = select_jacobian(X, Z_tilde, sigma, p);
    const Eigen::MatrixXd V = t::dense_jacobian_matrix(X, Z_tilde, sigma, p);
    for (int rep = 0; rep < 5; ++rep) {
      const DataMatrix H = t::random_matrix(rng, p.d(), p.n());
      const DataMatrix fast = jacobian_vector_product(info, p, H);
      const Eigen::Map<const Vector> h(H.data(), H.size());
      const Eigen::Map<const Vector> f(fast.data(), fast.size());
      const Vector dense = V * h;
      worst = std::max(worst, (dense - f).norm() / (1.0 + dense.norm()));
      ++checked;
    }
  }
  const double elapsed = seconds_since(t0);
  return {checked == 50 && worst <= 1e-10 && elapsed < 60.0,
          "50 pairs, worst relative error " + fmt(worst) + " (<= 1e-10), " + fmt(elapsed) + "s"};
}

// --------------------------------------------------------------------------
// 6. Central-difference check of the subproblem gradient

Outcome criterion_gradient_check() {
  const auto t0 = Clock::now();
  Rng rng(7300);
  Problem p = t::random_problem(7301, 16, 3, 4, 0.7);
  int tested = 0;
  int attempts = 0;
  double worst = 0.0;
  while (tested < 200 && attempts < 2000) {
    ++attempts;
    const double sigma = 0.2 + 5.0 * rng.uniform();
    const DataMatrix X = t::random_matrix(rng, p.d(), p.n());
    const EdgeMatrix Z_tilde = 0.5 * t::random_matrix(rng, p.d(), p.graph.num_edges());
    const DataMatrix H = t::random_matrix(rng, p.d(), p.n());
    const double eps = 1e-6;
    const JacobianInfo plus = select_jacobian(X + eps * H, Z_tilde, sigma, p);
    const JacobianInfo minus = select_jacobian(X - eps * H, Z_tilde, sigma, p);
    if (plus.active_edges != minus.active_edges) continue;  // kink: resample
    const double fd = (phi_value(X + eps * H, Z_tilde, sigma, p) -
                       phi_value(X - eps * H, Z_tilde, sigma, p)) /
                      (2.0 * eps);
    const double directional = phi_gradient(X, Z_tilde, sigma, p).cwiseProduct(H).sum();
    worst = std::max(worst, std::abs(fd - directional) / (1.0 + std::abs(directional)));
    ++tested;
  }
  const double elapsed = seconds_since(t0);
  return {tested == 200 && worst <= 1e-5 && elapsed < 60.0,
          std::to_string(tested) + " triples, worst relative error " + fmt(worst) +
              " (<= 1e-5), " + fmt(elapsed) + "s"};
}

// --------------------------------------------------------------------------
// 7. Randomized Moreau and prox-optimality property suite

Outcome criterion_prox_suite() {
  const auto t0 = Clock::now();
  Rng rng(7400);
  WeightedNormSpec spec;
  spec.gamma = 1.2;
  spec.weights = Vector::Ones(1) * 0.8;
  double worst_moreau = 0.0;
  bool optimal = true;
  for (int rep = 0; rep < 1000; ++rep) {
    const Vector x = t::random_matrix(rng, 3, 1) * 3.0;
    const double step = 1e-3 + 10.0 * rng.uniform();
    const double residual = prox_conjugate_check(x, step, spec);
    worst_moreau = std::max(worst_moreau, residual / (1.0 + x.norm()));

    EdgeMatrix column(3, 1);
    column.col(0) = x;
    const Vector u_star = prox_p(column, step, spec).col(0);
    const auto objective = [&](const Vector& u) {
      return step * spec.gamma * spec.weights[0] * u.norm() + 0.5 * (u - x).squaredNorm();
    };
    const double best = objective(u_star);
    for (int perturb = 0; perturb < 10; ++perturb) {
      const Vector r = t::random_matrix(rng, 3, 1);
      optimal = optimal && best <= objective(u_star + 1e-4 * r) + 1e-14;
    }
  }
  const double elapsed = seconds_since(t0);
  return {worst_moreau <= 1e-10 && optimal && elapsed < 10.0,
          "1000 checks, worst scaled Moreau residual " + fmt(worst_moreau) +
              " (<= 1e-10), optimality " + (optimal ? "ok" : "FAIL") + ", " + fmt(elapsed) + "s"};
}

// --------------------------------------------------------------------------
// 8. Scalability trend in n and k

Outcome criterion_scaling() {
  const std::vector<double> grid = {2, 4, 6, 8, 10};

  std::vector<double> ns = {500, 1000, 2000, 5000, 10000};
  std::vector<double> n_means;
  for (double nv : ns) {
    const int n = static_cast<int>(nv);
    const LabeledDataset data = two_half_moons(n, 0.1, static_cast<std::uint64_t>(n));
    PathConfig config;
    config.gamma_grid = grid;
    const ClusteringPath path = clustering_path(data.data, 10, 0.5, config);
    if (path.points.size() != grid.size()) {
      return {false, "n-suite solve failed at n=" + std::to_string(n)};
    }
    double mean = 0.0;
    for (const PathPoint& point : path.points) mean += point.solve_seconds;
    n_means.push_back(mean / static_cast<double>(grid.size()));
  }
  const double n_slope = loglog_slope(ns, n_means);

  std::vector<double> ks;
  std::vector<double> k_means;
  const LabeledDataset data = two_half_moons(2000, 0.1, 2000);
  for (int k = 5; k <= 50; k += 5) {
    PathConfig config;
    config.gamma_grid = grid;
    const ClusteringPath path = clustering_path(data.data, k, 0.5, config);
    if (path.points.size() != grid.size()) {
      return {false, "k-suite solve failed at k=" + std::to_string(k)};
    }
    double mean = 0.0;
    for (const PathPoint& point : path.points) mean += point.solve_seconds;
    ks.push_back(k);
    k_means.push_back(mean / static_cast<double>(grid.size()));
  }
  const double k_slope = loglog_slope(ks, k_means);

  const bool pass = n_slope <= 1.3 && k_slope <= 1.3;
  return {pass, "slope vs n = " + fmt(n_slope) + ", slope vs k = " + fmt(k_slope) +
                    " (each <= 1.3); n-means:" +
                    [&] {
                      std::string s;
                      for (double m : n_means) s += " " + fmt(m);
                      return s;
                    }()};
}

// --------------------------------------------------------------------------
// 9. Uniqueness across initial points

Outcome criterion_uniqueness() {
  bool pass = true;
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    Problem p = [&] {
      if (inst % 2 == 0) {
        const LabeledDataset moons =
            two_half_moons(60 + 10 * inst, 0.1, 500 + static_cast<std::uint64_t>(inst));
        const WeightedGraph g = build_knn_graph(moons.data, 8, 0.5);
        return Problem(moons.data, g, 0.5 + 0.2 * inst);
      }
      return t::random_problem(600 + static_cast<std::uint64_t>(inst), 50 + 5 * inst, 2, 5,
                               0.4 + 0.15 * inst);
    }();
    SolverConfig config;
    config.tol = 1e-7;

    const SolveResult cold = solve(p, config);
    const SolveResult admm = iadmm_run(p, AdmmConfig{}, std::nullopt, AdmmStop::budget(100));
    const SolveResult from_admm = solve(p, config, WarmStart{admm.X, admm.U, admm.Z});

    // path-style warm start from a neighboring gamma
    Problem neighbor(p.A, p.graph, p.spec.gamma * 1.3);
    const SolveResult other = solve(neighbor, config);
    const SolveResult warmed = solve(p, config, WarmStart{other.X, other.U, other.Z});

    const double scale = 1.0 + cold.X.norm();
    const double dev = std::max((cold.X - from_admm.X).norm(), (cold.X - warmed.X).norm()) / scale;
    worst = std::max(worst, dev);
    pass = pass && cold.converged && from_admm.converged && warmed.converged && dev <= 1e-4;
  }
  return {pass, "20 instances x 3 inits, worst relative deviation " + fmt(worst) + " (<= 1e-4)"};
}

// --------------------------------------------------------------------------
// 10. Stability of solve times across the gamma grid

Outcome criterion_gamma_stability() {
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(0.2 * i);
  const LabeledDataset data = two_half_moons(1000, 0.1, 1);
  PathConfig config;
  config.gamma_grid = grid;
  const ClusteringPath path = clustering_path(data.data, 10, 0.5, config);
  if (path.points.size() != grid.size() || path.error.has_value()) {
    return {false, "path truncated"};
  }
  std::vector<double> times;
  for (const PathPoint& point : path.points) times.push_back(point.solve_seconds);
  std::sort(times.begin(), times.end());
  const double median = 0.5 * (times[24] + times[25]);
  const double ratio = times.back() / median;
  return {ratio <= 5.0, "max/median solve time " + fmt(ratio) + " (<= 5) over 50 gammas"};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"kkt-convergence-halfmoon", criterion_kkt_convergence},
      {"cross-solver-objective", criterion_cross_solver},
      {"newton-iteration-economy", criterion_newton_economy},
      {"cluster-recovery", criterion_recovery},
      {"jacobian-dense-oracle", criterion_jacobian_oracle},
      {"gradient-central-difference", criterion_gradient_check},
      {"moreau-prox-suite", criterion_prox_suite},
      {"scalability-trend", criterion_scaling},
      {"uniqueness-robustness", criterion_uniqueness},
      {"gamma-sensitivity-stability", criterion_gamma_stability},
  };

  int only = 0;
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--list") {
      for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::printf("%2zu %s\n", i + 1, criteria[i].name);
      }
      return 0;
    }
    if (arg == "--criterion" && a + 1 < argc) {
      only = std::atoi(argv[++a]);
    }
  }

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2zu %-28s %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  return failures;
}
