#pragma once

#include <optional>

#include "sonclust/problem.hpp"

namespace sonclust {

/// Parameters of the inexact ADMM. The X-system tolerances
/// eps_k = eps0 * eps_decay^k form a summable sequence.
struct AdmmConfig {
  double sigma = 1.0;       // fixed penalty
  double tau_step = 1.618;  // multiplier step, in (0, (1+sqrt 5)/2)
  int max_iters = 100000;
  double eps0 = 1.0;
  double eps_decay = 0.9;
  int cg_max = 1000;
};

/// Stop rule: a fixed sweep budget (warm-start mode) or a relative KKT
/// tolerance (baseline-solver mode).
struct AdmmStop {
  static AdmmStop budget(int sweeps) { return AdmmStop{sweeps, std::nullopt}; }
  static AdmmStop tolerance(double kkt_tol) { return AdmmStop{std::nullopt, kkt_tol}; }

  std::optional<int> sweeps;
  std::optional<double> kkt_tol;
};

/// Runs Algorithm-style ADMM sweeps: inexact X-system solve, exact U prox,
/// multiplier step tau * sigma * (B(X) - U).
SolveResult iadmm_run(const Problem& problem, const AdmmConfig& config,
                      const std::optional<WarmStart>& init, const AdmmStop& stop);

/// Solves (I_n + sigma L) X^T = R^T by CG over all d rows simultaneously,
/// to Frobenius residual tol_abs. sigma = 0 returns R unchanged.
DataMatrix x_system_solve(const WeightedGraph& graph, double sigma, const DataMatrix& R,
                          double tol_abs, int cg_max);

}  // namespace sonclust
