#pragma once

#include <functional>
#include <optional>

#include "sonclust/ssncg.hpp"

namespace sonclust {

/// Parameters of the outer augmented Lagrangian loop. The subproblem
/// tolerances eps_k = eps0 * eps_decay^k form a summable sequence.
struct SolverConfig {
  double tol = 1e-6;        // relative KKT stopping tolerance
  double sigma0 = 1.0;      // initial penalty
  double sigma_max = 1e6;   // penalty cap
  double sigma_growth = 3.0;
  double eps0 = 1.0;
  double eps_decay = 0.5;
  int max_outer = 100;
  NewtonConfig ssncg;
};

/// Snapshot handed to the outer-iteration observer. The matrix references
/// are only valid during the callback.
struct OuterIterate {
  int k = 0;            // completed outer iterations
  double sigma = 0.0;   // penalty used for this iteration
  double eps = 0.0;     // subproblem tolerance used for this iteration
  const DataMatrix& X;
  const EdgeMatrix& U;
  const EdgeMatrix& Z;
  KKTResidual kkt;
  double primal_obj = 0.0;
  double dual_obj = 0.0;  // evaluated at the Omega-projected multiplier
  int newton_iters = 0;   // inner iterations spent on this subproblem
  int cg_iters = 0;
  bool subproblem_ok = false;  // inner tolerance met without CG saturation
};
using OuterObserver = std::function<void(const OuterIterate&)>;

/// Thrown when iterates turn non-finite; carries the last finite state.
class SolveDivergedError : public NumericalError {
 public:
  SolveDivergedError(const std::string& message, SolveResult last_state)
      : NumericalError(message), last_state(std::move(last_state)) {}

  SolveResult last_state;
};

/// Stopping test for the inner solver: grad_norm <= eps_k / max(1, sqrt(sigma_k)).
bool subproblem_tolerance_met(double grad_norm, double eps_k, double sigma_k);

/// Relative KKT residuals (Frobenius norms throughout).
KKTResidual kkt_residuals(const DataMatrix& X, const EdgeMatrix& U, const EdgeMatrix& Z,
                          const Problem& problem);

/// 0.5 sum_i ||x_i - a_i||^2 + gamma sum_e w_e ||x_i - x_j||.
double primal_objective(const DataMatrix& X, const Problem& problem);

/// <A, B*(Z)> - 0.5 ||B*(Z)||^2 for Z in Omega; throws if any column of Z
/// exceeds its ball radius by more than 1e-9.
double dual_objective(const EdgeMatrix& Z, const Problem& problem);

/// Nondecreasing penalty update: grows by sigma_growth (capped at
/// sigma_max) when the primal residual failed to halve.
double update_sigma(double sigma_k, double eta_P_now, double eta_P_prev,
                    const SolverConfig& config);

/// Augmented Lagrangian outer loop. Without an explicit initial point,
/// starts from X = A, U = B(A), Z = 0.
SolveResult solve(const Problem& problem, const SolverConfig& config,
                  const std::optional<WarmStart>& init = std::nullopt,
                  const OuterObserver& observer = {});

}  // namespace sonclust
