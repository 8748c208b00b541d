#include "sonclust/ssnal.hpp"

#include <cmath>
#include <utility>

namespace sonclust {

namespace {

void validate_config(const SolverConfig& config) {
  if (!(config.tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
  if (!(config.sigma0 > 0.0)) throw std::invalid_argument("SolverConfig: sigma0 must be positive");
  if (!(config.sigma_growth >= 1.0)) {
    throw std::invalid_argument("SolverConfig: sigma_growth must be >= 1");
  }
  if (!(config.eps_decay > 0.0 && config.eps_decay < 1.0)) {
    throw std::invalid_argument("SolverConfig: eps_decay must lie in (0, 1)");
  }
  if (config.max_outer < 1) throw std::invalid_argument("SolverConfig: max_outer must be >= 1");
}

void check_state_shapes(const DataMatrix& X, const EdgeMatrix& U, const EdgeMatrix& Z,
                        const Problem& problem, const char* what) {
  const auto rows = problem.A.rows();
  const auto edges = static_cast<Eigen::Index>(problem.graph.num_edges());
  if (X.rows() != rows || X.cols() != problem.A.cols() || U.rows() != rows ||
      U.cols() != edges || Z.rows() != rows || Z.cols() != edges) {
    throw std::invalid_argument(std::string(what) + ": state shape mismatch");
  }
}

}  // namespace

bool subproblem_tolerance_met(double grad_norm, double eps_k, double sigma_k) {
  return grad_norm <= eps_k / std::max(1.0, std::sqrt(sigma_k));
}

KKTResidual kkt_residuals(const DataMatrix& X, const EdgeMatrix& U, const EdgeMatrix& Z,
                          const Problem& problem) {
  check_state_shapes(X, U, Z, problem, "kkt_residuals");
  KKTResidual res;
  const EdgeMatrix BX = apply_B(problem.graph, X);
  res.eta_P = (BX - U).norm() / (1.0 + U.norm());

  double violation = 0.0;
  for (Eigen::Index e = 0; e < Z.cols(); ++e) {
    violation += std::max(0.0, Z.col(e).norm() - problem.spec.radius(e));
  }
  const double a_norm = problem.A.norm();
  res.eta_D = violation / (1.0 + a_norm);

  const double optimality = (apply_B_adjoint(problem.graph, Z) + X - problem.A).norm() +
                            (U - prox_p(U + Z, 1.0, problem.spec)).norm();
  res.eta = optimality / (1.0 + a_norm + U.norm());
  return res;
}

double primal_objective(const DataMatrix& X, const Problem& problem) {
  if (X.rows() != problem.A.rows() || X.cols() != problem.A.cols()) {
    throw std::invalid_argument("primal_objective: X shape mismatch");
  }
  return 0.5 * (X - problem.A).squaredNorm() + p_value(apply_B(problem.graph, X), problem.spec);
}

double dual_objective(const EdgeMatrix& Z, const Problem& problem) {
  if (Z.rows() != problem.A.rows() || Z.cols() != problem.graph.num_edges()) {
    throw std::invalid_argument("dual_objective: Z shape mismatch");
  }
  for (Eigen::Index e = 0; e < Z.cols(); ++e) {
    if (Z.col(e).norm() > problem.spec.radius(e) + 1e-9) {
      throw std::invalid_argument("dual_objective: Z is infeasible, project onto Omega first");
    }
  }
  const DataMatrix V = apply_B_adjoint(problem.graph, Z);
  return V.cwiseProduct(problem.A).sum() - 0.5 * V.squaredNorm();
}

double update_sigma(double sigma_k, double eta_P_now, double eta_P_prev,
                    const SolverConfig& config) {
  if (eta_P_now > 0.5 * eta_P_prev) {
    return std::min(config.sigma_max, config.sigma_growth * sigma_k);
  }
  return sigma_k;
}

SolveResult solve(const Problem& problem, const SolverConfig& config,
                  const std::optional<WarmStart>& init, const OuterObserver& observer) {
  validate_config(config);

  SolveResult result;
  if (init.has_value()) {
    check_state_shapes(init->X, init->U, init->Z, problem, "solve");
    result.X = init->X;
    result.U = init->U;
    result.Z = init->Z;
  } else {
    result.X = problem.A;
    result.U = apply_B(problem.graph, problem.A);
    result.Z = EdgeMatrix::Zero(problem.d(), problem.graph.num_edges());
  }

  double sigma = config.sigma0;
  double eps_k = config.eps0;
  result.kkt = kkt_residuals(result.X, result.U, result.Z, problem);
  result.converged = result.kkt.max() <= config.tol;

  const double kkt_scale = 1.0 + problem.A.norm();
  while (!result.converged && result.outer_iters < config.max_outer) {
    // Criterion (A) allows any tolerance below eps_k; tying it to the
    // current KKT level avoids no-op rounds from a warm start (eps_k still
    // too loose) and needless over-solving (eps_k already far below the
    // outer progress).
    const double eps_used = std::min(eps_k, result.kkt.max() * kkt_scale);
    SubproblemResult sub =
        solve_subproblem(result.X, result.Z, sigma, problem, config.ssncg, eps_used);
    EdgeMatrix Z_next = result.Z + sigma * (apply_B(problem.graph, sub.X) - sub.U);
    if (!sub.X.allFinite() || !sub.U.allFinite() || !Z_next.allFinite()) {
      throw SolveDivergedError("solve: non-finite iterates", std::move(result));
    }
    result.X = std::move(sub.X);
    result.U = std::move(sub.U);
    result.Z = std::move(Z_next);
    ++result.outer_iters;
    result.total_newton_iters += sub.newton_iters;
    result.total_cg_iters += sub.cg_iters;

    const double eta_P_prev = result.kkt.eta_P;
    result.kkt = kkt_residuals(result.X, result.U, result.Z, problem);
    result.converged = result.kkt.max() <= config.tol;

    if (observer) {
      OuterIterate snapshot{result.outer_iters,
                            sigma,
                            eps_used,
                            result.X,
                            result.U,
                            result.Z,
                            result.kkt,
                            primal_objective(result.X, problem),
                            dual_objective(project_omega(result.Z, problem.spec), problem),
                            sub.newton_iters,
                            sub.cg_iters,
                            sub.tolerance_met && !sub.cg_capped};
      observer(snapshot);
    }

    // Growing the penalty only helps while the inner solver keeps up: a
    // round that missed its tolerance or saturated CG ran at the edge of
    // what the Newton systems support, so hold sigma for the next round.
    if (sub.tolerance_met && !sub.cg_capped) {
      sigma = update_sigma(sigma, result.kkt.eta_P, eta_P_prev, config);
    }
    eps_k *= config.eps_decay;
  }

  result.final_sigma = sigma;
  result.V = apply_B_adjoint(problem.graph, result.Z);
  result.primal_obj = primal_objective(result.X, problem);
  result.dual_obj = dual_objective(project_omega(result.Z, problem.spec), problem);
  return result;
}

}  // namespace sonclust
