#include "sonclust/iadmm.hpp"

#include <cmath>
#include <utility>

#include "sonclust/ssnal.hpp"

namespace sonclust {

namespace {

constexpr double kTauUpper = 1.6180339887498949;  // (1 + sqrt 5) / 2

struct CgOutcome {
  double residual = 0.0;
  int iterations = 0;
};

// CG on X (I + sigma L) = R with Frobenius inner products, i.e. all d
// right-hand-side rows at once. X0 is the initial guess.
CgOutcome cg_x_system(const SparseMatrix& lap, double sigma, const DataMatrix& R,
                      double tol_abs, int cg_max, DataMatrix& X) {
  CgOutcome out;
  DataMatrix r = R - (X + sigma * (X * lap));
  double rs = r.squaredNorm();
  out.residual = std::sqrt(rs);
  if (out.residual <= tol_abs) {
    return out;
  }
  DataMatrix p = r;
  DataMatrix Ap(R.rows(), R.cols());
  for (int it = 0; it < cg_max; ++it) {
    Ap = p + sigma * (p * lap);
    const double pAp = p.cwiseProduct(Ap).sum();
    if (!std::isfinite(pAp) || pAp <= 0.0) {
      throw NumericalError("x_system_solve: CG breakdown on an SPD system");
    }
    const double step = rs / pAp;
    X += step * p;
    r -= step * Ap;
    ++out.iterations;
    const double rs_new = r.squaredNorm();
    out.residual = std::sqrt(rs_new);
    if (out.residual <= tol_abs) {
      return out;
    }
    p = r + (rs_new / rs) * p;
    rs = rs_new;
  }
  return out;
}

}  // namespace

DataMatrix x_system_solve(const WeightedGraph& graph, double sigma, const DataMatrix& R,
                          double tol_abs, int cg_max) {
  if (R.cols() != graph.num_nodes()) {
    throw std::invalid_argument("x_system_solve: R must have one column per node");
  }
  if (sigma < 0.0) {
    throw std::invalid_argument("x_system_solve: sigma must be nonnegative");
  }
  if (sigma == 0.0) {
    return R;
  }
  const SparseMatrix lap = laplacian(graph);
  DataMatrix X = DataMatrix::Zero(R.rows(), R.cols());
  const CgOutcome out = cg_x_system(lap, sigma, R, tol_abs, cg_max, X);
  if (out.residual > tol_abs) {
    throw NumericalError("x_system_solve: CG did not reach the requested residual");
  }
  return X;
}

SolveResult iadmm_run(const Problem& problem, const AdmmConfig& config,
                      const std::optional<WarmStart>& init, const AdmmStop& stop) {
  if (!(config.sigma > 0.0)) {
    throw std::invalid_argument("AdmmConfig: sigma must be positive");
  }
  if (!(config.tau_step > 0.0 && config.tau_step < kTauUpper)) {
    throw std::invalid_argument("AdmmConfig: tau_step must lie in (0, (1+sqrt 5)/2)");
  }
  if (!stop.sweeps.has_value() && !stop.kkt_tol.has_value()) {
    throw std::invalid_argument("AdmmStop: either a sweep budget or a KKT tolerance is required");
  }

  SolveResult result;
  if (init.has_value()) {
    result.X = init->X;
    result.U = init->U;
    result.Z = init->Z;
  } else {
    result.X = problem.A;
    result.U = apply_B(problem.graph, problem.A);
    result.Z = EdgeMatrix::Zero(problem.d(), problem.graph.num_edges());
  }

  const double sigma = config.sigma;
  const int max_sweeps = stop.sweeps.value_or(config.max_iters);
  double eps_k = config.eps0;
  const bool check_kkt = stop.kkt_tol.has_value();
  if (check_kkt) {
    result.kkt = kkt_residuals(result.X, result.U, result.Z, problem);
    result.converged = result.kkt.max() <= *stop.kkt_tol;
  }

  while (!result.converged && result.outer_iters < max_sweeps) {
    // X-step: (I + sigma B*B) X = R, solved inexactly from the previous X
    const DataMatrix R =
        problem.A + apply_B_adjoint(problem.graph, sigma * result.U - result.Z);
    const CgOutcome cg = cg_x_system(problem.lap, sigma, R, eps_k, config.cg_max, result.X);
    if (cg.residual > 10.0 * eps_k) {
      throw NumericalError("iadmm_run: X-system CG stalled beyond 10x the sweep tolerance");
    }
    result.total_cg_iters += cg.iterations;

    // U-step (exact prox), then the multiplier step
    EdgeMatrix BX = apply_B(problem.graph, result.X);
    EdgeMatrix D = BX + result.Z / sigma;
    result.U = prox_p(D, 1.0 / sigma, problem.spec);
    BX -= result.U;
    result.Z += (config.tau_step * sigma) * BX;
    ++result.outer_iters;
    eps_k *= config.eps_decay;

    if (!result.X.allFinite() || !result.Z.allFinite()) {
      throw NumericalError("iadmm_run: non-finite iterates");
    }
    if (check_kkt) {
      result.kkt = kkt_residuals(result.X, result.U, result.Z, problem);
      result.converged = result.kkt.max() <= *stop.kkt_tol;
    }
  }

  if (!check_kkt) {
    result.kkt = kkt_residuals(result.X, result.U, result.Z, problem);
    result.converged = false;  // budget mode makes no convergence claim
  }
  result.final_sigma = sigma;
  result.V = apply_B_adjoint(problem.graph, result.Z);
  result.primal_obj = primal_objective(result.X, problem);
  result.dual_obj = dual_objective(project_omega(result.Z, problem.spec), problem);
  return result;
}

}  // namespace sonclust
