#include "sonclust/ssncg.hpp"

#include <cmath>
#include <limits>

#include "sonclust/ssnal.hpp"

namespace sonclust {

namespace {

constexpr int kMaxBacktracks = 60;

// Shared core of phi_value / phi_gradient: given D = B(X) + Z~/sigma,
// accumulates p(Prox_{p/sigma}(D)) + ||Prox_{sigma p*}(sigma D)||^2 / (2 sigma)
// and optionally writes S = Prox_{sigma p*}(sigma D) column by column.
// Prox_{sigma p*} is the projection onto the per-edge balls of radius
// gamma w_e, so no division by a zero norm can occur.
double penalty_terms(const EdgeMatrix& D, double sigma, const WeightedNormSpec& spec,
                     EdgeMatrix* S_out) {
  double p_sum = 0.0;
  double s_sq = 0.0;
  for (Eigen::Index e = 0; e < D.cols(); ++e) {
    const double radius = spec.radius(e);
    const double threshold = radius / sigma;
    const double norm = D.col(e).norm();
    if (norm <= threshold) {
      // prox column is 0; sigma D^(e) is inside its ball
      s_sq += sigma * sigma * norm * norm;
      if (S_out != nullptr) S_out->col(e) = sigma * D.col(e);
    } else {
      p_sum += radius * (norm - threshold);
      s_sq += radius * radius;
      if (S_out != nullptr) S_out->col(e) = (radius / norm) * D.col(e);
    }
  }
  return p_sum + s_sq / (2.0 * sigma);
}

void check_subproblem_args(const DataMatrix& X, const EdgeMatrix& Z_tilde, double sigma,
                           const Problem& problem, const char* what) {
  if (X.rows() != problem.d() || X.cols() != problem.n()) {
    throw std::invalid_argument(std::string(what) + ": X shape mismatch");
  }
  if (Z_tilde.rows() != problem.d() || Z_tilde.cols() != problem.graph.num_edges()) {
    throw std::invalid_argument(std::string(what) + ": Z shape mismatch");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument(std::string(what) + ": sigma must be positive");
  }
}

double frob_dot(const DataMatrix& a, const DataMatrix& b) {
  return a.cwiseProduct(b).sum();
}

}  // namespace

double phi_value(const DataMatrix& X, const EdgeMatrix& Z_tilde, double sigma,
                 const Problem& problem) {
  check_subproblem_args(X, Z_tilde, sigma, problem, "phi_value");
  EdgeMatrix D = apply_B(problem.graph, X);
  D += Z_tilde / sigma;
  const double fidelity = 0.5 * (X - problem.A).squaredNorm();
  const double z_const = Z_tilde.squaredNorm() / (2.0 * sigma);
  return fidelity + penalty_terms(D, sigma, problem.spec, nullptr) - z_const;
}

DataMatrix phi_gradient(const DataMatrix& X, const EdgeMatrix& Z_tilde, double sigma,
                        const Problem& problem) {
  check_subproblem_args(X, Z_tilde, sigma, problem, "phi_gradient");
  EdgeMatrix D = apply_B(problem.graph, X);
  D += Z_tilde / sigma;
  EdgeMatrix S(D.rows(), D.cols());
  penalty_terms(D, sigma, problem.spec, &S);
  DataMatrix grad = apply_B_adjoint(problem.graph, S);
  grad += X - problem.A;
  return grad;
}

JacobianInfo select_jacobian(const DataMatrix& X, const EdgeMatrix& Z_tilde, double sigma,
                             const Problem& problem) {
  check_subproblem_args(X, Z_tilde, sigma, problem, "select_jacobian");
  JacobianInfo info;
  info.sigma = sigma;
  info.D = apply_B(problem.graph, X);
  info.D += Z_tilde / sigma;

  const int num_edges = problem.graph.num_edges();
  info.alpha.resize(num_edges);
  info.active_edges.reserve(static_cast<std::size_t>(num_edges));
  for (int e = 0; e < num_edges; ++e) {
    const double norm = info.D.col(e).norm();
    if (norm > 0.0) {
      info.alpha[e] = problem.spec.radius(e) / (sigma * norm);
    } else {
      info.alpha[e] = std::numeric_limits<double>::infinity();
    }
    if (info.alpha[e] < 1.0) {
      info.active_edges.push_back(e);
    }
  }
  return info;
}

DataMatrix jacobian_vector_product(const JacobianInfo& info, const Problem& problem,
                                   const DataMatrix& H) {
  if (H.rows() != problem.d() || H.cols() != problem.n()) {
    throw std::invalid_argument("jacobian_vector_product: H shape mismatch");
  }
  if (info.D.cols() != problem.graph.num_edges()) {
    throw std::invalid_argument("jacobian_vector_product: info built for a different graph");
  }
  const double sigma = info.sigma;

  // V(H) = H + sigma B*B(H) - sigma B*(P B(H)). The B*B part rides on the
  // cached Laplacian; P vanishes off the active set, so its (1 - alpha)
  // identity part and rank-one D part reduce to one scatter over the
  // active edges, O(d |active|).
  DataMatrix out = H + sigma * (H * problem.lap);
  const auto& edges = problem.graph.edges();
  for (int e : info.active_edges) {
    const auto [i, j] = edges[static_cast<std::size_t>(e)];
    const auto d_col = info.D.col(e);
    const Vector g = H.col(i) - H.col(j);
    const double rho = info.alpha[e] * d_col.dot(g) / d_col.squaredNorm();
    const Vector w = sigma * ((1.0 - info.alpha[e]) * g + rho * d_col);
    out.col(i) -= w;
    out.col(j) += w;
  }
  return out;
}

CgPreconditioner::CgPreconditioner(const JacobianInfo& info, const Problem& problem)
    : block_mode_(problem.d() <= kBlockDirectMaxDim) {
  refactorize(info, problem);
}

void CgPreconditioner::assemble(const JacobianInfo& info, const Problem& problem) {
  const int d = problem.d();
  const int n = problem.n();
  const double sigma = info.sigma;
  if (block_mode_) {
    // exact d x d-block assembly of V = I + sigma B*(I - P)B: every edge
    // contributes C_e = I on the inactive set and alpha (I - D^ D^T) on the
    // active set; all d^2 entries per block are emitted so the sparsity
    // pattern stays fixed across refactorizations
    const auto& edges = problem.graph.edges();
    Eigen::MatrixXd node_diag = Eigen::MatrixXd::Zero(d, static_cast<Eigen::Index>(d) * n);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(d) * d *
                  (static_cast<std::size_t>(n) + 2 * static_cast<std::size_t>(info.D.cols())));
    Eigen::MatrixXd C(d, d);
    for (Eigen::Index e = 0; e < info.D.cols(); ++e) {
      const double alpha = info.alpha[e];
      if (alpha >= 1.0) {
        C = Eigen::MatrixXd::Identity(d, d);
      } else {
        const Vector unit = info.D.col(e) / info.D.col(e).norm();
        C.noalias() = (-alpha) * (unit * unit.transpose());
        C.diagonal().array() += alpha;
      }
      const auto [i, j] = edges[static_cast<std::size_t>(e)];
      node_diag.middleCols(i * d, d) += C;
      node_diag.middleCols(j * d, d) += C;
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          const double v = -sigma * C(r, c);
          trips.emplace_back(i * d + r, j * d + c, v);
          trips.emplace_back(j * d + r, i * d + c, v);
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          const double v = sigma * node_diag(r, i * d + c) + (r == c ? 1.0 : 0.0);
          trips.emplace_back(i * d + r, i * d + c, v);
        }
      }
    }
    matrix_.resize(static_cast<Eigen::Index>(d) * n, static_cast<Eigen::Index>(d) * n);
    matrix_.setFromTriplets(trips.begin(), trips.end());
  } else {
    // I + sigma L_S with the Jacobian's edge scaling: coefficient 1 on
    // fused edges, alpha on active ones
    const Vector scalars = info.alpha.cwiseMin(1.0);
    matrix_ = scaled_laplacian(problem.graph, scalars);
    matrix_ *= sigma;
    SparseMatrix identity(n, n);
    identity.setIdentity();
    matrix_ += identity;
  }
  matrix_.makeCompressed();
}

void CgPreconditioner::refactorize(const JacobianInfo& info, const Problem& problem) {
  assemble(info, problem);
  if (!analyzed_) {
    ldlt_.analyzePattern(matrix_);
    analyzed_ = true;
  }
  ldlt_.factorize(matrix_);
  if (ldlt_.info() != Eigen::Success) {
    throw NumericalError("CgPreconditioner: factorization failed");
  }
}

DataMatrix CgPreconditioner::apply(const DataMatrix& R) const {
  if (block_mode_) {
    const Eigen::Map<const Vector> rhs(R.data(), R.size());
    const Vector solved = ldlt_.solve(rhs);
    return Eigen::Map<const DataMatrix>(solved.data(), R.rows(), R.cols());
  }
  return ldlt_.solve(R.transpose()).transpose();
}

CgResult cg_solve(const JacobianInfo& info, const Problem& problem, const DataMatrix& rhs,
                  double tol_abs, int max_cg, const CgPreconditioner* precond) {
  CgResult result;
  result.direction = DataMatrix::Zero(rhs.rows(), rhs.cols());
  if (rhs.norm() <= tol_abs) {
    result.converged = true;
    return result;
  }

  DataMatrix r = rhs;
  DataMatrix z = precond != nullptr ? precond->apply(r) : r;
  DataMatrix p = z;
  DataMatrix Vp(rhs.rows(), rhs.cols());
  double rz = frob_dot(r, z);
  for (int it = 0; it < max_cg; ++it) {
    Vp = jacobian_vector_product(info, problem, p);
    const double pVp = frob_dot(p, Vp);
    if (!std::isfinite(pVp)) {
      throw NumericalError("cg_solve: non-finite curvature");
    }
    if (pVp <= 0.0) {
      // impossible for I + sigma B*(I-P)B unless arithmetic broke down
      throw NumericalError("cg_solve: nonpositive curvature on a positive definite system");
    }
    const double step = rz / pVp;
    result.direction += step * p;
    r -= step * Vp;
    ++result.iterations;
    if (r.norm() <= tol_abs) {
      result.converged = true;
      return result;
    }
    z = precond != nullptr ? precond->apply(r) : r;
    const double rz_new = frob_dot(r, z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return result;  // best iterate at the cap, converged = false
}

LineSearchResult line_search(const DataMatrix& X, const DataMatrix& direction,
                             const EdgeMatrix& Z_tilde, double sigma, const Problem& problem,
                             const NewtonConfig& config) {
  check_subproblem_args(X, Z_tilde, sigma, problem, "line_search");
  const DataMatrix grad = phi_gradient(X, Z_tilde, sigma, problem);
  const double slope = frob_dot(grad, direction);
  if (!(slope < 0.0)) {
    throw NumericalError("line_search: direction is not a descent direction");
  }

  // phi along the ray, without the constant -||Z~||^2/(2 sigma): the
  // fidelity term is a scalar quadratic in the step and only the edge part
  // needs fresh norms per trial.
  const EdgeMatrix D0 = apply_B(problem.graph, X) + Z_tilde / sigma;
  const EdgeMatrix Bd = apply_B(problem.graph, direction);
  const double fid0 = 0.5 * (X - problem.A).squaredNorm();
  const double fid1 = frob_dot(X - problem.A, direction);
  const double fid2 = 0.5 * direction.squaredNorm();
  const double base = fid0 + penalty_terms(D0, sigma, problem.spec, nullptr);

  LineSearchResult result;
  EdgeMatrix D_trial(D0.rows(), D0.cols());
  double alpha = 1.0;
  for (int m = 0; m <= kMaxBacktracks; ++m, alpha *= config.delta) {
    D_trial.noalias() = D0 + alpha * Bd;
    const double trial =
        fid0 + alpha * fid1 + alpha * alpha * fid2 +
        penalty_terms(D_trial, sigma, problem.spec, nullptr);
    ++result.evals;
    if (trial <= base + config.mu * alpha * slope) {
      result.alpha = alpha;
      result.X = X + alpha * direction;
      return result;
    }
  }
  throw NumericalError("line_search: no Armijo step within 60 backtracks");
}

SubproblemResult solve_subproblem(const DataMatrix& X0, const EdgeMatrix& Z_tilde, double sigma,
                                  const Problem& problem, const NewtonConfig& config,
                                  double outer_eps) {
  check_subproblem_args(X0, Z_tilde, sigma, problem, "solve_subproblem");
  SubproblemResult result;
  result.X = X0;

  std::unique_ptr<CgPreconditioner> precond;
  DataMatrix grad = phi_gradient(result.X, Z_tilde, sigma, problem);
  double grad_norm = grad.norm();
  result.grad_norms.push_back(grad_norm);
  while (!subproblem_tolerance_met(grad_norm, outer_eps, sigma) &&
         result.newton_iters < config.max_newton) {
    if (!std::isfinite(grad_norm)) {
      throw NumericalError("solve_subproblem: non-finite gradient");
    }
    const JacobianInfo info = select_jacobian(result.X, Z_tilde, sigma, problem);
    if (config.precondition) {
      if (precond == nullptr) {
        precond = std::make_unique<CgPreconditioner>(info, problem);
      } else {
        precond->refactorize(info, problem);
      }
    }
    const double cg_tol =
        std::min(config.eta_bar, std::pow(grad_norm, 1.0 + config.tau));
    const CgResult cg = cg_solve(info, problem, -grad, cg_tol, config.max_cg, precond.get());
    result.cg_iters += cg.iterations;
    result.cg_capped = result.cg_capped || !cg.converged;

    LineSearchResult ls = line_search(result.X, cg.direction, Z_tilde, sigma, problem, config);
    result.X = std::move(ls.X);
    ++result.newton_iters;

    grad = phi_gradient(result.X, Z_tilde, sigma, problem);
    grad_norm = grad.norm();
    result.grad_norms.push_back(grad_norm);

    // near the floating-point noise floor the gradient norm stops moving;
    // grinding further Newton steps cannot help
    const std::size_t count = result.grad_norms.size();
    if (count >= 6 && grad_norm > 0.99 * result.grad_norms[count - 6]) {
      break;
    }
  }
  result.tolerance_met = subproblem_tolerance_met(grad_norm, outer_eps, sigma);

  EdgeMatrix D = apply_B(problem.graph, result.X);
  D += Z_tilde / sigma;
  result.U = prox_p(D, 1.0 / sigma, problem.spec);
  return result;
}

}  // namespace sonclust
