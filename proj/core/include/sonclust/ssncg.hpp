#pragma once

#include <memory>
#include <vector>

#include <Eigen/SparseCholesky>

#include "sonclust/problem.hpp"

namespace sonclust {

/// Parameters of the semismooth Newton-CG inner solver.
struct NewtonConfig {
  double mu = 1e-4;       // Armijo slope fraction, in (0, 1/2)
  double tau = 0.5;       // CG tolerance exponent, in (0, 1]
  double eta_bar = 0.05;  // CG residual cap, in (0, 1)
  double delta = 0.5;     // backtracking ratio, in (0, 1)
  int max_newton = 50;
  int max_cg = 300;
  bool precondition = true;  // precondition CG by a factorization of I + sigma L
};

struct JacobianInfo;

/// Sparse factorization used to precondition the Newton systems, rebuilt
/// whenever the generalized Jacobian changes. For small d it factorizes
/// the exact d x d-block matrix of V = I + sigma B*(I - P)B, so CG
/// converges in a couple of iterations at any penalty level; for larger d
/// it falls back to I + sigma L_S with the Jacobian's edge scaling, which
/// is exact on fused edges and cheap per application.
class CgPreconditioner {
 public:
  CgPreconditioner(const JacobianInfo& info, const Problem& problem);

  /// Refreshes the numeric factorization for a new Jacobian on the same
  /// graph, reusing the symbolic analysis.
  void refactorize(const JacobianInfo& info, const Problem& problem);

  DataMatrix apply(const DataMatrix& R) const;

  bool exact() const { return block_mode_; }

  /// Largest d for which the exact block factorization is used.
  static constexpr int kBlockDirectMaxDim = 8;

 private:
  void assemble(const JacobianInfo& info, const Problem& problem);

  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  SparseMatrix matrix_;
  bool block_mode_ = false;
  bool analyzed_ = false;
};

/// One generalized-Jacobian element at the current Newton iterate, in the
/// structured form used by the matrix-free matvec. alpha_e is the shrink
/// factor of edge e (+inf encodes a zero-norm column of D); edges with
/// alpha_e < 1 form the active set, the only edges the P part of the
/// matvec has to touch.
struct JacobianInfo {
  EdgeMatrix D;                   // B(X) + Z~ / sigma
  Vector alpha;                   // per edge, +inf sentinel for ||D^(e)|| = 0
  std::vector<int> active_edges;  // {e : alpha_e < 1}, ascending
  double sigma = 1.0;
};

/// phi(X) = inf_U of the augmented Lagrangian at multiplier Z~ and
/// penalty sigma.
double phi_value(const DataMatrix& X, const EdgeMatrix& Z_tilde, double sigma,
                 const Problem& problem);

/// grad phi(X) = X - A + B*(Prox_{sigma p*}(sigma B(X) + Z~)).
DataMatrix phi_gradient(const DataMatrix& X, const EdgeMatrix& Z_tilde, double sigma,
                        const Problem& problem);

/// Chooses the generalized-Jacobian element at X and precomputes the
/// second-order-sparsity structure backing jacobian_vector_product.
JacobianInfo select_jacobian(const DataMatrix& X, const EdgeMatrix& Z_tilde, double sigma,
                             const Problem& problem);

/// Applies V = I + sigma B*(I - P)B to H matrix-free. The P part touches
/// only active edges, so its cost is O(d |active|) on top of the O(d |E|)
/// Laplacian product.
DataMatrix jacobian_vector_product(const JacobianInfo& info, const Problem& problem,
                                   const DataMatrix& H);

struct CgResult {
  DataMatrix direction;
  int iterations = 0;
  bool converged = false;
};

/// Conjugate gradients on the self-adjoint positive definite operator V,
/// run until ||V d - rhs|| <= tol_abs or max_cg iterations. The stopping
/// test uses the plain residual whether or not a preconditioner is given.
CgResult cg_solve(const JacobianInfo& info, const Problem& problem, const DataMatrix& rhs,
                  double tol_abs, int max_cg, const CgPreconditioner* precond = nullptr);

struct LineSearchResult {
  double alpha = 1.0;
  DataMatrix X;
  int evals = 0;
};

/// Armijo backtracking along a descent direction: alpha = delta^m for the
/// first m with phi(X + delta^m d) <= phi(X) + mu delta^m <grad phi, d>.
LineSearchResult line_search(const DataMatrix& X, const DataMatrix& direction,
                             const EdgeMatrix& Z_tilde, double sigma, const Problem& problem,
                             const NewtonConfig& config);

struct SubproblemResult {
  DataMatrix X;
  EdgeMatrix U;
  int newton_iters = 0;
  int cg_iters = 0;
  std::vector<double> grad_norms;  // ||grad phi|| at each iterate, final included
  bool tolerance_met = false;
  bool cg_capped = false;  // some CG solve stopped at max_cg short of its tolerance
};

/// Runs Newton iterations from X0 until ||grad phi|| <= outer_eps / max(1,
/// sqrt(sigma)) or the iteration cap, then recovers U by the exact prox.
SubproblemResult solve_subproblem(const DataMatrix& X0, const EdgeMatrix& Z_tilde, double sigma,
                                  const Problem& problem, const NewtonConfig& config,
                                  double outer_eps);

}  // namespace sonclust
