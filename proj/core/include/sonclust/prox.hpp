#pragma once

#include "sonclust/types.hpp"

namespace sonclust {

/// Data defining the fusion penalty p(U) = gamma * sum_e w_e ||U^(e)||_2
/// and its conjugate's feasible set Omega (per-edge balls of radius
/// gamma * w_e). The weights are copied from the graph that produced them.
struct WeightedNormSpec {
  double gamma = 1.0;
  Vector weights;

  /// Dual ball radius of edge e.
  double radius(Eigen::Index e) const { return gamma * weights[e]; }
};

/// Blockwise soft-thresholding: [1 - t/||x||]_+ x, zero when ||x|| <= t.
Vector prox_l2_block(const Vector& x, double t);

/// Elementwise soft-thresholding: sign(x_l) * max(|x_l| - t, 0).
Vector prox_l1(const Vector& x, double t);

/// Euclidean projection onto {u : ||u||_1 <= r} by sort-and-threshold.
Vector project_l1_ball(const Vector& x, double r);

/// Prox of t*||.||_inf via x - P_{tS}(x) with S the unit l1-ball.
Vector prox_linf(const Vector& x, double t);

/// Euclidean projection onto the ball of radius r centered at the origin.
Vector project_ball(const Vector& x, double r);

/// p(U) = gamma * sum_e w_e ||U^(e)||_2.
double p_value(const EdgeMatrix& U, const WeightedNormSpec& spec);

/// Prox_{t p}: column e is blockwise soft-thresholded at t * gamma * w_e.
EdgeMatrix prox_p(const EdgeMatrix& U, double t, const WeightedNormSpec& spec);

/// Projection onto Omega: column e is rescaled onto the ball of radius
/// gamma * w_e. Also realizes Prox_{s p*} for any s > 0, since p* is the
/// indicator of Omega.
EdgeMatrix project_omega(const EdgeMatrix& Z, const WeightedNormSpec& spec);

/// Residual ||Prox_{tp}(x) + t Prox_{p*/t}(x/t) - x|| of the Moreau
/// identity for the single-column penalty gamma * w_e ||.||_2, with both
/// sides computed independently (soft-thresholding vs. ball projection).
double prox_conjugate_check(const Vector& x, double t, const WeightedNormSpec& spec,
                            Eigen::Index edge = 0);

}  // namespace sonclust
