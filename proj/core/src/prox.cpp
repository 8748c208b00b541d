#include "sonclust/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace sonclust {

namespace {

void require_positive(double t, const char* what) {
  if (!(t > 0.0)) {
    throw std::invalid_argument(std::string(what) + ": threshold must be positive");
  }
}

void require_edge_count(const EdgeMatrix& U, const WeightedNormSpec& spec, const char* what) {
  if (U.cols() != spec.weights.size()) {
    throw std::invalid_argument(std::string(what) + ": column count must match the edge count");
  }
}

}  // namespace

Vector prox_l2_block(const Vector& x, double t) {
  require_positive(t, "prox_l2_block");
  const double norm = x.norm();
  if (norm <= t) {
    return Vector::Zero(x.size());
  }
  return (1.0 - t / norm) * x;
}

Vector prox_l1(const Vector& x, double t) {
  require_positive(t, "prox_l1");
  Vector out(x.size());
  for (Eigen::Index l = 0; l < x.size(); ++l) {
    out[l] = std::copysign(std::max(std::abs(x[l]) - t, 0.0), x[l]);
  }
  return out;
}

Vector project_l1_ball(const Vector& x, double r) {
  require_positive(r, "project_l1_ball");
  if (x.lpNorm<1>() <= r) {
    return x;
  }
  // Sort |x| descending, find the largest prefix whose soft-threshold stays
  // positive, then shrink by the prefix threshold.
  std::vector<double> mags(static_cast<std::size_t>(x.size()));
  for (Eigen::Index l = 0; l < x.size(); ++l) mags[static_cast<std::size_t>(l)] = std::abs(x[l]);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < mags.size(); ++j) {
    cumsum += mags[j];
    const double cand = (cumsum - r) / static_cast<double>(j + 1);
    if (mags[j] - cand > 0.0) {
      theta = cand;
    } else {
      break;
    }
  }
  Vector out(x.size());
  for (Eigen::Index l = 0; l < x.size(); ++l) {
    out[l] = std::copysign(std::max(std::abs(x[l]) - theta, 0.0), x[l]);
  }
  return out;
}

Vector prox_linf(const Vector& x, double t) {
  require_positive(t, "prox_linf");
  if (x.lpNorm<1>() <= t) {
    return Vector::Zero(x.size());
  }
  return x - project_l1_ball(x, t);
}

Vector project_ball(const Vector& x, double r) {
  const double norm = x.norm();
  if (norm <= r) {
    return x;
  }
  return (r / norm) * x;
}

double p_value(const EdgeMatrix& U, const WeightedNormSpec& spec) {
  require_edge_count(U, spec, "p_value");
  double sum = 0.0;
  for (Eigen::Index e = 0; e < U.cols(); ++e) {
    sum += spec.weights[e] * U.col(e).norm();
  }
  return spec.gamma * sum;
}

EdgeMatrix prox_p(const EdgeMatrix& U, double t, const WeightedNormSpec& spec) {
  require_positive(t, "prox_p");
  require_edge_count(U, spec, "prox_p");
  EdgeMatrix out(U.rows(), U.cols());
  for (Eigen::Index e = 0; e < U.cols(); ++e) {
    const double threshold = t * spec.radius(e);
    const double norm = U.col(e).norm();
    if (norm <= threshold) {
      out.col(e).setZero();
    } else {
      out.col(e) = (1.0 - threshold / norm) * U.col(e);
    }
  }
  return out;
}

EdgeMatrix project_omega(const EdgeMatrix& Z, const WeightedNormSpec& spec) {
  require_edge_count(Z, spec, "project_omega");
  EdgeMatrix out(Z.rows(), Z.cols());
  for (Eigen::Index e = 0; e < Z.cols(); ++e) {
    const double radius = spec.radius(e);
    const double norm = Z.col(e).norm();
    // the relative slack absorbs the rounding of a previous rescale, making
    // the projection idempotent bit for bit
    if (norm <= radius * (1.0 + 1e-12)) {
      out.col(e) = Z.col(e);
    } else {
      out.col(e) = (radius / norm) * Z.col(e);
    }
  }
  return out;
}

double prox_conjugate_check(const Vector& x, double t, const WeightedNormSpec& spec,
                            Eigen::Index edge) {
  require_positive(t, "prox_conjugate_check");
  const double radius = spec.radius(edge);
  const Vector lhs = prox_l2_block(x, t * radius) + t * project_ball(x / t, radius);
  return (lhs - x).norm();
}

}  // namespace sonclust
