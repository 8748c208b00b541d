#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sonclust/types.hpp"

namespace sonclust {

/// Deterministic random stream: mt19937_64 with explicit bit-to-double and
/// Box-Muller transforms, so the same seed yields the same doubles on any
/// platform (the standard library's distributions make no such promise).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct LabeledDataset {
  DataMatrix data;          // d x n
  std::vector<int> labels;  // ground-truth component per observation
};

/// Two interlocking half moons in the plane: the upper arc is the unit
/// upper semicircle at the origin, the lower arc is its point reflection
/// reaching down to (1, -0.5), both with isotropic Gaussian noise.
LabeledDataset two_half_moons(int n, double noise_sd, std::uint64_t seed);

/// Gaussian mixture description: column c of means is component c's center.
struct GaussianMixtureSpec {
  std::vector<int> sizes;
  DataMatrix means;  // d x num_components
  Vector sds;        // isotropic standard deviation per component
};

/// The default unbalanced benchmark mixture: eight planar components,
/// three of 2000 points and five of 100 (n = 6500), scaled down by
/// `divisor` for reduced-size runs.
GaussianMixtureSpec unbalanced_gaussian_spec(int divisor = 1);

/// Samples the mixture, then min-max scales every coordinate onto [0, 1].
LabeledDataset unbalanced_gaussian(std::uint64_t seed, const GaussianMixtureSpec& mix);
LabeledDataset unbalanced_gaussian(std::uint64_t seed);

/// Reads a rectangular numeric CSV. With rows_are_observations, CSV row r
/// becomes column r of the result. Raises with the offending line number
/// on ragged or non-numeric input.
DataMatrix load_csv(const std::string& path, bool rows_are_observations,
                    bool skip_header = false);

/// Writes A in the same orientation convention, full double precision.
void save_csv(const DataMatrix& A, const std::string& path, bool rows_are_observations);

/// Min-max scales each coordinate (row) onto [0, 1]. Constant coordinates
/// map to 0.5; their indices are appended to degenerate_coords when given.
DataMatrix scale_unit(const DataMatrix& A, std::vector<int>* degenerate_coords = nullptr);

}  // namespace sonclust
