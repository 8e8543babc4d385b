#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "conbqa/geometry.hpp"
#include "conbqa/rng.hpp"

namespace conbqa {

/// Mean edge length over all coordinates of a nonempty box.
double rectangle_size(const Box& box);

struct ResolutionPoint {
  std::size_t dim = 0;
  std::size_t num_bits = 0;
  std::size_t subspace_dim = 0;
  std::size_t coverage_n = 0;
  std::size_t num_probe_points = 0;
  double mean_ri = 0.0;
  /// Sample standard deviation over probes (0 for a single probe).
  double std_ri = 0.0;
  /// Per-probe intersection sizes, in probe order.
  std::vector<double> sizes;
};

inline constexpr std::size_t kDefaultProbePoints = 50;

/// One codebook, then for each uniform probe p the size of P(encode(p)).
ResolutionPoint resolution_study(std::size_t dim, std::size_t num_bits, std::size_t subspace_dim,
                                 std::size_t coverage_n, std::size_t num_probe_points, Rng& rng);

struct TrendTest {
  double s = 0.0;     ///< Mann-Kendall S statistic
  double var_s = 0.0;
  double z = 0.0;     ///< continuity-corrected normal score
  double p_decreasing = 1.0;  ///< one-sided p-value for a downward trend
};

/// Mann-Kendall test of ys against the ordering xs. Pairs tied in x are
/// skipped; the variance uses the standard tie correction on ys.
TrendTest mann_kendall(std::span<const double> xs, std::span<const double> ys);

}  // namespace conbqa
