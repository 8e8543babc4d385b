#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "conbqa/coding.hpp"

namespace conbqa {

/// Nonnegative coefficients of the linear surrogate y = sum_k w_k z_k.
struct Weights {
  std::vector<double> w;

  std::size_t size() const { return w.size(); }
  double max() const;
};

/// (y - min) / (max - min). A constant input maps to all zeros.
std::vector<double> minmax_normalize(std::span<const double> ys);

struct NnlsOptions {
  /// Outer iterations are capped at `max_outer_factor * m`.
  std::size_t max_outer_factor = 10;
};

/// Least squares over w >= 0 for the binary design `zs` (n codes of length m).
///
/// Lawson-Hanson active set method; each passive-set subproblem is solved by
/// column-pivoted QR.
Weights fit_nnls(std::span<const BitVector> zs, std::span<const double> ys,
                 const NnlsOptions& options = {});

/// Dense row-major variant, used where the design is not binary.
Weights fit_nnls(std::span<const double> design, std::size_t rows, std::size_t cols,
                 std::span<const double> ys, const NnlsOptions& options = {});

/// Gradient of 0.5 * ||A w - y||^2, i.e. A^T (A w - y).
std::vector<double> nnls_gradient(std::span<const BitVector> zs, std::span<const double> ys,
                                  const Weights& weights);

/// g(z) = sum_k w_k z_k.
double acquisition(const Weights& weights, const BitVector& z);

}  // namespace conbqa
