#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "conbqa/coding.hpp"
#include "conbqa/regression.hpp"

namespace conbqa {

/// Quadratic unconstrained binary problem, minimization sense.
///
/// Absent keys are zero coefficients. Quadratic keys are (i, j) with i < j.
class Qubo {
 public:
  using Pair = std::pair<std::size_t, std::size_t>;

  explicit Qubo(std::size_t num_vars) : num_vars_(num_vars) {}
  Qubo(std::size_t num_vars, std::map<std::size_t, double> linear, std::map<Pair, double> quadratic);

  std::size_t num_vars() const { return num_vars_; }
  const std::map<std::size_t, double>& linear() const { return linear_; }
  const std::map<Pair, double>& quadratic() const { return quadratic_; }

  double linear(std::size_t i) const;
  double quadratic(std::size_t i, std::size_t j) const;

  void set_linear(std::size_t i, double c);
  /// Order of i and j does not matter; i == j is rejected.
  void set_quadratic(std::size_t i, std::size_t j, double c);

  /// Sum of linear terms in index order, then quadratic terms in key order.
  double energy(const BitVector& z) const;

  /// Interchange document: {"linear", "num_vars", "quadratic", "sense"} with
  /// sorted keys and round-trip decimal reals.
  std::string to_json() const;
  static Qubo from_json(std::string_view text);

  friend bool operator==(const Qubo&, const Qubo&) = default;

 private:
  std::size_t num_vars_;
  std::map<std::size_t, double> linear_;
  std::map<Pair, double> quadratic_;
};

inline constexpr double kDefaultPenalty = 1.0;

/// Penalized form of max_{z in C} sum_k w_k z_k:
///   -A sum_i w_i z_i + B sum_{R_i ∩ R_j = ∅, i<j} z_i z_j
/// with A = 1 / max_k w_k (1 when every weight is zero) and B = `penalty`.
Qubo build_qubo(const Weights& weights, const Codebook& codebook, double penalty = kDefaultPenalty);

/// The scale A used by build_qubo.
double acquisition_scale(const Weights& weights);

/// True iff no two set bits belong to disjoint rectangles, i.e. the positive
/// set is a clique of the overlap graph.
bool feasible_for_C(const Codebook& codebook, const BitVector& z);

}  // namespace conbqa
