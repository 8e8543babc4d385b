#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "conbqa/coding.hpp"
#include "conbqa/rng.hpp"

namespace conbqa {

/// Axis-parallel box over all d coordinates, or the distinguished empty box.
class Box {
 public:
  /// Full cube [0, 1]^dim.
  static Box full(std::size_t dim);
  static Box empty(std::size_t dim);
  Box(std::vector<double> lowers, std::vector<double> uppers);

  bool is_empty() const { return empty_; }
  std::size_t dim() const { return lowers_.size(); }
  double lower(std::size_t i) const { return lowers_[i]; }
  double upper(std::size_t i) const { return uppers_[i]; }
  std::span<const double> lowers() const { return lowers_; }
  std::span<const double> uppers() const { return uppers_; }

  bool contains(std::span<const double> x) const;
  bool intersects(const Rectangle& r) const;

  /// Narrows this box by r. Becomes empty if some coordinate crosses over.
  void intersect_with(const Rectangle& r);

  friend bool operator==(const Box&, const Box&) = default;

 private:
  Box() = default;
  std::vector<double> lowers_;
  std::vector<double> uppers_;
  bool empty_ = false;
};

enum class SolutionClass { Empty, Admissible, Decodable };

std::string_view to_string(SolutionClass c);
SolutionClass solution_class_from_string(std::string_view name);

/// P(z): intersection of every rectangle whose bit is set. The intersection
/// of no rectangles is the full cube.
Box positive_intersection(const Codebook& codebook, const BitVector& z);

/// True iff some rectangle with a zero bit meets `p`. Since N(z) is a union,
/// this is exactly P ∩ N != ∅.
bool touches_negative(const Codebook& codebook, const BitVector& z, const Box& p);

SolutionClass classify(const Codebook& codebook, const BitVector& z);

inline constexpr std::size_t kDefaultDecodeAttempts = 100;

/// Maps z back to a point of [0, 1]^d.
///
/// Empty codes sample the whole cube; decodable codes sample P(z) uniformly;
/// admissible codes rejection-sample P(z) against the negative rectangles and
/// fall back to the last P(z) draw after `max_attempts` failures.
std::vector<double> decode(const Codebook& codebook, const BitVector& z, Rng& rng,
                           std::size_t max_attempts = kDefaultDecodeAttempts);

}  // namespace conbqa
