#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "conbqa/rng.hpp"

namespace conbqa {

/// Closed interval [lower, upper] inside [0, 1] with lower < upper.
struct Interval {
  double lower = 0.0;
  double upper = 1.0;

  bool contains(double t) const { return lower <= t && t <= upper; }
  double length() const { return upper - lower; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-parallel box that constrains a few coordinates and leaves the rest at
/// [0, 1]. `coords` is sorted and `intervals[k]` belongs to `coords[k]`.
struct Rectangle {
  std::vector<std::size_t> coords;
  std::vector<Interval> intervals;

  bool contains(std::span<const double> x) const;

  /// Boundary contact counts as intersection.
  bool intersects(const Rectangle& other) const;

  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

/// Binary code z of length m.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false) : bits_(size, value ? 1 : 0) {}
  explicit BitVector(std::vector<std::uint8_t> bits);

  /// Parses a string such as "0110".
  static BitVector from_string(std::string_view text);

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t k) const { return bits_[k] != 0; }
  void set(std::size_t k, bool value) { bits_[k] = value ? 1 : 0; }
  void flip(std::size_t k) { bits_[k] ^= 1; }

  std::size_t count() const;
  bool all() const { return count() == size(); }
  bool none() const { return count() == 0; }

  std::span<const std::uint8_t> bits() const { return bits_; }
  std::string to_string() const;

  /// Lexicographic order on the bit string, z_0 first.
  friend auto operator<=>(const BitVector&, const BitVector&) = default;
  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Fixed set of m random rectangles plus their pairwise overlap graph.
class Codebook {
 public:
  /// Validates the rectangles against `dim` and computes the overlap graph.
  Codebook(std::size_t dim, std::size_t subspace_dim, std::size_t coverage_n,
           std::vector<Rectangle> rectangles);

  std::size_t dim() const { return dim_; }
  std::size_t subspace_dim() const { return subspace_dim_; }
  std::size_t coverage_n() const { return coverage_n_; }
  std::size_t size() const { return rectangles_.size(); }

  const std::vector<Rectangle>& rectangles() const { return rectangles_; }
  const Rectangle& rectangle(std::size_t k) const { return rectangles_[k]; }

  bool overlaps(std::size_t i, std::size_t j) const { return overlap_[i * size() + j] != 0; }

  /// Overlapping pairs (i, j), i < j, in row-major order.
  const std::vector<std::pair<std::size_t, std::size_t>>& overlap_edges() const { return edges_; }

  /// Pairs (i, j), i < j, whose rectangles are disjoint.
  std::vector<std::pair<std::size_t, std::size_t>> disjoint_pairs() const;

  std::string to_json() const;
  static Codebook from_json(std::string_view text);

  friend bool operator==(const Codebook& a, const Codebook& b) {
    return a.dim_ == b.dim_ && a.subspace_dim_ == b.subspace_dim_ &&
           a.coverage_n_ == b.coverage_n_ && a.rectangles_ == b.rectangles_;
  }

 private:
  std::size_t dim_;
  std::size_t subspace_dim_;
  std::size_t coverage_n_;
  std::vector<Rectangle> rectangles_;
  std::vector<std::uint8_t> overlap_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

inline constexpr std::size_t kDefaultCoverageN = 3;

/// Interval covering any fixed t in [0, 1] with probability exactly
/// 1/coverage_n: split [0, 1] at coverage_n - 1 uniform breakpoints and pick
/// one of the resulting cells uniformly.
Interval sample_interval(Rng& rng, std::size_t coverage_n);

Rectangle sample_rectangle(Rng& rng, std::size_t dim, std::size_t subspace_dim,
                           std::size_t coverage_n);

Codebook generate_codebook(Rng& rng, std::size_t dim, std::size_t subspace_dim,
                           std::size_t num_bits, std::size_t coverage_n = kDefaultCoverageN);

/// Bit k is set iff x lies in rectangle k (closed intervals).
BitVector encode(const Codebook& codebook, std::span<const double> x);

}  // namespace conbqa
