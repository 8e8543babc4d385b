#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace conbqa {

/// Seeded random stream.
///
/// Wraps std::mt19937_64 but draws reals and bounded integers with fixed
/// bit-level recipes instead of the <random> distributions, whose outputs are
/// implementation-defined. A given seed therefore yields the same sequence on
/// every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Independent child stream keyed by a name and an index. Derivation uses
  /// only the seed, so it does not depend on how much of this stream has been
  /// consumed.
  Rng derive(std::string_view name, std::uint64_t index = 0) const;

  /// Bare seed of the child stream that derive() would construct.
  static std::uint64_t derive_seed(std::uint64_t seed, std::string_view name, std::uint64_t index);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace conbqa
