#include "conbqa/rng.hpp"

#include <limits>

namespace conbqa {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a; stable across platforms unlike std::hash.
std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection on the top of the range keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % bound;
}

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ hash_name(name)) + splitmix64(index + 0x632be59bd9b4e019ULL));
}

Rng Rng::derive(std::string_view name, std::uint64_t index) const {
  return Rng(derive_seed(seed_, name, index));
}

}  // namespace conbqa
