#include "conbqa/coding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "conbqa/errors.hpp"

namespace conbqa {

bool Rectangle::contains(std::span<const double> x) const {
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (!intervals[k].contains(x[coords[k]])) return false;
  }
  return true;
}

bool Rectangle::intersects(const Rectangle& other) const {
  // Both coordinate lists are sorted; only shared coordinates can separate.
  std::size_t a = 0;
  std::size_t b = 0;
  while (a < coords.size() && b < other.coords.size()) {
    if (coords[a] < other.coords[b]) {
      ++a;
    } else if (other.coords[b] < coords[a]) {
      ++b;
    } else {
      const double lo = std::max(intervals[a].lower, other.intervals[b].lower);
      const double hi = std::min(intervals[a].upper, other.intervals[b].upper);
      if (lo > hi) return false;
      ++a;
      ++b;
    }
  }
  return true;
}

BitVector::BitVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) {
    if (b > 1) throw InvalidParameter("BitVector: entries must be 0 or 1");
  }
}

BitVector BitVector::from_string(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw InvalidParameter("BitVector: expected only '0' and '1'");
    bits.push_back(c == '1' ? 1 : 0);
  }
  return BitVector(std::move(bits));
}

std::size_t BitVector::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string BitVector::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k]) s[k] = '1';
  }
  return s;
}

Codebook::Codebook(std::size_t dim, std::size_t subspace_dim, std::size_t coverage_n,
                   std::vector<Rectangle> rectangles)
    : dim_(dim), subspace_dim_(subspace_dim), coverage_n_(coverage_n),
      rectangles_(std::move(rectangles)) {
  if (dim_ == 0) throw InvalidParameter("Codebook: dim must be positive");
  if (subspace_dim_ == 0 || subspace_dim_ > dim_) {
    throw InvalidParameter("Codebook: subspace_dim must be in [1, dim]");
  }
  if (coverage_n_ < 2) throw InvalidParameter("Codebook: coverage_n must be at least 2");
  if (rectangles_.empty()) throw InvalidParameter("Codebook: need at least one rectangle");

  for (const auto& r : rectangles_) {
    if (r.coords.size() != subspace_dim_ || r.intervals.size() != subspace_dim_) {
      throw InvalidParameter("Codebook: rectangle does not constrain subspace_dim coordinates");
    }
    for (std::size_t k = 0; k < r.coords.size(); ++k) {
      if (r.coords[k] >= dim_) throw InvalidParameter("Codebook: coordinate index out of range");
      if (k > 0 && r.coords[k - 1] >= r.coords[k]) {
        throw InvalidParameter("Codebook: coordinates must be distinct and ascending");
      }
      const auto& iv = r.intervals[k];
      if (!(0.0 <= iv.lower && iv.lower < iv.upper && iv.upper <= 1.0)) {
        throw InvalidParameter("Codebook: interval must satisfy 0 <= lower < upper <= 1");
      }
    }
  }

  const std::size_t m = rectangles_.size();
  overlap_.assign(m * m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (rectangles_[i].intersects(rectangles_[j])) {
        overlap_[i * m + j] = overlap_[j * m + i] = 1;
        edges_.emplace_back(i, j);
      }
    }
  }
}

std::vector<std::pair<std::size_t, std::size_t>> Codebook::disjoint_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) {
      if (!overlaps(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::string Codebook::to_json() const {
  // ordered_json keeps the documented field order.
  nlohmann::ordered_json doc;
  doc["dim"] = dim_;
  doc["subspace_dim"] = subspace_dim_;
  doc["coverage_n"] = coverage_n_;
  auto rects = nlohmann::ordered_json::array();
  for (const auto& r : rectangles_) {
    nlohmann::ordered_json jr;
    jr["coords"] = r.coords;
    auto lowers = nlohmann::ordered_json::array();
    auto uppers = nlohmann::ordered_json::array();
    for (const auto& iv : r.intervals) {
      lowers.push_back(iv.lower);
      uppers.push_back(iv.upper);
    }
    jr["lowers"] = std::move(lowers);
    jr["uppers"] = std::move(uppers);
    rects.push_back(std::move(jr));
  }
  doc["rectangles"] = std::move(rects);
  return doc.dump();
}

Codebook Codebook::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("codebook: ") + e.what());
  }
  try {
    std::vector<Rectangle> rects;
    for (const auto& jr : doc.at("rectangles")) {
      Rectangle r;
      r.coords = jr.at("coords").get<std::vector<std::size_t>>();
      const auto lowers = jr.at("lowers").get<std::vector<double>>();
      const auto uppers = jr.at("uppers").get<std::vector<double>>();
      if (lowers.size() != r.coords.size() || uppers.size() != r.coords.size()) {
        throw ParseError("codebook: coords/lowers/uppers length mismatch");
      }
      for (std::size_t k = 0; k < lowers.size(); ++k) r.intervals.push_back({lowers[k], uppers[k]});
      rects.push_back(std::move(r));
    }
    return Codebook(doc.at("dim").get<std::size_t>(), doc.at("subspace_dim").get<std::size_t>(),
                    doc.at("coverage_n").get<std::size_t>(), std::move(rects));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("codebook: ") + e.what());
  }
}

Interval sample_interval(Rng& rng, std::size_t coverage_n) {
  if (coverage_n < 2) throw InvalidParameter("sample_interval: coverage_n must be at least 2");
  std::vector<double> cuts(coverage_n + 1);
  for (;;) {
    cuts.front() = 0.0;
    cuts.back() = 1.0;
    for (std::size_t k = 1; k < coverage_n; ++k) cuts[k] = rng.uniform();
    std::sort(cuts.begin() + 1, cuts.end() - 1);
    const std::size_t cell = rng.below(coverage_n);
    const Interval iv{cuts[cell], cuts[cell + 1]};
    if (iv.lower < iv.upper) return iv;
  }
}

Rectangle sample_rectangle(Rng& rng, std::size_t dim, std::size_t subspace_dim,
                           std::size_t coverage_n) {
  if (subspace_dim == 0 || subspace_dim > dim) {
    throw InvalidParameter("sample_rectangle: subspace_dim must be in [1, dim]");
  }
  if (coverage_n < 2) throw InvalidParameter("sample_rectangle: coverage_n must be at least 2");

  // Partial Fisher-Yates: the first subspace_dim slots are a uniform subset.
  std::vector<std::size_t> pool(dim);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t k = 0; k < subspace_dim; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(rng.below(dim - k));
    std::swap(pool[k], pool[pick]);
  }
  Rectangle r;
  r.coords.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(subspace_dim));
  std::sort(r.coords.begin(), r.coords.end());
  r.intervals.reserve(subspace_dim);
  for (std::size_t k = 0; k < subspace_dim; ++k) r.intervals.push_back(sample_interval(rng, coverage_n));
  return r;
}

Codebook generate_codebook(Rng& rng, std::size_t dim, std::size_t subspace_dim,
                           std::size_t num_bits, std::size_t coverage_n) {
  if (num_bits == 0) throw InvalidParameter("generate_codebook: need at least one bit");
  std::vector<Rectangle> rects;
  rects.reserve(num_bits);
  for (std::size_t k = 0; k < num_bits; ++k) {
    rects.push_back(sample_rectangle(rng, dim, subspace_dim, coverage_n));
  }
  return Codebook(dim, subspace_dim, coverage_n, std::move(rects));
}

BitVector encode(const Codebook& codebook, std::span<const double> x) {
  if (x.size() != codebook.dim()) throw ContractError("encode: point has wrong dimension");
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("encode: point component outside [0, 1]");
  }
  BitVector z(codebook.size());
  for (std::size_t k = 0; k < codebook.size(); ++k) z.set(k, codebook.rectangle(k).contains(x));
  return z;
}

}  // namespace conbqa
