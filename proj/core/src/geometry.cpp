#include "conbqa/geometry.hpp"

#include <algorithm>
#include <string>

#include "conbqa/errors.hpp"

namespace conbqa {

Box Box::full(std::size_t dim) {
  Box b;
  b.lowers_.assign(dim, 0.0);
  b.uppers_.assign(dim, 1.0);
  return b;
}

Box Box::empty(std::size_t dim) {
  Box b = full(dim);
  b.empty_ = true;
  return b;
}

Box::Box(std::vector<double> lowers, std::vector<double> uppers)
    : lowers_(std::move(lowers)), uppers_(std::move(uppers)) {
  if (lowers_.size() != uppers_.size()) throw ContractError("Box: lowers/uppers size mismatch");
  for (std::size_t i = 0; i < lowers_.size(); ++i) {
    if (lowers_[i] > uppers_[i]) empty_ = true;
  }
}

bool Box::contains(std::span<const double> x) const {
  if (empty_) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] < lowers_[i] || x[i] > uppers_[i]) return false;
  }
  return true;
}

bool Box::intersects(const Rectangle& r) const {
  if (empty_) return false;
  for (std::size_t k = 0; k < r.coords.size(); ++k) {
    const std::size_t i = r.coords[k];
    if (std::max(lowers_[i], r.intervals[k].lower) > std::min(uppers_[i], r.intervals[k].upper)) {
      return false;
    }
  }
  return true;
}

void Box::intersect_with(const Rectangle& r) {
  if (empty_) return;
  for (std::size_t k = 0; k < r.coords.size(); ++k) {
    const std::size_t i = r.coords[k];
    lowers_[i] = std::max(lowers_[i], r.intervals[k].lower);
    uppers_[i] = std::min(uppers_[i], r.intervals[k].upper);
    if (lowers_[i] > uppers_[i]) empty_ = true;
  }
}

std::string_view to_string(SolutionClass c) {
  switch (c) {
    case SolutionClass::Empty:
      return "empty";
    case SolutionClass::Admissible:
      return "admissible";
    case SolutionClass::Decodable:
      return "decodable";
  }
  return "unknown";
}

SolutionClass solution_class_from_string(std::string_view name) {
  if (name == "empty") return SolutionClass::Empty;
  if (name == "admissible") return SolutionClass::Admissible;
  if (name == "decodable") return SolutionClass::Decodable;
  throw ParseError("unknown solution class '" + std::string(name) + "'");
}

Box positive_intersection(const Codebook& codebook, const BitVector& z) {
  if (z.size() != codebook.size()) throw ContractError("positive_intersection: code length != m");
  Box p = Box::full(codebook.dim());
  for (std::size_t k = 0; k < z.size() && !p.is_empty(); ++k) {
    if (z[k]) p.intersect_with(codebook.rectangle(k));
  }
  if (p.is_empty()) return Box::empty(codebook.dim());
  return p;
}

bool touches_negative(const Codebook& codebook, const BitVector& z, const Box& p) {
  if (z.size() != codebook.size()) throw ContractError("touches_negative: code length != m");
  if (p.is_empty()) throw ContractError("touches_negative: box must be nonempty");
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (!z[k] && p.intersects(codebook.rectangle(k))) return true;
  }
  return false;
}

SolutionClass classify(const Codebook& codebook, const BitVector& z) {
  const Box p = positive_intersection(codebook, z);
  if (p.is_empty()) return SolutionClass::Empty;
  return touches_negative(codebook, z, p) ? SolutionClass::Admissible : SolutionClass::Decodable;
}

namespace {

void sample_box(const Box& box, Rng& rng, std::vector<double>& x) {
  for (std::size_t i = 0; i < box.dim(); ++i) x[i] = rng.uniform(box.lower(i), box.upper(i));
}

bool in_any_negative(const Codebook& codebook, const BitVector& z, std::span<const double> x) {
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (!z[k] && codebook.rectangle(k).contains(x)) return true;
  }
  return false;
}

}  // namespace

std::vector<double> decode(const Codebook& codebook, const BitVector& z, Rng& rng,
                           std::size_t max_attempts) {
  if (z.size() != codebook.size()) throw ContractError("decode: code length != m");
  std::vector<double> x(codebook.dim());
  const Box p = positive_intersection(codebook, z);
  if (p.is_empty()) {
    sample_box(Box::full(codebook.dim()), rng, x);
    return x;
  }
  if (!touches_negative(codebook, z, p)) {
    sample_box(p, rng, x);
    return x;
  }
  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(max_attempts, 1); ++attempt) {
    sample_box(p, rng, x);
    if (!in_any_negative(codebook, z, x)) break;
  }
  return x;
}

}  // namespace conbqa
