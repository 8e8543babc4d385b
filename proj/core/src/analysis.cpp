#include "conbqa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "conbqa/coding.hpp"
#include "conbqa/errors.hpp"

namespace conbqa {

double rectangle_size(const Box& box) {
  if (box.is_empty()) throw ContractError("rectangle_size: box is empty");
  if (box.dim() == 0) throw ContractError("rectangle_size: zero-dimensional box");
  double total = 0.0;
  for (std::size_t i = 0; i < box.dim(); ++i) total += box.upper(i) - box.lower(i);
  return total / static_cast<double>(box.dim());
}

ResolutionPoint resolution_study(std::size_t dim, std::size_t num_bits, std::size_t subspace_dim,
                                 std::size_t coverage_n, std::size_t num_probe_points, Rng& rng) {
  if (num_probe_points == 0) throw InvalidParameter("resolution_study: need at least one probe");
  Rng codebook_rng = rng.derive("codebook");
  Rng probe_rng = rng.derive("probes");
  const Codebook codebook = generate_codebook(codebook_rng, dim, subspace_dim, num_bits, coverage_n);

  ResolutionPoint pt;
  pt.dim = dim;
  pt.num_bits = num_bits;
  pt.subspace_dim = subspace_dim;
  pt.coverage_n = coverage_n;
  pt.num_probe_points = num_probe_points;
  pt.sizes.reserve(num_probe_points);

  std::vector<double> p(dim);
  for (std::size_t k = 0; k < num_probe_points; ++k) {
    for (auto& v : p) v = probe_rng.uniform();
    const Box box = positive_intersection(codebook, encode(codebook, p));
    pt.sizes.push_back(rectangle_size(box));
  }
  double sum = 0.0;
  for (double s : pt.sizes) sum += s;
  pt.mean_ri = sum / static_cast<double>(num_probe_points);
  if (num_probe_points > 1) {
    double ss = 0.0;
    for (double s : pt.sizes) ss += (s - pt.mean_ri) * (s - pt.mean_ri);
    pt.std_ri = std::sqrt(ss / static_cast<double>(num_probe_points - 1));
  }
  return pt;
}

TrendTest mann_kendall(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ContractError("mann_kendall: size mismatch");
  const std::size_t n = xs.size();
  if (n < 3) throw StatisticsError("mann_kendall: need at least three observations");

  auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
  TrendTest t;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int sx = sign(xs[j] - xs[i]);
      if (sx == 0) continue;
      t.s += sx * sign(ys[j] - ys[i]);
    }
  }
  std::map<double, std::size_t> ties;
  for (double y : ys) ++ties[y];
  const double nn = static_cast<double>(n);
  t.var_s = nn * (nn - 1.0) * (2.0 * nn + 5.0);
  for (const auto& [value, count] : ties) {
    const double c = static_cast<double>(count);
    t.var_s -= c * (c - 1.0) * (2.0 * c + 5.0);
  }
  t.var_s /= 18.0;
  if (t.var_s > 0.0) {
    if (t.s > 0.0) t.z = (t.s - 1.0) / std::sqrt(t.var_s);
    if (t.s < 0.0) t.z = (t.s + 1.0) / std::sqrt(t.var_s);
  }
  t.p_decreasing = 0.5 * std::erfc(-t.z / std::sqrt(2.0));
  return t;
}

}  // namespace conbqa
