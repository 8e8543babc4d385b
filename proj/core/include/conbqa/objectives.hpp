#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace conbqa {

/// Black-box benchmark on [0, 1]^d, maximization convention.
struct Objective {
  std::string name;
  std::size_t dim = 0;
  std::function<double(std::span<const double>)> evaluate;
  double optimum_value = 0.0;
  bool optimum_known = false;
  /// A maximizer in [0, 1]^d when known.
  std::vector<double> optimum_location;
};

/// Negated Hartmann-6 (4-term exponential sum), maximum ≈ 3.32237.
Objective hartmann6();

/// Negated Rastrigin on [-5.12, 5.12]^d mapped onto [0, 1]^d. Maximum 0 at the cube center.
Objective rastrigin(std::size_t dim);

/// Negated Styblinski-Tang on [-5, 5]^d mapped onto [0, 1]^d. Maximum ≈ 39.16617 d.
Objective styblinski_tang(std::size_t dim);

/// Textbook (unscaled, minimization) forms, shared with tests.
double rastrigin_textbook(std::span<const double> x);
double styblinski_tang_textbook(std::span<const double> x);

/// Names: "hartmann6", "rastrigin-<d>", "styblinski-tang-<d>".
Objective registry_lookup(std::string_view name);

std::vector<std::string> registry_names();

}  // namespace conbqa
