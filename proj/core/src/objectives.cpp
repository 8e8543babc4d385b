#include "conbqa/objectives.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "conbqa/errors.hpp"

namespace conbqa {

namespace {

constexpr double kAlpha[4] = {1.0, 1.2, 3.0, 3.2};

constexpr double kA[4][6] = {
    {10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
    {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
    {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
    {17.0, 8.0, 0.05, 10.0, 0.1, 14.0},
};

constexpr double kP[4][6] = {
    {0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
    {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
    {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
    {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381},
};

constexpr double kRastriginHalfWidth = 5.12;
constexpr double kStyblinskiHalfWidth = 5.0;
// Root of 4x^3 - 32x + 5 = 0 near -2.9035.
constexpr double kStyblinskiArgmin = -2.903534027771178;

double to_box(double u, double half_width) { return -half_width + 2.0 * half_width * u; }

void check_dim(std::span<const double> x, std::size_t dim, const char* what) {
  if (x.size() != dim) throw ContractError(std::string(what) + ": point has wrong dimension");
}

}  // namespace

Objective hartmann6() {
  Objective o;
  o.name = "hartmann6";
  o.dim = 6;
  o.evaluate = [](std::span<const double> x) {
    check_dim(x, 6, "hartmann6");
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      double inner = 0.0;
      for (int j = 0; j < 6; ++j) {
        const double d = x[static_cast<std::size_t>(j)] - kP[i][j];
        inner += kA[i][j] * d * d;
      }
      sum += kAlpha[i] * std::exp(-inner);
    }
    return sum;
  };
  o.optimum_location = {0.20168951, 0.15001069, 0.47687398, 0.27533243, 0.31165162, 0.65730053};
  // Published optimum; the rounded location above evaluates to within 1e-12 of it.
  o.optimum_value = std::max(3.32236801141551, o.evaluate(o.optimum_location));
  o.optimum_known = true;
  return o;
}

double rastrigin_textbook(std::span<const double> x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
  return s;
}

double styblinski_tang_textbook(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v * v * v - 16.0 * v * v + 5.0 * v;
  return 0.5 * s;
}

Objective rastrigin(std::size_t dim) {
  if (dim < 1) throw InvalidParameter("rastrigin: dim must be at least 1");
  Objective o;
  o.name = "rastrigin-" + std::to_string(dim);
  o.dim = dim;
  o.evaluate = [dim](std::span<const double> u) {
    check_dim(u, dim, "rastrigin");
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < dim; ++i) x[i] = to_box(u[i], kRastriginHalfWidth);
    return -rastrigin_textbook(x);
  };
  o.optimum_location.assign(dim, 0.5);
  o.optimum_value = 0.0;
  o.optimum_known = true;
  return o;
}

Objective styblinski_tang(std::size_t dim) {
  if (dim < 1) throw InvalidParameter("styblinski_tang: dim must be at least 1");
  Objective o;
  o.name = "styblinski-tang-" + std::to_string(dim);
  o.dim = dim;
  o.evaluate = [dim](std::span<const double> u) {
    check_dim(u, dim, "styblinski_tang");
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < dim; ++i) x[i] = to_box(u[i], kStyblinskiHalfWidth);
    return -styblinski_tang_textbook(x);
  };
  const double u_star = (kStyblinskiArgmin + kStyblinskiHalfWidth) / (2.0 * kStyblinskiHalfWidth);
  o.optimum_location.assign(dim, u_star);
  o.optimum_value = o.evaluate(o.optimum_location);
  o.optimum_known = true;
  return o;
}

std::vector<std::string> registry_names() {
  return {"hartmann6", "rastrigin-<d>", "styblinski-tang-<d>"};
}

namespace {

bool parse_suffix_dim(std::string_view name, std::string_view prefix, std::size_t& dim) {
  if (name.substr(0, prefix.size()) != prefix) return false;
  const auto digits = name.substr(prefix.size());
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), dim);
  return !digits.empty() && ec == std::errc{} && ptr == digits.data() + digits.size();
}

}  // namespace

Objective registry_lookup(std::string_view name) {
  std::size_t dim = 0;
  if (name == "hartmann6") return hartmann6();
  if (parse_suffix_dim(name, "rastrigin-", dim) && dim >= 1) return rastrigin(dim);
  if (parse_suffix_dim(name, "styblinski-tang-", dim) && dim >= 1) return styblinski_tang(dim);

  std::string msg = "unknown objective '" + std::string(name) + "'";
  if (name.find("cec") != std::string_view::npos) msg += " (CEC composition functions are not supported)";
  msg += "; available:";
  for (const auto& n : registry_names()) msg += " " + n;
  throw LookupError(msg);
}

}  // namespace conbqa
