#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cmath>
#include <string>

#include "conbqa/errors.hpp"
#include "conbqa/objectives.hpp"
#include "conbqa/rng.hpp"

using namespace conbqa;

namespace {

// Compass search with step halving; used only to cross-check the stored optimum.
double local_max(const Objective& f, std::vector<double> x) {
  double fx = f.evaluate(x);
  for (double step = 0.1; step > 1e-10;) {
    bool moved = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double dir : {-1.0, 1.0}) {
        auto y = x;
        y[i] = std::clamp(y[i] + dir * step, 0.0, 1.0);
        const double fy = f.evaluate(y);
        if (fy > fx) {
          x = std::move(y);
          fx = fy;
          moved = true;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return fx;
}

double golden_min(double (*g)(double), double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  while (b - a > 1e-12) {
    if (g(c) < g(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - r * (b - a);
    d = a + r * (b - a);
  }
  return 0.5 * (a + b);
}

double st1(double x) { return 0.5 * (x * x * x * x - 16.0 * x * x + 5.0 * x); }

}  // namespace

TEST(Hartmann6, OptimumMatchesMultistartSearch) {
  const auto f = hartmann6();
  ASSERT_EQ(f.dim, 6u);
  ASSERT_TRUE(f.optimum_known);
  Rng rng(51);
  double best = -1e300;
  for (int s = 0; s < 60; ++s) {
    std::vector<double> x(6);
    for (auto& v : x) v = rng.uniform();
    best = std::max(best, local_max(f, x));
  }
  EXPECT_NEAR(best, 3.32237, 1e-4);
  EXPECT_LE(best, f.optimum_value + 1e-9);
  EXPECT_NEAR(f.evaluate(f.optimum_location), f.optimum_value, 1e-6);
}

TEST(StyblinskiTang, OptimumMatchesGoldenSection) {
  const double xs = golden_min(st1, -5.0, 0.0);
  EXPECT_NEAR(xs, -2.903534, 1e-6);
  for (std::size_t d : {1u, 2u, 5u}) {
    const auto f = styblinski_tang(d);
    EXPECT_NEAR(f.optimum_value, -double(d) * st1(xs), 1e-9);
    EXPECT_NEAR(f.optimum_value, 39.16617 * double(d), 1e-4 * double(d));
    EXPECT_NEAR(f.evaluate(f.optimum_location), f.optimum_value, 1e-9);
  }
}

TEST(Rescaling, MapsUnitCubeOntoNativeDomain) {
  Rng rng(52);
  const auto r = rastrigin(3);
  const auto s = styblinski_tang(3);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> u(3), xr(3), xs(3);
    for (std::size_t i = 0; i < 3; ++i) {
      u[i] = rng.uniform();
      xr[i] = -5.12 + 10.24 * u[i];
      xs[i] = -5.0 + 10.0 * u[i];
    }
    EXPECT_NEAR(r.evaluate(u), -rastrigin_textbook(xr), 1e-9);
    EXPECT_NEAR(s.evaluate(u), -styblinski_tang_textbook(xs), 1e-9);
  }
  EXPECT_EQ(r.evaluate(std::vector<double>{0.5, 0.5, 0.5}), 0.0);
  EXPECT_EQ(r.optimum_value, 0.0);
}

TEST(Objectives, TotalOnCubeAndBoundedByOptimum) {
  Rng rng(53);
  for (const auto& name : {"hartmann6", "rastrigin-4", "styblinski-tang-3"}) {
    const auto f = registry_lookup(name);
    for (int t = 0; t < 500; ++t) {
      std::vector<double> x(f.dim);
      for (auto& v : x) v = t < 2 ? double(t) : rng.uniform();
      const double y = f.evaluate(x);
      ASSERT_TRUE(std::isfinite(y)) << name;
      ASSERT_LE(y, f.optimum_value + 1e-9) << name;
    }
  }
}

TEST(Registry, Lookups) {
  EXPECT_EQ(registry_lookup("hartmann6").dim, 6u);
  EXPECT_EQ(registry_lookup("rastrigin-7").dim, 7u);
  EXPECT_EQ(registry_lookup("styblinski-tang-2").name, "styblinski-tang-2");
  EXPECT_THROW(registry_lookup("rastrigin-0"), LookupError);
  EXPECT_THROW(registry_lookup("rastrigin-x"), LookupError);
  EXPECT_THROW(registry_lookup("sphere"), LookupError);
  try {
    registry_lookup("f11-cec");
    FAIL();
  } catch (const LookupError& e) {
    EXPECT_NE(std::string(e.what()).find("hartmann6"), std::string::npos);
  }
  EXPECT_FALSE(registry_names().empty());
}
