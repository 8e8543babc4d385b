#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conbqa/driver.hpp"
#include "conbqa/errors.hpp"

using namespace conbqa;

namespace {

RunConfig small_config(std::uint64_t seed = 3) {
  RunConfig c;
  c.num_bits = 20;
  c.num_initial = 5;
  c.num_iterations = 8;
  c.solver.sa.num_reads = 8;
  c.solver.sa.sweeps_per_read = 100;
  c.seed = seed;
  return c;
}

Objective constant(double v) {
  Objective f;
  f.name = "constant";
  f.dim = 2;
  f.evaluate = [v](std::span<const double>) { return v; };
  f.optimum_value = v;
  f.optimum_known = true;
  return f;
}

}  // namespace

TEST(Driver, ZeroIterationsRecordsOnlyInitialization) {
  auto c = small_config();
  c.num_iterations = 0;
  const auto rec = run(c, hartmann6());
  EXPECT_TRUE(rec.iterations.empty());
  EXPECT_EQ(rec.initial_ys.size(), 5u);
  EXPECT_EQ(rec.final_regret(), rec.initial_regret);
  EXPECT_THROW(class_statistics(rec), StatisticsError);
}

TEST(Driver, ConstantObjectiveHasZeroRegret) {
  const auto rec = run(small_config(), constant(2.5));
  ASSERT_EQ(rec.iterations.size(), 8u);
  for (const auto& it : rec.iterations) EXPECT_EQ(it.regret, 0.0);
  EXPECT_FALSE(rec.aborted);
}

TEST(Driver, ThrowingObjectiveAbortsWithPartialRecord) {
  auto f = constant(1.0);
  int calls = 0;
  f.evaluate = [&calls](std::span<const double>) -> double {
    if (++calls > 7) throw std::runtime_error("sensor offline");
    return 1.0;
  };
  const auto rec = run(small_config(), f);
  EXPECT_TRUE(rec.aborted);
  EXPECT_EQ(rec.iterations.size(), 2u);
  EXPECT_NE(rec.error.find("sensor offline"), std::string::npos);

  calls = 0;
  auto nan = constant(1.0);
  nan.evaluate = [](std::span<const double>) { return std::nan(""); };
  const auto r2 = run(small_config(), nan);
  EXPECT_TRUE(r2.aborted);
  EXPECT_TRUE(r2.initial_ys.empty());
}

TEST(Driver, InvalidConfigurations) {
  auto c = small_config();
  c.subspace_dim = 7;
  EXPECT_THROW(run(c, hartmann6()), InvalidParameter);
  c = small_config();
  c.num_initial = 0;
  EXPECT_THROW(run(c, hartmann6()), InvalidParameter);
  c = small_config();
  c.solver.kind = SolverKind::Exhaustive;
  c.num_bits = 30;
  EXPECT_THROW(run(c, hartmann6()), InvalidParameter);
  c = small_config();
  c.objective = "nope";
  EXPECT_THROW(run(c), LookupError);
}

TEST(Driver, RecordInvariants) {
  const auto rec = run(small_config(11), hartmann6());
  ASSERT_TRUE(rec.codebook);
  ASSERT_EQ(rec.iterations.size(), 8u);
  double prev = rec.initial_best;
  for (std::size_t t = 0; t < rec.iterations.size(); ++t) {
    const auto& it = rec.iterations[t];
    EXPECT_EQ(it.index, t + 1);
    ASSERT_TRUE(it.solution_class);
    EXPECT_EQ(*it.solution_class, classify(*rec.codebook, it.z_star));
    EXPECT_NE(*it.solution_class, SolutionClass::Empty);
    EXPECT_EQ(it.x_star.size(), 6u);
    EXPECT_EQ(it.best_so_far, std::max(prev, it.y_star));
    EXPECT_GE(it.regret, 0.0);
    EXPECT_EQ(it.regret, rec.optimum_value - it.best_so_far);
    prev = it.best_so_far;
  }
  EXPECT_EQ(rec.regret_at(0), rec.initial_regret);
  EXPECT_EQ(rec.regret_at(3), rec.iterations[2].regret);
  EXPECT_EQ(class_counts(rec).total(), 8u);
}

TEST(Driver, JsonIsByteIdenticalForSameSeed) {
  const auto a = run(small_config(21), hartmann6());
  const auto b = run(small_config(21), hartmann6());
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_EQ(a.to_csv(), b.to_csv());
  const auto c = run(small_config(22), hartmann6());
  EXPECT_NE(a.to_json(), c.to_json());
}

TEST(Driver, CsvLayout) {
  const auto rec = run(small_config(), hartmann6());
  const auto csv = rec.to_csv();
  EXPECT_EQ(csv.rfind("index,class,y_star,best_so_far,regret\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

TEST(RandomBaseline, DeterministicAndMonotone) {
  auto c = small_config(5);
  c.num_iterations = 50;
  const auto a = run_random_baseline(c, hartmann6());
  const auto b = run_random_baseline(c, hartmann6());
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_FALSE(a.codebook);
  double prev = a.initial_regret;
  for (const auto& it : a.iterations) {
    EXPECT_FALSE(it.solution_class);
    EXPECT_LE(it.regret, prev);
    prev = it.regret;
  }
  // Same initial design as the controlled run.
  EXPECT_EQ(a.initial_xs, run(small_config(5), hartmann6()).initial_xs);
}

TEST(ClassCounts, Fractions) {
  ClassCounts c{1, 3, 0};
  c += ClassCounts{0, 0, 4};
  const auto f = c.fractions();
  EXPECT_DOUBLE_EQ(f.empty, 0.125);
  EXPECT_DOUBLE_EQ(f.admissible, 0.375);
  EXPECT_DOUBLE_EQ(f.decodable, 0.5);
  EXPECT_THROW(ClassCounts{}.fractions(), StatisticsError);
}
