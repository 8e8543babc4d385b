#include <gtest/gtest.h>

#include <vector>

#include "conbqa/coding.hpp"
#include "conbqa/errors.hpp"
#include "conbqa/geometry.hpp"
#include "conbqa/qubo.hpp"
#include "support/oracles.hpp"

using namespace conbqa;

namespace {

Rectangle rect(std::vector<std::size_t> coords, std::vector<Interval> ivs) { return {std::move(coords), std::move(ivs)}; }

}  // namespace

TEST(PositiveIntersection, AllZerosIsFullCube) {
  const Codebook cb(3, 1, 3, {rect({0}, {{0.1, 0.2}}), rect({2}, {{0.5, 0.6}})});
  const Box p = positive_intersection(cb, BitVector(2));
  EXPECT_EQ(p, Box::full(3));
}

TEST(PositiveIntersection, NarrowsSharedCoordinate) {
  const Codebook cb(2, 1, 3, {rect({0}, {{0.1, 0.5}}), rect({0}, {{0.3, 0.8}})});
  const Box p = positive_intersection(cb, BitVector::from_string("11"));
  ASSERT_FALSE(p.is_empty());
  EXPECT_DOUBLE_EQ(p.lower(0), 0.3);
  EXPECT_DOUBLE_EQ(p.upper(0), 0.5);
  EXPECT_DOUBLE_EQ(p.lower(1), 0.0);
  EXPECT_DOUBLE_EQ(p.upper(1), 1.0);
}

TEST(PositiveIntersection, DisjointPairIsEmpty) {
  const Codebook cb(2, 2, 3,
                    {rect({0, 1}, {{0.0, 0.4}, {0.0, 0.4}}), rect({0, 1}, {{0.6, 1.0}, {0.6, 1.0}})});
  EXPECT_TRUE(positive_intersection(cb, BitVector::from_string("11")).is_empty());
  EXPECT_THROW(positive_intersection(cb, BitVector(3)), ContractError);
}

TEST(TouchesNegative, NoNegativesMeansNoContact) {
  const Codebook cb(1, 1, 3, {rect({0}, {{0.1, 0.5}})});
  const auto z = BitVector::from_string("1");
  EXPECT_FALSE(touches_negative(cb, z, positive_intersection(cb, z)));
}

TEST(TouchesNegative, NegativeEqualToBox) {
  const Codebook cb(1, 1, 3, {rect({0}, {{0.1, 0.5}}), rect({0}, {{0.1, 0.5}})});
  const auto z = BitVector::from_string("10");
  EXPECT_TRUE(touches_negative(cb, z, positive_intersection(cb, z)));
}

TEST(TouchesNegative, ClosedBoundaryContact) {
  const Codebook cb(1, 1, 3, {rect({0}, {{0.3, 0.5}}), rect({0}, {{0.5, 0.9}})});
  const auto z = BitVector::from_string("10");
  EXPECT_TRUE(touches_negative(cb, z, positive_intersection(cb, z)));
}

TEST(TouchesNegative, EmptyBoxIsContractError) {
  const Codebook cb(1, 1, 3, {rect({0}, {{0.3, 0.5}})});
  EXPECT_THROW(touches_negative(cb, BitVector(1), Box::empty(1)), ContractError);
}

TEST(Classify, Trichotomy) {
  const Codebook disjoint(2, 2, 3,
                          {rect({0, 1}, {{0.0, 0.4}, {0.0, 0.4}}), rect({0, 1}, {{0.6, 1.0}, {0.6, 1.0}})});
  EXPECT_EQ(classify(disjoint, BitVector::from_string("11")), SolutionClass::Empty);
  EXPECT_EQ(classify(disjoint, BitVector::from_string("00")), SolutionClass::Admissible);
  const Codebook single(2, 1, 3, {rect({0}, {{0.2, 0.4}})});
  EXPECT_EQ(classify(single, BitVector::from_string("1")), SolutionClass::Decodable);
}

TEST(Decode, EmptyCodeSamplesWholeCube) {
  const Codebook cb(3, 3, 3,
                    {rect({0, 1, 2}, {{0.0, 0.2}, {0.0, 0.2}, {0.0, 0.2}}),
                     rect({0, 1, 2}, {{0.5, 1.0}, {0.5, 1.0}, {0.5, 1.0}})});
  const auto z = BitVector::from_string("11");
  Rng rng(1);
  std::vector<double> mean(3, 0.0);
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const auto x = decode(cb, z, rng);
    for (std::size_t i = 0; i < 3; ++i) mean[i] += x[i] / n;
  }
  for (double m : mean) EXPECT_NEAR(m, 0.5, 0.02);
}

TEST(Decode, DecodableStaysInsideBox) {
  const Codebook cb(2, 1, 3, {rect({0}, {{0.2, 0.4}})});
  Rng rng(2);
  for (int k = 0; k < 1000; ++k) {
    const auto x = decode(cb, BitVector::from_string("1"), rng);
    ASSERT_GE(x[0], 0.2);
    ASSERT_LE(x[0], 0.4);
  }
}

TEST(Decode, AdmissibleAvoidsNegativeSliver) {
  // P = [0.2, 0.8]; the negative rectangle covers 10% of it.
  const Codebook cb(1, 1, 3, {rect({0}, {{0.2, 0.8}}), rect({0}, {{0.2, 0.26}})});
  const auto z = BitVector::from_string("10");
  ASSERT_EQ(classify(cb, z), SolutionClass::Admissible);
  Rng rng(3);
  int clean = 0;
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const auto x = decode(cb, z, rng, 100);
    ASSERT_GE(x[0], 0.2);
    ASSERT_LE(x[0], 0.8);
    clean += !(x[0] <= 0.26);
  }
  EXPECT_GE(clean, 9900);
}

TEST(Decode, FullyCoveredAdmissibleFallsBackToP) {
  const Codebook cb(1, 1, 3, {rect({0}, {{0.2, 0.4}}), rect({0}, {{0.1, 0.5}})});
  Rng rng(4);
  const auto x = decode(cb, BitVector::from_string("10"), rng, 5);
  EXPECT_GE(x[0], 0.2);
  EXPECT_LE(x[0], 0.4);
}

TEST(GeometryProperty, DecodableRoundTrip) {
  Rng rng(5);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    // Maximal weighted cliques with positive weights are decodable.
    const auto inst = oracle::random_instance(rng, 2 + trial % 3, 2, 10);
    const auto z = oracle::constrained_argmax_brute(inst.codebook, inst.weights);
    if (classify(inst.codebook, z) != SolutionClass::Decodable) continue;
    ++checked;
    for (int s = 0; s < 20; ++s) {
      const auto x = decode(inst.codebook, z, rng);
      ASSERT_EQ(encode(inst.codebook, x), z);
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(GeometryProperty, PairwiseContactMatchesGridSampling) {
  // Dense grid check of the box/rectangle contact test in 2-D.
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto cb = generate_codebook(rng, 2, 1, 6);
    BitVector z(cb.size());
    for (std::size_t k = 0; k < z.size(); ++k) z.set(k, rng.uniform() < 0.5);
    const Box p = positive_intersection(cb, z);
    if (p.is_empty()) continue;
    const bool exact = touches_negative(cb, z, p);
    bool sampled = false;
    const int g = 200;
    for (int a = 0; a <= g && !sampled; ++a) {
      for (int b = 0; b <= g && !sampled; ++b) {
        const std::vector<double> x{p.lower(0) + (p.upper(0) - p.lower(0)) * a / g,
                                    p.lower(1) + (p.upper(1) - p.lower(1)) * b / g};
        for (std::size_t k = 0; k < z.size(); ++k) {
          if (!z[k] && cb.rectangle(k).contains(x)) sampled = true;
        }
      }
    }
    // The grid can miss thin contacts but never invents one.
    if (sampled) ASSERT_TRUE(exact);
    if (!exact) ASSERT_FALSE(sampled);
  }
}

TEST(GeometryProperty, CliqueCodesHaveNonemptyIntersection) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto cb = generate_codebook(rng, 2 + trial % 3, 2, 10);
    oracle::for_each_code(cb.size(), [&](const BitVector& z) {
      if (feasible_for_C(cb, z)) ASSERT_FALSE(positive_intersection(cb, z).is_empty());
    });
  }
}
