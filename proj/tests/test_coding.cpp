#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "conbqa/coding.hpp"
#include "conbqa/errors.hpp"

using namespace conbqa;

namespace {

Rectangle rect(std::vector<std::size_t> coords, std::vector<Interval> ivs) { return {std::move(coords), std::move(ivs)}; }

double coverage_fraction(Rng& rng, std::size_t n, double t, std::size_t draws) {
  std::size_t hits = 0;
  for (std::size_t k = 0; k < draws; ++k) hits += sample_interval(rng, n).contains(t);
  return static_cast<double>(hits) / static_cast<double>(draws);
}

}  // namespace

TEST(SampleInterval, CoverageOneThirdAcrossGrid) {
  Rng rng(11);
  for (double t : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    EXPECT_NEAR(coverage_fraction(rng, 3, t, 100000), 1.0 / 3.0, 0.01) << "t=" << t;
  }
}

TEST(SampleInterval, CoverageOneHalfAtMidpoint) {
  Rng rng(12);
  EXPECT_NEAR(coverage_fraction(rng, 2, 0.5, 100000), 0.5, 0.01);
}

TEST(SampleInterval, EndpointsOrderedInsideUnit) {
  Rng rng(13);
  for (int k = 0; k < 10000; ++k) {
    const auto iv = sample_interval(rng, 3);
    ASSERT_LE(0.0, iv.lower);
    ASSERT_LT(iv.lower, iv.upper);
    ASSERT_LE(iv.upper, 1.0);
  }
}

TEST(SampleInterval, RejectsCoverageBelowTwo) {
  Rng rng(1);
  EXPECT_THROW(sample_interval(rng, 1), InvalidParameter);
  EXPECT_THROW(sample_interval(rng, 0), InvalidParameter);
}

TEST(SampleRectangle, DistinctSortedCoords) {
  Rng rng(2);
  for (int k = 0; k < 1000; ++k) {
    const auto r = sample_rectangle(rng, 6, 2, 3);
    ASSERT_EQ(r.coords.size(), 2u);
    ASSERT_EQ(r.intervals.size(), 2u);
    ASSERT_LT(r.coords[0], r.coords[1]);
    ASSERT_LT(r.coords[1], 6u);
  }
}

TEST(SampleRectangle, SingleCoordinate) {
  Rng rng(3);
  EXPECT_EQ(sample_rectangle(rng, 1, 1, 3).coords, std::vector<std::size_t>{0});
}

TEST(SampleRectangle, CoordinateFrequencyMatchesHypergeometric) {
  Rng rng(4);
  std::vector<std::size_t> counts(10, 0);
  const int draws = 10000;
  for (int k = 0; k < draws; ++k) {
    for (auto c : sample_rectangle(rng, 10, 2, 3).coords) ++counts[c];
  }
  for (auto c : counts) EXPECT_NEAR(static_cast<double>(c) / draws, 0.2, 0.02);
}

TEST(SampleRectangle, RejectsSubspaceLargerThanDim) {
  Rng rng(5);
  EXPECT_THROW(sample_rectangle(rng, 3, 4, 3), InvalidParameter);
  EXPECT_THROW(sample_rectangle(rng, 3, 0, 3), InvalidParameter);
}

TEST(Codebook, DisjointCoordinateSubsetsOverlap) {
  const Codebook cb(2, 1, 3, {rect({0}, {{0.1, 0.2}}), rect({1}, {{0.8, 0.9}})});
  EXPECT_TRUE(cb.overlaps(0, 1));
  ASSERT_EQ(cb.overlap_edges().size(), 1u);
}

TEST(Codebook, DisjointIntervalsOnSharedCoordinate) {
  const Codebook cb(1, 1, 3, {rect({0}, {{0.1, 0.2}}), rect({0}, {{0.3, 0.4}})});
  EXPECT_FALSE(cb.overlaps(0, 1));
  EXPECT_TRUE(cb.overlap_edges().empty());
  ASSERT_EQ(cb.disjoint_pairs().size(), 1u);
}

TEST(Codebook, EdgesMatchRecomputation) {
  Rng rng(6);
  const auto cb = generate_codebook(rng, 6, 2, 60);
  std::size_t expected = 0;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    for (std::size_t j = i + 1; j < cb.size(); ++j) {
      // Independent check: shared coordinates with overlapping intervals.
      bool meet = true;
      const auto& a = cb.rectangle(i);
      const auto& b = cb.rectangle(j);
      for (std::size_t p = 0; p < a.coords.size(); ++p) {
        for (std::size_t q = 0; q < b.coords.size(); ++q) {
          if (a.coords[p] == b.coords[q] &&
              std::max(a.intervals[p].lower, b.intervals[q].lower) > std::min(a.intervals[p].upper, b.intervals[q].upper)) {
            meet = false;
          }
        }
      }
      EXPECT_EQ(cb.overlaps(i, j), meet);
      expected += meet;
    }
  }
  EXPECT_EQ(cb.overlap_edges().size(), expected);
  for (const auto& [i, j] : cb.overlap_edges()) EXPECT_LT(i, j);
}

TEST(Codebook, DeterministicForSeed) {
  Rng a(99);
  Rng b(99);
  EXPECT_EQ(generate_codebook(a, 6, 2, 60), generate_codebook(b, 6, 2, 60));
}

TEST(Codebook, JsonRoundTripIsExact) {
  Rng rng(7);
  const auto cb = generate_codebook(rng, 6, 2, 30);
  const auto text = cb.to_json();
  const auto back = Codebook::from_json(text);
  EXPECT_EQ(back, cb);
  EXPECT_EQ(back.overlap_edges(), cb.overlap_edges());
  EXPECT_EQ(back.to_json(), text);
  EXPECT_EQ(text.rfind("{\"dim\":6,\"subspace_dim\":2,\"coverage_n\":3,\"rectangles\":[{\"coords\":", 0), 0u);
}

TEST(Codebook, RejectsMalformedRectangles) {
  EXPECT_THROW(Codebook(2, 1, 3, {}), InvalidParameter);
  EXPECT_THROW(Codebook(2, 1, 3, {rect({2}, {{0.1, 0.2}})}), InvalidParameter);
  EXPECT_THROW(Codebook(2, 2, 3, {rect({1, 0}, {{0.1, 0.2}, {0.1, 0.2}})}), InvalidParameter);
  EXPECT_THROW(Codebook(2, 1, 3, {rect({0}, {{0.3, 0.3}})}), InvalidParameter);
  EXPECT_THROW(Codebook::from_json("{\"dim\":2"), ParseError);
}

TEST(Encode, PointOutsideEveryRectangle) {
  const Codebook cb(2, 1, 3, {rect({0}, {{0.1, 0.2}}), rect({1}, {{0.1, 0.2}})});
  const std::vector<double> x{0.9, 0.9};
  EXPECT_TRUE(encode(cb, x).none());
}

TEST(Encode, IntersectionOfTwoRectanglesSetsBothBits) {
  const Codebook cb(2, 2, 3,
                    {rect({0, 1}, {{0.1, 0.5}, {0.1, 0.5}}), rect({0, 1}, {{0.4, 0.9}, {0.4, 0.9}})});
  const std::vector<double> x{0.45, 0.45};
  EXPECT_EQ(encode(cb, x).to_string(), "11");
}

TEST(Encode, BoundaryIsInside) {
  const Codebook cb(1, 1, 3, {rect({0}, {{0.25, 0.5}})});
  EXPECT_EQ(encode(cb, std::vector<double>{0.25}).to_string(), "1");
  EXPECT_EQ(encode(cb, std::vector<double>{0.5}).to_string(), "1");
}

TEST(Encode, RejectsOutOfDomain) {
  const Codebook cb(1, 1, 3, {rect({0}, {{0.25, 0.5}})});
  EXPECT_THROW(encode(cb, std::vector<double>{1.5}), DomainError);
  EXPECT_THROW(encode(cb, std::vector<double>{-0.1}), DomainError);
  EXPECT_THROW(encode(cb, std::vector<double>{0.1, 0.2}), ContractError);
}

TEST(EncodeProperty, MatchesDirectMembership) {
  Rng rng(8);
  const auto cb = generate_codebook(rng, 5, 2, 40);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> x(5);
    for (auto& v : x) v = rng.uniform();
    const auto z = encode(cb, x);
    for (std::size_t k = 0; k < cb.size(); ++k) {
      bool inside = true;
      const auto& r = cb.rectangle(k);
      for (std::size_t p = 0; p < r.coords.size(); ++p) {
        inside = inside && r.intervals[p].lower <= x[r.coords[p]] && x[r.coords[p]] <= r.intervals[p].upper;
      }
      ASSERT_EQ(z[k], inside);
    }
  }
}

TEST(EncodeProperty, WideningIntervalsOnlyAddsBits) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto cb = generate_codebook(rng, 4, 2, 20);
    auto rects = cb.rectangles();
    for (auto& r : rects) {
      for (auto& iv : r.intervals) {
        iv.lower = std::max(0.0, iv.lower - 0.1 * rng.uniform());
        iv.upper = std::min(1.0, iv.upper + 0.1 * rng.uniform());
      }
    }
    const Codebook wider(4, 2, 3, rects);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> x(4);
      for (auto& v : x) v = rng.uniform();
      const auto z = encode(cb, x);
      const auto zw = encode(wider, x);
      for (std::size_t k = 0; k < z.size(); ++k) ASSERT_TRUE(!z[k] || zw[k]);
    }
  }
}

TEST(BitVector, LexicographicOrderAndParsing) {
  EXPECT_LT(BitVector::from_string("01"), BitVector::from_string("10"));
  EXPECT_LT(BitVector::from_string("001"), BitVector::from_string("010"));
  EXPECT_EQ(BitVector::from_string("0110").to_string(), "0110");
  EXPECT_EQ(BitVector::from_string("0110").count(), 2u);
  EXPECT_THROW(BitVector::from_string("012"), InvalidParameter);
}

TEST(Rng, DeriveDependsOnlyOnSeed) {
  Rng a(5);
  Rng b(5);
  (void)b.next_u64();
  EXPECT_EQ(a.derive("x", 3).next_u64(), b.derive("x", 3).next_u64());
  EXPECT_NE(a.derive("x", 3).next_u64(), a.derive("x", 4).next_u64());
  EXPECT_NE(a.derive("x").next_u64(), a.derive("y").next_u64());
}
