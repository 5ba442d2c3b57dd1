#include <gtest/gtest.h>

#include "diophant/errors.hpp"
#include "diophant/intervals.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace diophant;

namespace {

IntervalUnion U(std::vector<RatInterval> raw) { return normalize(std::move(raw)); }

Rational R(long n, long d) { return Rational(n, d); }

std::vector<std::pair<Rational, Rational>> pairs_of(const std::vector<RatInterval>& raw) {
  std::vector<std::pair<Rational, Rational>> out;
  for (const auto& iv : raw) out.emplace_back(iv.lo, iv.hi);
  return out;
}

}  // namespace

TEST(Normalize, Examples) {
  const auto u = U({{0, R(1, 4)}, {R(1, 8), R(1, 2)}});
  ASSERT_EQ(u.size(), 1u);
  EXPECT_EQ(u.parts()[0], (RatInterval{0, R(1, 2)}));
  EXPECT_EQ(measure(u), R(1, 2));
  EXPECT_TRUE(U({}).empty());
  EXPECT_EQ(measure(U({})), 0);
  const auto c = U({{R(-1, 8), R(1, 8)}});
  EXPECT_EQ(c.parts()[0], (RatInterval{0, R(1, 8)}));
  EXPECT_EQ(measure(c), R(1, 8));
}

TEST(Normalize, RejectsReversedInterval) {
  EXPECT_THROW(U({{R(1, 2), R(1, 4)}}), InvalidArgument);
}

TEST(Normalize, DropsPartsOutsideTheUnitInterval) {
  EXPECT_TRUE(U({{R(3, 2), 2}}).empty());
  EXPECT_EQ(U({{-1, 0}}).size(), 1u);  // the single point 0
}

TEST(Measure, Examples) {
  EXPECT_EQ(measure(U({{0, 1}})), 1);
  EXPECT_EQ(measure(U({{R(1, 8), R(1, 4)}, {R(3, 8), R(1, 2)}})), R(1, 4));
}

TEST(Intersect, Examples) {
  const auto a = U({{0, R(1, 2)}});
  EXPECT_EQ(intersect(a, U({{R(1, 4), R(3, 4)}})), U({{R(1, 4), R(1, 2)}}));
  EXPECT_EQ(intersect(a, a), a);
  EXPECT_TRUE(intersect(U({{0, R(1, 4)}}), U({{R(1, 2), 1}})).empty());
}

TEST(Unite, Examples) {
  EXPECT_EQ(unite(U({{0, R(1, 4)}}), U({{R(1, 4), R(1, 2)}})), U({{0, R(1, 2)}}));
  const auto a = U({{R(1, 5), R(2, 5)}});
  EXPECT_EQ(unite(a, IntervalUnion{}), a);
  const auto b = unite(U({{0, R(1, 4)}}), U({{R(1, 8), R(3, 8)}}));
  EXPECT_EQ(b, U({{0, R(3, 8)}}));
  EXPECT_EQ(measure(b), R(3, 8));
}

TEST(FromCanonical, RejectsNonCanonicalInput) {
  EXPECT_THROW(IntervalUnion::from_canonical({{0, R(1, 2)}, {R(1, 2), 1}}), InvariantFailure);
  EXPECT_NO_THROW(IntervalUnion::from_canonical({{0, R(1, 3)}, {R(1, 2), 1}}));
}

TEST(IntervalProperties, InclusionExclusion) {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    gen::Gen g(seed);
    const auto ra = g.raw_intervals(100, 1'000'000), rb = g.raw_intervals(100, 1'000'000);
    const auto a = U(ra), b = U(rb);
    ASSERT_EQ(measure(unite(a, b)) + measure(intersect(a, b)), measure(a) + measure(b))
        << "seed " << seed;
    ASSERT_EQ(measure(a), oracle::union_measure(pairs_of(ra))) << "seed " << seed;
  }
}

TEST(IntervalProperties, NormalizeIsIdempotent) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    gen::Gen g(seed);
    const auto a = U(g.raw_intervals(60, 1000));
    std::vector<RatInterval> again(a.parts().begin(), a.parts().end());
    ASSERT_EQ(U(again), a) << "seed " << seed;
  }
}

TEST(IntervalProperties, CommutativeAndAssociative) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    gen::Gen g(seed);
    const auto a = U(g.raw_intervals(30, 500)), b = U(g.raw_intervals(30, 500)),
               c = U(g.raw_intervals(30, 500));
    ASSERT_EQ(unite(a, b), unite(b, a)) << seed;
    ASSERT_EQ(intersect(a, b), intersect(b, a)) << seed;
    ASSERT_EQ(unite(unite(a, b), c), unite(a, unite(b, c))) << seed;
    ASSERT_EQ(intersect(intersect(a, b), c), intersect(a, intersect(b, c))) << seed;
    const IntervalUnion all[] = {a, b, c};
    ASSERT_EQ(unite_all(all), unite(unite(a, b), c)) << seed;
  }
}

TEST(IntervalProperties, MembershipMatchesScan) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    gen::Gen g(seed);
    const auto a = U(g.raw_intervals(40, 200));
    for (int k = 0; k < 200; ++k) {
      const Rational x = g.unit_rational(400);
      bool scan = false;
      for (const auto& p : a.parts()) scan = scan || (p.lo <= x && x <= p.hi);
      ASSERT_EQ(a.contains(x), scan) << "seed " << seed << " x " << to_string(x);
    }
  }
}

TEST(IntervalProperties, IntersectionBoundedByEachSide) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    gen::Gen g(seed);
    const auto a = U(g.raw_intervals(50, 10000)), b = U(g.raw_intervals(50, 10000));
    const auto m = measure(intersect(a, b));
    ASSERT_LE(m, measure(a));
    ASSERT_LE(m, measure(b));
    ASSERT_TRUE(a.includes(intersect(a, b)));
    ASSERT_TRUE(unite(a, b).includes(b));
  }
}
