#include <gtest/gtest.h>

#include <cmath>

#include <numeric>

#include "diophant/contfrac.hpp"
#include "diophant/errors.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace diophant;
using namespace diophant::cf;

namespace {

std::vector<Integer> ints(std::initializer_list<long> xs) {
  std::vector<Integer> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST(ParseValue, AcceptedForms) {
  EXPECT_EQ(describe(parse_value("22/7")), "22/7");
  EXPECT_TRUE(std::holds_alternative<QuadraticSurd>(parse_value("sqrt:2")));
  EXPECT_TRUE(std::holds_alternative<QuadraticSurd>(parse_value("surd:1,5,2")));
  EXPECT_TRUE(std::holds_alternative<QuadraticSurd>(parse_value("golden")));
  EXPECT_TRUE(std::holds_alternative<NamedConstant>(parse_value("pi")));
  EXPECT_TRUE(std::holds_alternative<NamedConstant>(parse_value("e")));
  EXPECT_THROW(parse_value("sqrt:"), InvalidArgument);
  EXPECT_THROW(parse_value("tau"), InvalidArgument);
  EXPECT_THROW(parse_value("surd:1,5,0"), InvalidArgument);
}

TEST(Expand, RationalsTerminate) {
  const auto e = expand(parse_value("22/7"), 10);
  EXPECT_EQ(e.quotients, ints({3, 7}));
  EXPECT_TRUE(e.terminated);
  const auto one = expand(parse_value("1/1"), 5);
  EXPECT_EQ(one.quotients, ints({1}));
  EXPECT_TRUE(one.terminated);
  EXPECT_EQ(expand(parse_value("-7/3"), 10).quotients, oracle::euclid_cf(-7, 3));
}

TEST(Expand, RationalsMatchEuclid) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    gen::Gen g(seed);
    const Integer p = from_u64(g.u64(1, 1'000'000)), q = from_u64(g.u64(1, 1'000'000));
    const Rational x = make_rational(p, q);
    const auto e = expand(x, 100);
    ASSERT_EQ(e.quotients, oracle::euclid_cf(x.get_num(), x.get_den())) << to_string(x);
  }
}

TEST(Expand, SurdsMatchIntegerRecurrence) {
  EXPECT_EQ(expand(parse_value("sqrt:2"), 4).quotients, ints({1, 2, 2, 2}));
  EXPECT_EQ(expand(parse_value("golden"), 6).quotients, ints({1, 1, 1, 1, 1, 1}));
  for (std::uint64_t d = 2; d <= 400; ++d) {
    const std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(d)));
    if (r * r == d || (r + 1) * (r + 1) == d) continue;
    const auto e = expand(parse_value("sqrt:" + std::to_string(d)), 40);
    ASSERT_EQ(e.quotients, oracle::sqrt_cf(d, 40)) << d;
    ASSERT_FALSE(e.terminated);
  }
}

TEST(Expand, NamedConstants) {
  // e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...]
  const auto e = expand(parse_value("e"), 20, 256);
  std::vector<Integer> expect{2};
  for (long k = 1; expect.size() < 20; ++k) {
    for (long x : {1L, 2 * k, 1L}) expect.emplace_back(x);
  }
  expect.resize(20);
  EXPECT_EQ(e.quotients, expect);
  EXPECT_EQ(expand(parse_value("pi"), 5).quotients, ints({3, 7, 15, 1, 292}));
  EXPECT_THROW(expand(parse_value("pi"), 200, 128), PrecisionError);
}

TEST(Convergents, Recursion) {
  const auto c = convergents(ints({1, 2, 2, 2}));
  ASSERT_EQ(c.size(), 4u);
  const long num[] = {1, 3, 7, 17}, den[] = {1, 2, 5, 12};
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(c[j].numerator, num[j]);
    EXPECT_EQ(c[j].denominator, den[j]);
  }
}

TEST(Convergents, DeterminantIdentity) {
  const auto c = convergents(expand(parse_value("sqrt:7"), 30).quotients);
  for (std::size_t j = 1; j < c.size(); ++j) {
    const Integer det = c[j].numerator * c[j - 1].denominator - c[j - 1].numerator * c[j].denominator;
    ASSERT_EQ(abs(det), 1) << j;
    ASSERT_EQ(gcd(c[j].numerator, c[j].denominator), 1);
  }
}

TEST(ConvergentTable, BoundsHoldForSurdsAndConstants) {
  for (const char* spec : {"sqrt:2", "sqrt:3", "golden", "surd:3,13,2", "e", "pi"}) {
    const auto rows = convergent_table(parse_value(spec), 25, 512);
    ASSERT_EQ(rows.size(), 25u) << spec;
    for (const auto& r : rows) {
      ASSERT_EQ(r.bounds, BoundCheck::kHolds) << spec << " j=" << r.convergent.j;
      ASSERT_TRUE(r.error.is_positive());
    }
  }
}

TEST(ConvergentTable, RationalEndsExactly) {
  const auto rows = convergent_table(parse_value("22/7"), 10);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].bounds, BoundCheck::kHolds);
  EXPECT_EQ(rows[1].bounds, BoundCheck::kNotApplicable);
  EXPECT_EQ(rows[1].error.upper(), 0);
}

TEST(ExactCompare, SignsAgreeWithSquares) {
  const Value s2 = parse_value("sqrt:2");
  EXPECT_EQ(exact_compare(s2, Rational(7, 5)), 1);
  EXPECT_EQ(exact_compare(s2, Rational(3, 2)), -1);
  EXPECT_EQ(exact_compare(parse_value("surd:0,4,1"), Rational(2)), 0);
  EXPECT_FALSE(exact_compare(parse_value("pi"), Rational(3)).has_value());
  // (1 - sqrt(5))/2 < 0 with a negative denominator form.
  EXPECT_EQ(exact_compare(parse_value("surd:-1,5,-2"), Rational(0)), -1);
}

TEST(Legendre, SqrtTwoFractionsAreConvergents) {
  const Value x = parse_value("sqrt:2");
  const auto fracs = legendre_fractions(x, 200);
  const auto conv = convergents(expand(x, 12).quotients);
  for (const auto& f : fracs) {
    bool found = false;
    for (const auto& c : conv) found = found || make_rational(c.numerator, c.denominator) == f;
    EXPECT_TRUE(found) << to_string(f);
  }
  EXPECT_EQ(fracs.size(), 7u);  // 1, 3/2, 7/5, 17/12, 41/29, 99/70, 239/169
}

TEST(BestApproximation, SqrtTwo) {
  const auto b = best_approximation(parse_value("sqrt:2"), 100);
  // 140/99 beats the convergent 99/70 below 100.
  EXPECT_EQ(b.fraction, Rational(140, 99));
  EXPECT_TRUE(b.error.is_positive());
  const double err = std::abs(140.0 / 99.0 - std::sqrt(2.0));
  for (int q = 1; q <= 100; ++q) {
    const double p = std::round(q * std::sqrt(2.0));
    if (q != 99) EXPECT_GT(std::abs(p / q - std::sqrt(2.0)), err) << q;
  }
}

TEST(IrrationalityExponents, QuadraticIrrationalsApproachTwo) {
  const auto est = irrationality_exponents(parse_value("sqrt:2"), 40);
  ASSERT_FALSE(est.empty());
  const auto& last = est.back().second;
  EXPECT_TRUE(last.certainly_gt(Rational(2)));
  EXPECT_TRUE(last.certainly_lt(Rational(21, 10)));
}
