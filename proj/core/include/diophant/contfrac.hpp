#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "diophant/enclosure.hpp"
#include "diophant/rational.hpp"

namespace diophant::cf {

/// x = (p + sqrt(d)) / r, r != 0, d >= 0.
struct QuadraticSurd {
  Integer p;
  Integer d;
  Integer r;
};

enum class NamedConstant { kE, kPi };

/// A real number whose continued fraction can be expanded: exactly for
/// rationals and quadratic surds, from a certified enclosure otherwise.
using Value = std::variant<Rational, QuadraticSurd, NamedConstant>;

/// Parses "p/q", "n", "sqrt:d", "surd:p,d,r", "golden", "e" or "pi".
/// Throws InvalidArgument on anything else.
Value parse_value(std::string_view spec);
std::string describe(const Value& x);

/// Encloses x at the given working precision.
Enclosure enclose(const Value& x, unsigned prec = kDefaultPrecision);

/// Exact sign of x - y when x is rational or a surd; nullopt otherwise.
std::optional<int> exact_compare(const Value& x, const Rational& y);

struct Expansion {
  std::vector<Integer> quotients;  // n_0, n_1, ...
  bool terminated = false;         // rational: the expansion is complete
};

/// Expands x into at most `max_terms` partial quotients. Named constants
/// are expanded from an enclosure at `prec` bits; if fewer than `max_terms`
/// quotients are certified there, throws PrecisionError.
Expansion expand(const Value& x, std::size_t max_terms, unsigned prec = kDefaultPrecision);

struct Convergent {
  std::size_t j;
  Integer quotient;     // n_j
  Integer numerator;    // a_j
  Integer denominator;  // q_j
};

/// a_j = n_j a_{j-1} + a_{j-2}, q_j = n_j q_{j-1} + q_{j-2}, started from
/// a_0 = n_0, q_0 = 1, a_1 = n_0 n_1 + 1, q_1 = n_1.
std::vector<Convergent> convergents(std::span<const Integer> quotients);

/// Certified enclosure of |x - y|, refined until it excludes zero (or is
/// exactly zero for exact inputs equal to y).
Enclosure approximation_error(const Value& x, const Rational& y,
                              unsigned prec = kDefaultPrecision);

enum class BoundCheck { kHolds, kFails, kNotApplicable };

struct ConvergentRow {
  Convergent convergent;
  Enclosure error;  // |x - a_j/q_j|
  /// 1/(2 q_j q_{j+1}) <= |x - a_j/q_j| <= 1/(q_j q_{j+1}); not applicable
  /// for the last computed convergent.
  BoundCheck bounds = BoundCheck::kNotApplicable;
};

/// Convergent table with certified errors and the classical two-sided
/// bound checked against the next denominator. Computes one extra term
/// internally when available so every requested row can be checked.
std::vector<ConvergentRow> convergent_table(const Value& x, std::size_t terms,
                                            unsigned prec = kDefaultPrecision);

/// Checks the two-sided bound for one convergent. Exact when x is a
/// rational or surd, certified by enclosures otherwise.
BoundCheck check_convergent_bounds(const Value& x, const Convergent& c,
                                   const Integer& next_denominator,
                                   unsigned prec = kDefaultPrecision);

/// Same check carried out purely with enclosures, regardless of the kind of x.
BoundCheck check_convergent_bounds_enclosed(const Value& x, const Convergent& c,
                                            const Integer& next_denominator,
                                            unsigned prec = kDefaultPrecision);

/// All reduced a/q with 1 <= q <= qmax and |x - a/q| < 1/(2 q^2), found by
/// scanning every denominator. Exact for rationals and surds.
std::vector<Rational> legendre_fractions(const Value& x, std::uint64_t qmax,
                                         unsigned prec = kDefaultPrecision);

/// min over 1 <= q <= qmax and all a of |x - a/q|, with a minimizer.
struct BestApproximation {
  Rational fraction;
  Enclosure error;
};
BestApproximation best_approximation(const Value& x, std::uint64_t qmax,
                                     unsigned prec = kDefaultPrecision);

/// Estimates -ln|x - a_j/q_j| / ln q_j for each convergent with q_j >= 2
/// and nonzero error. Values approach the irrationality measure from the
/// convergents that realize it.
std::vector<std::pair<std::size_t, Enclosure>> irrationality_exponents(
    const Value& x, std::size_t terms, unsigned prec = kDefaultPrecision);

}  // namespace diophant::cf
