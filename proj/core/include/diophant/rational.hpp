#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace diophant {

using Integer = mpz_class;
using Rational = mpq_class;

/// Builds num/den in canonical form. Throws InvalidArgument on den == 0.
Rational make_rational(const Integer& num, const Integer& den);
Rational make_rational(long long num, long long den);

/// Parses "n", "-n" or "n/d" (decimal). Throws InvalidArgument.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

std::string to_string(const Integer& n);
/// "n" for integers, "n/d" otherwise.
std::string to_string(const Rational& q);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

/// Converts to uint64. Throws InvalidArgument when out of range.
std::uint64_t to_u64(const Integer& n);
Integer from_u64(std::uint64_t n);

Integer pow(const Integer& base, unsigned long exp);
Rational pow(const Rational& base, long exp);

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline bool divides(const Integer& d, const Integer& n) {
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

}  // namespace diophant
