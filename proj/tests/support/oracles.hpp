#pragma once

// Slow, independent reference computations used to check the library.
// Nothing here calls the library routine it is meant to check.

#include <cstdint>
#include <utility>
#include <vector>

#include "diophant/enclosure.hpp"
#include "diophant/gcd_graph.hpp"
#include "diophant/rational.hpp"

namespace oracle {

using diophant::Enclosure;
using diophant::Integer;
using diophant::Rational;

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> primes_upto(std::uint64_t n);
/// Prime factorization by trial division, ascending.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);
/// #{1 <= a <= n : gcd(a, n) = 1}, by counting.
std::uint64_t totient(std::uint64_t n);
bool squarefree(std::uint64_t n);
std::vector<std::uint64_t> divisors(std::uint64_t n);

/// Measure of the union of closed intervals [lo, hi] clipped to [0, 1],
/// by sorting endpoints and sweeping.
Rational union_measure(std::vector<std::pair<Rational, Rational>> parts);

/// The intervals [a/q - d, a/q + d] for 0 <= a <= q (gcd(a, q) = 1 when
/// reduced), unclipped.
std::vector<std::pair<Rational, Rational>> aq_intervals(std::uint64_t q, const Rational& d,
                                                        bool reduced);

/// meas(A_q* cap A_r*) as a sum of pairwise overlaps of the defining
/// intervals; valid when d_q <= 1/(2q) and d_r <= 1/(2r).
Rational reduced_pair_measure(std::uint64_t q, const Rational& dq, std::uint64_t r,
                              const Rational& dr);

/// Partial quotients of sqrt(d) for non-square d by the integer recurrence
/// m' = a n - m, n' = (d - m'^2)/n, a' = floor((a0 + m')/n').
std::vector<Integer> sqrt_cf(std::uint64_t d, std::size_t terms);
/// Partial quotients of p/q by Euclid, p, q > 0.
std::vector<Integer> euclid_cf(Integer p, Integer q);

/// q(G) and delta(G) recomputed from the definitions, with phi by counting.
Enclosure quality(const diophant::GcdGraph& g, const diophant::ConstantsProfile& c,
                  unsigned prec = 256);
Rational density(const diophant::GcdGraph& g);

}  // namespace oracle
