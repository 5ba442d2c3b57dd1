#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "diophant/enclosure.hpp"
#include "diophant/rational.hpp"

namespace diophant {

/// Primes and smallest-prime-factor map up to a fixed limit. Immutable
/// after construction and safe to share across threads.
class PrimeTable {
 public:
  /// Default memory budget for the sieve arrays, in bytes.
  static constexpr std::uint64_t kDefaultBudgetBytes = std::uint64_t{1} << 29;

  /// Throws InvalidArgument for limit < 2 and ResourceLimit when the
  /// tables would exceed `budget_bytes`.
  explicit PrimeTable(std::uint64_t limit,
                      std::uint64_t budget_bytes = kDefaultBudgetBytes);

  std::uint64_t limit() const noexcept { return limit_; }
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }
  std::size_t size() const noexcept { return primes_.size(); }

  /// Smallest prime factor of n, 2 <= n <= limit.
  std::uint32_t spf(std::uint64_t n) const;
  bool is_prime(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

PrimeTable sieve(std::uint64_t limit,
                 std::uint64_t budget_bytes = PrimeTable::kDefaultBudgetBytes);

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A positive integer carried together with its prime factorization.
class FactoredInt {
 public:
  FactoredInt() : value_(1) {}

  /// Builds from (prime, exponent) pairs. Primes must be strictly ascending
  /// and exponents positive; primality of the entries is the caller's
  /// responsibility. Throws InvalidArgument otherwise.
  static FactoredInt from_factors(std::vector<PrimePower> factors);

  const Integer& value() const noexcept { return value_; }
  std::span<const PrimePower> factors() const noexcept { return factors_; }
  bool is_one() const noexcept { return factors_.empty(); }
  bool is_squarefree() const noexcept { return squarefree_; }
  bool divisible_by_prime(std::uint64_t p) const;
  /// Product of the distinct prime factors.
  Integer radical() const;
  std::vector<std::uint64_t> prime_divisors() const;

  /// The value fits in 64 bits.
  bool fits_u64() const { return mpz_sizeinbase(value_.get_mpz_t(), 2) <= 64; }
  std::uint64_t to_u64() const { return diophant::to_u64(value_); }

  friend FactoredInt operator*(const FactoredInt& a, const FactoredInt& b);
  friend FactoredInt gcd(const FactoredInt& a, const FactoredInt& b);

  friend bool operator==(const FactoredInt& a, const FactoredInt& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const FactoredInt& a, const FactoredInt& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  Integer value_;
  std::vector<PrimePower> factors_;
  bool squarefree_ = true;
};

/// Factors n >= 1 using the table's spf map when n <= limit and trial
/// division by the table's primes when n <= limit^2.
FactoredInt factor(const Integer& n, const PrimeTable& table);
FactoredInt factor(std::uint64_t n, const PrimeTable& table);

Integer totient(const FactoredInt& n);
/// phi(n)/n, computed as the product of (1 - 1/p) over p | n.
Rational phi_ratio(const FactoredInt& n);

/// Sum of 1/p over primes p <= t.
Rational mertens_sum(const Rational& t, const PrimeTable& table);

/// Sum of 1/p over prime divisors p of q with p > t.
Rational lambda_t(const FactoredInt& q, const Rational& t);

enum class CorrelationVariant {
  kGcd,         // primes dividing q r / gcd(q, r)
  kGcdSquared,  // primes dividing q r / gcd(q, r)^2
};

/// Sum of 1/p over primes p > t dividing q r / gcd(q,r) (kGcd) or
/// q r / gcd(q,r)^2 (kGcdSquared).
Rational correlation_prime_sum(const FactoredInt& q, const FactoredInt& r,
                               const Rational& t, CorrelationVariant variant);

/// Product of the first j primes.
Integer primorial(std::size_t j, const PrimeTable& table);

using PrimeWeight = std::function<Rational(std::uint64_t)>;

/// Sum over n <= x of the product of weight(p) over p | n.
Rational sieve_weight_sum(std::uint64_t x, const PrimeWeight& weight,
                          const PrimeTable& table);

struct ExceederCount {
  std::uint64_t count = 0;
  /// Sum over q <= x of exp(-threshold*t + t*lambda_t(q)).
  Enclosure chernoff_bound;
};

/// Counts q <= x with lambda_t(q) > threshold, alongside the exponential
/// moment bound on that count.
ExceederCount count_lambda_exceeders(std::uint64_t x, const Rational& t,
                                     const Rational& threshold, const PrimeTable& table,
                                     unsigned prec = kDefaultPrecision);

/// Number of prime divisors of q in each half-open band (lo, hi].
/// Throws InvalidArgument when bands overlap.
std::vector<std::size_t> prime_factor_band_counts(
    const FactoredInt& q, std::span<const std::pair<Rational, Rational>> bands);

/// Counts for the bands (e^{j-1}, e^j], j = 1..bands, with the transcendental
/// edges resolved by certified enclosures refined until each prime divisor
/// is classified.
std::vector<std::size_t> exponential_band_counts(const FactoredInt& q, unsigned bands,
                                                 unsigned prec = kDefaultPrecision);

// Statistics of phi(q)/q.

/// Product of (1 - 1/p) over p | q with p > ln q. Returns 1 for q = 1.
Rational large_prime_factor_product(const FactoredInt& q);

struct SmallPrimeWindow {
  Rational divisor_product;  // over p | q in the window
  Rational full_product;     // over every prime in the window
};

/// Products of (1 - 1/p) over primes (ln q)^{1/100} < p <= ln q, restricted
/// to divisors of q and unrestricted. Requires q >= 3.
SmallPrimeWindow small_prime_window(const FactoredInt& q, const PrimeTable& table);

struct BandCondition {
  bool holds = true;
  std::vector<std::size_t> counts;  // one per band j = 1..J
};

/// Checks #{p | q : e^{j-1} < p <= e^j} <= e^j/j^2 + 1000 for
/// j = 1..1+floor(ln ln q / 100). Requires q >= 3.
BandCondition small_prime_band_condition(const FactoredInt& q);

/// Sum of 1/p over primes t < p <= t^2.
Rational prime_window_sum(const Rational& t, const PrimeTable& table);

}  // namespace diophant
