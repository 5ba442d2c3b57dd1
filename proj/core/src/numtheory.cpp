#include "diophant/numtheory.hpp"
#include "diophant/int128.hpp"

#include <algorithm>
#include <cmath>

#include "diophant/errors.hpp"

namespace diophant {

PrimeTable::PrimeTable(std::uint64_t limit, std::uint64_t budget_bytes) : limit_(limit) {
  if (limit < 2) throw InvalidArgument("sieve limit must be at least 2");
  if (limit > 0xFFFFFFFFull) throw ResourceLimit("sieve limit exceeds 32-bit range");
  // spf array plus a prime list bounded by roughly limit/ln(limit).
  const std::uint64_t bytes = 4 * (limit + 1) + 4 * (limit / 2 + 1);
  if (bytes > budget_bytes) {
    throw ResourceLimit("sieve limit " + std::to_string(limit) + " needs " +
                        std::to_string(bytes) + " bytes, budget is " +
                        std::to_string(budget_bytes));
  }
  spf_.assign(limit + 1, 0);
  // Linear sieve: every composite is marked once by its least prime factor.
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes_) {
      const std::uint64_t m = p * i;
      if (p > spf_[i] || m > limit) break;
      spf_[m] = p;
    }
  }
  primes_.shrink_to_fit();
}

std::uint32_t PrimeTable::spf(std::uint64_t n) const {
  if (n < 2 || n > limit_) {
    throw InvalidArgument("spf argument " + std::to_string(n) + " outside [2, " +
                          std::to_string(limit_) + "]");
  }
  return spf_[n];
}

bool PrimeTable::is_prime(std::uint64_t n) const {
  if (n > limit_) throw InvalidArgument("is_prime argument beyond sieve limit");
  return n >= 2 && spf_[n] == n;
}

PrimeTable sieve(std::uint64_t limit, std::uint64_t budget_bytes) {
  return PrimeTable(limit, budget_bytes);
}

FactoredInt FactoredInt::from_factors(std::vector<PrimePower> factors) {
  FactoredInt out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].exponent == 0) throw InvalidArgument("zero exponent in factorization");
    if (factors[i].prime < 2) throw InvalidArgument("factor below 2 in factorization");
    if (i > 0 && factors[i].prime <= factors[i - 1].prime) {
      throw InvalidArgument("factorization primes must be strictly ascending");
    }
    out.value_ *= pow(from_u64(factors[i].prime), factors[i].exponent);
    if (factors[i].exponent > 1) out.squarefree_ = false;
  }
  out.factors_ = std::move(factors);
  return out;
}

bool FactoredInt::divisible_by_prime(std::uint64_t p) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), p,
                             [](const PrimePower& f, std::uint64_t v) { return f.prime < v; });
  return it != factors_.end() && it->prime == p;
}

Integer FactoredInt::radical() const {
  Integer r = 1;
  for (const auto& f : factors_) r *= from_u64(f.prime);
  return r;
}

std::vector<std::uint64_t> FactoredInt::prime_divisors() const {
  std::vector<std::uint64_t> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.prime);
  return out;
}

FactoredInt operator*(const FactoredInt& a, const FactoredInt& b) {
  std::vector<PrimePower> merged;
  auto i = a.factors_.begin();
  auto j = b.factors_.begin();
  while (i != a.factors_.end() || j != b.factors_.end()) {
    if (j == b.factors_.end() || (i != a.factors_.end() && i->prime < j->prime)) {
      merged.push_back(*i++);
    } else if (i == a.factors_.end() || j->prime < i->prime) {
      merged.push_back(*j++);
    } else {
      merged.push_back({i->prime, i->exponent + j->exponent});
      ++i;
      ++j;
    }
  }
  return FactoredInt::from_factors(std::move(merged));
}

FactoredInt gcd(const FactoredInt& a, const FactoredInt& b) {
  std::vector<PrimePower> common;
  auto i = a.factors_.begin();
  auto j = b.factors_.begin();
  while (i != a.factors_.end() && j != b.factors_.end()) {
    if (i->prime < j->prime) {
      ++i;
    } else if (j->prime < i->prime) {
      ++j;
    } else {
      common.push_back({i->prime, std::min(i->exponent, j->exponent)});
      ++i;
      ++j;
    }
  }
  return FactoredInt::from_factors(std::move(common));
}

FactoredInt factor(std::uint64_t n, const PrimeTable& table) {
  if (n == 0) throw InvalidArgument("cannot factor 0");
  std::vector<PrimePower> out;
  if (n <= table.limit()) {
    while (n > 1) {
      const std::uint32_t p = table.spf(n);
      unsigned e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.push_back({p, e});
    }
    return FactoredInt::from_factors(std::move(out));
  }
  const u128 lim = table.limit();
  if (static_cast<u128>(n) > lim * lim) {
    throw InvalidArgument("cannot factor " + std::to_string(n) +
                          ": exceeds the square of the sieve limit");
  }
  for (std::uint32_t p : table.primes()) {
    if (static_cast<std::uint64_t>(p) * p > n) break;
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return FactoredInt::from_factors(std::move(out));
}

FactoredInt factor(const Integer& n, const PrimeTable& table) {
  if (n < 1) throw InvalidArgument("factor requires n >= 1, got " + to_string(n));
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > 64) {
    throw InvalidArgument("cannot factor " + to_string(n) +
                          ": exceeds the square of the sieve limit");
  }
  return factor(to_u64(n), table);
}

Integer totient(const FactoredInt& n) {
  Integer out = 1;
  for (const auto& f : n.factors()) {
    const Integer p = from_u64(f.prime);
    out *= pow(p, f.exponent - 1) * (p - 1);
  }
  return out;
}

Rational phi_ratio(const FactoredInt& n) {
  Integer num = 1, den = 1;
  for (const auto& f : n.factors()) {
    const Integer p = from_u64(f.prime);
    num *= p - 1;
    den *= p;
  }
  return make_rational(num, den);
}

Rational mertens_sum(const Rational& t, const PrimeTable& table) {
  if (t > Rational(from_u64(table.limit()))) {
    throw InvalidArgument("mertens_sum bound " + to_string(t) + " beyond sieve limit");
  }
  Rational sum = 0;
  for (std::uint32_t p : table.primes()) {
    if (Rational(p) > t) break;
    sum += Rational(1, p);
  }
  return sum;
}

Rational lambda_t(const FactoredInt& q, const Rational& t) {
  Rational sum = 0;
  for (const auto& f : q.factors()) {
    const Integer p = from_u64(f.prime);
    if (Rational(p) > t) sum += Rational(Integer(1), p);
  }
  return sum;
}

Rational correlation_prime_sum(const FactoredInt& q, const FactoredInt& r, const Rational& t,
                               CorrelationVariant variant) {
  // Exponent of p in qr/gcd is max(vq, vr); in qr/gcd^2 it is |vq - vr|.
  Rational sum = 0;
  auto add = [&](std::uint64_t p, unsigned vq, unsigned vr) {
    const bool divides = variant == CorrelationVariant::kGcd ? std::max(vq, vr) > 0 : vq != vr;
    const Integer pz = from_u64(p);
    if (divides && Rational(pz) > t) sum += Rational(Integer(1), pz);
  };
  auto i = q.factors().begin();
  auto j = r.factors().begin();
  while (i != q.factors().end() || j != r.factors().end()) {
    if (j == r.factors().end() || (i != q.factors().end() && i->prime < j->prime)) {
      add(i->prime, i->exponent, 0);
      ++i;
    } else if (i == q.factors().end() || j->prime < i->prime) {
      add(j->prime, 0, j->exponent);
      ++j;
    } else {
      add(i->prime, i->exponent, j->exponent);
      ++i;
      ++j;
    }
  }
  return sum;
}

Integer primorial(std::size_t j, const PrimeTable& table) {
  if (j > table.size()) {
    throw InvalidArgument("primorial(" + std::to_string(j) + ") needs more primes than the table's " +
                          std::to_string(table.size()));
  }
  Integer out = 1;
  for (std::size_t i = 0; i < j; ++i) out *= table.primes()[i];
  return out;
}

Rational sieve_weight_sum(std::uint64_t x, const PrimeWeight& weight, const PrimeTable& table) {
  if (x > table.limit()) throw InvalidArgument("sieve_weight_sum bound beyond sieve limit");
  // Weights are looked up once per prime; products are built exactly.
  std::vector<Rational> w(table.size());
  for (std::size_t i = 0; i < table.size() && table.primes()[i] <= x; ++i) {
    w[i] = weight(table.primes()[i]);
    if (w[i] < 0) throw InvalidArgument("negative sieve weight");
  }
  auto index_of = [&](std::uint32_t p) {
    return static_cast<std::size_t>(
        std::lower_bound(table.primes().begin(), table.primes().end(), p) - table.primes().begin());
  };
  Rational sum = x >= 1 ? 1 : 0;
  for (std::uint64_t n = 2; n <= x; ++n) {
    Rational prod = 1;
    std::uint64_t m = n;
    while (m > 1) {
      const std::uint32_t p = table.spf(m);
      while (m % p == 0) m /= p;
      prod *= w[index_of(p)];
      if (prod == 0) break;
    }
    sum += prod;
  }
  return sum;
}

ExceederCount count_lambda_exceeders(std::uint64_t x, const Rational& t, const Rational& threshold,
                                     const PrimeTable& table, unsigned prec) {
  if (x > table.limit()) throw InvalidArgument("count_lambda_exceeders bound beyond sieve limit");
  ExceederCount out{0, Enclosure(prec)};
  for (std::uint64_t q = 1; q <= x; ++q) {
    const Rational lam = lambda_t(factor(q, table), t);
    if (lam > threshold) ++out.count;
    out.chernoff_bound += exp(Enclosure::point(t * (lam - threshold), prec));
  }
  return out;
}

std::vector<std::size_t> prime_factor_band_counts(
    const FactoredInt& q, std::span<const std::pair<Rational, Rational>> bands) {
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (bands[i].first > bands[i].second) throw InvalidArgument("band with lo > hi");
    for (std::size_t j = 0; j < i; ++j) {
      const bool disjoint =
          bands[i].second <= bands[j].first || bands[j].second <= bands[i].first;
      if (!disjoint) throw InvalidArgument("prime bands overlap");
    }
  }
  std::vector<std::size_t> counts(bands.size(), 0);
  for (const auto& f : q.factors()) {
    const Rational p(from_u64(f.prime));
    for (std::size_t i = 0; i < bands.size(); ++i) {
      if (p > bands[i].first && p <= bands[i].second) ++counts[i];
    }
  }
  return counts;
}

namespace {

/// Sign of ln(p) - j for a prime p, decided by certified enclosures.
int sign_log_minus(std::uint64_t p, long j, unsigned prec) {
  return certified_sign(
      [&](unsigned pr) {
        return log(Enclosure::point(from_u64(p), pr)) - Enclosure::point(j, pr);
      },
      prec);
}

/// Sign of p - ln(q).
int sign_prime_minus_log(std::uint64_t p, const Integer& q, unsigned prec = kDefaultPrecision) {
  return certified_sign(
      [&](unsigned pr) {
        return Enclosure::point(from_u64(p), pr) - log(Enclosure::point(q, pr));
      },
      prec);
}

/// Sign of p - (ln q)^{1/100}.
int sign_prime_minus_log_root(std::uint64_t p, const Integer& q) {
  return certified_sign([&](unsigned pr) {
    return Enclosure::point(from_u64(p), pr) -
           pow(log(Enclosure::point(q, pr)), Rational(1, 100));
  });
}

}  // namespace

std::vector<std::size_t> exponential_band_counts(const FactoredInt& q, unsigned bands,
                                                 unsigned prec) {
  std::vector<std::size_t> counts(bands, 0);
  for (const auto& f : q.factors()) {
    for (unsigned j = 1; j <= bands; ++j) {
      // e^{j-1} < p <= e^j  <=>  j-1 < ln p <= j; equality is impossible.
      if (sign_log_minus(f.prime, static_cast<long>(j) - 1, prec) > 0 &&
          sign_log_minus(f.prime, j, prec) < 0) {
        ++counts[j - 1];
      }
    }
  }
  return counts;
}

Rational large_prime_factor_product(const FactoredInt& q) {
  Rational prod = 1;
  if (q.is_one()) return prod;
  for (const auto& f : q.factors()) {
    if (sign_prime_minus_log(f.prime, q.value()) > 0) prod *= Rational(f.prime - 1, f.prime);
  }
  return prod;
}

SmallPrimeWindow small_prime_window(const FactoredInt& q, const PrimeTable& table) {
  if (q.value() < 3) throw InvalidArgument("small_prime_window requires q >= 3");
  SmallPrimeWindow out{1, 1};
  for (std::uint32_t p : table.primes()) {
    if (sign_prime_minus_log(p, q.value()) > 0) break;
    if (sign_prime_minus_log_root(p, q.value()) <= 0) continue;
    const Rational factor(p - 1, p);
    out.full_product *= factor;
    if (q.divisible_by_prime(p)) out.divisor_product *= factor;
  }
  return out;
}

BandCondition small_prime_band_condition(const FactoredInt& q) {
  if (q.value() < 3) throw InvalidArgument("small_prime_band_condition requires q >= 3");
  // J = 1 + floor(ln ln q / 100); desk-scale q always gives J = 1, but the
  // floor is still certified.
  const Enclosure lnln = log(log(Enclosure::point(q.value(), kDefaultPrecision)));
  const Rational lower = lnln.lower() / 100;
  const Rational upper = lnln.upper() / 100;
  if (floor(lower) != floor(upper)) throw PrecisionError("band count J undecided");
  const unsigned bands = 1 + static_cast<unsigned>(std::max<long>(0, floor(lower).get_si()));
  BandCondition out;
  out.counts = exponential_band_counts(q, bands);
  for (unsigned j = 1; j <= bands; ++j) {
    const Enclosure bound =
        exp(Enclosure::point(static_cast<long>(j))) / Enclosure::point(static_cast<long>(j * j)) +
        Enclosure::point(1000L);
    if (!bound.certainly_ge(Rational(static_cast<unsigned long>(out.counts[j - 1])))) {
      out.holds = false;
    }
  }
  return out;
}

Rational prime_window_sum(const Rational& t, const PrimeTable& table) {
  const Rational t2 = t * t;
  if (t2 > Rational(from_u64(table.limit()))) {
    throw InvalidArgument("prime_window_sum needs primes up to " + to_string(floor(t2)));
  }
  Rational sum = 0;
  for (std::uint32_t p : table.primes()) {
    const Rational pr(p);
    if (pr > t2) break;
    if (pr > t) sum += Rational(1, p);
  }
  return sum;
}

}  // namespace diophant
