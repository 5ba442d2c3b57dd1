// Exhaustive reference for the pair-correlation regression constant.
//
// For 2 <= q < r <= 500 with Delta_q = 1/(20 q) this computes the exact
// measure of A_q* cap A_r* by integer overlap counting over the common
// denominator 20 q r, the bound phi(q) Delta_q phi(r) Delta_r exp(L) with L
// the sum of 1/p over primes p > M(q, r) dividing lcm(q, r), and prints the
// largest ratio with its pair. It shares no code with the library beyond
// GMP and MPFR, and its output is frozen in acceptance.cpp.

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <cstdio>
#include <numeric>
#include <vector>

namespace {

constexpr std::int64_t kMax = 500;
constexpr std::int64_t kN = 20;

std::int64_t totient(std::int64_t n) {
  std::int64_t c = 0;
  for (std::int64_t a = 1; a <= n; ++a) c += std::gcd(a, n) == 1;
  return c;
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// Overlap of the reduced families in units of 1/(20 q r). The interval
/// around a/q is [20 a r - r, 20 a r + r], around b/r it is
/// [20 b q - q, 20 b q + q]; only the two b nearest to a r / q can meet it.
std::int64_t overlap_units(std::int64_t q, std::int64_t r) {
  std::int64_t total = 0;
  for (std::int64_t a = 1; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    const std::int64_t lo1 = kN * a * r - r, hi1 = kN * a * r + r;
    const std::int64_t b0 = a * r / q;
    for (std::int64_t b = b0 - 1; b <= b0 + 2; ++b) {
      if (b < 1 || b >= r || std::gcd(b, r) != 1) continue;
      const std::int64_t lo2 = kN * b * q - q, hi2 = kN * b * q + q;
      const std::int64_t lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
      if (hi > lo) total += hi - lo;
    }
  }
  return total;
}

}  // namespace

int main() {
  const mpfr_prec_t prec = 320;
  std::vector<std::int64_t> phi(kMax + 1);
  for (std::int64_t n = 1; n <= kMax; ++n) phi[n] = totient(n);
  mpfr_t best, ratio, e, num;
  mpfr_inits2(prec, best, ratio, e, num, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(best, 1);
  std::int64_t bq = 0, br = 0;
  for (std::int64_t q = 2; q <= kMax; ++q) {
    for (std::int64_t r = q + 1; r <= kMax; ++r) {
      const std::int64_t units = overlap_units(q, r);
      if (units == 0) continue;
      const std::int64_t l = std::lcm(q, r);
      // M = 2 max(Delta) lcm = 2 lcm / (20 q), as q < r.
      const mpq_class M(2 * l, kN * q);
      mpq_class L = 0;
      for (auto p : prime_factors(l)) {
        if (mpq_class(p) > M) L += mpq_class(1, p);
      }
      // exact / (phi(q) phi(r) / (400 q r)) = units / (20 q r) * 400 q r / (phi phi)
      //                                  = 20 units / (phi(q) phi(r)).
      const mpq_class base(kN * units, phi[q] * phi[r]);
      mpfr_set_q(e, L.get_mpq_t(), MPFR_RNDN);
      mpfr_exp(e, e, MPFR_RNDN);
      mpfr_set_q(num, mpq_class(base).get_mpq_t(), MPFR_RNDN);
      mpfr_div(ratio, num, e, MPFR_RNDN);
      if (mpfr_cmp(ratio, best) > 0) {
        mpfr_set(best, ratio, MPFR_RNDN);
        bq = q;
        br = r;
      }
    }
  }
  mpfr_printf("max ratio %.40Rf at (q, r) = (%lld, %lld)\n", best, static_cast<long long>(bq),
              static_cast<long long>(br));
  mpfr_clears(best, ratio, e, num, static_cast<mpfr_ptr>(nullptr));
  return 0;
}
