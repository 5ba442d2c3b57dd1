#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diophant/enclosure.hpp"
#include "diophant/intervals.hpp"
#include "diophant/numtheory.hpp"
#include "diophant/rational.hpp"

namespace diophant {

/// One radius. `value` is what the set constructors use; when the radius is
/// transcendental it is a rational lower enclosure and `upper` bounds the
/// true value from above. `clipped` marks radii cut back to 1/(2q).
struct DeltaEntry {
  Rational value;
  Rational upper;
  bool clipped = false;

  bool exact() const { return value == upper; }
  friend bool operator==(const DeltaEntry&, const DeltaEntry&) = default;
};

/// Finitely supported q -> Delta_q. Absent q means Delta_q = 0.
class DeltaSequence {
 public:
  explicit DeltaSequence(std::uint64_t qmax = 1, std::string label = {});

  std::uint64_t qmax() const noexcept { return qmax_; }
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  /// Stores an exact radius. Zero values are not stored. Throws
  /// InvalidArgument for q outside [1, qmax] or a negative value.
  void set(std::uint64_t q, const Rational& value);
  /// Stores an enclosed radius lo <= Delta_q <= hi.
  void set(std::uint64_t q, const Rational& lo, const Rational& hi, bool clipped = false);

  Rational at(std::uint64_t q) const;
  const DeltaEntry* find(std::uint64_t q) const;
  const std::map<std::uint64_t, DeltaEntry>& entries() const noexcept { return values_; }
  std::vector<std::uint64_t> support() const;

  /// Delta_q > 1/(2q).
  bool saturated(std::uint64_t q) const;
  /// First saturated q in the support, if any.
  std::optional<std::uint64_t> first_saturated() const;

  /// Copy keeping only q in [lo, hi].
  DeltaSequence restricted(std::uint64_t lo, std::uint64_t hi) const;

  friend bool operator==(const DeltaSequence&, const DeltaSequence&) = default;

 private:
  std::uint64_t qmax_;
  std::string label_;
  std::map<std::uint64_t, DeltaEntry> values_;
};

/// Delta_q = 1/(q^2 log^c q) for 2 <= q <= qmax, stored as rational
/// enclosures of relative width at most 2^-64 and clipped to 1/(2q) where
/// the value exceeds it. Throws InvalidArgument for c <= 0 or qmax < 2.
DeltaSequence delta_khinchin(const Rational& c, std::uint64_t qmax,
                             unsigned prec = kDefaultPrecision);

/// Delta_q = 1/(q N) on S (N >= 2 keeps every radius unsaturated). Throws
/// SaturationError for N < 2 and InvalidArgument for 0 in S.
DeltaSequence delta_uniform_support(std::span<const std::uint64_t> support, const Rational& n);

/// Data of one level j of the primorial counterexample.
struct CounterexampleLevel {
  std::size_t j;
  std::uint64_t prime;        // p_j
  Integer primorial;          // q_j
  std::vector<Integer> members;  // S_j = {d p_j : d | q_{j-1}}, ascending
  Rational rational_part;     // sum over S_j of q / q_j
  Rational euler_product;     // product over i < j of (1 + 1/p_i)
  Enclosure weight;           // 1/(j log^2 j)
};

struct Counterexample {
  DeltaSequence delta;
  std::vector<CounterexampleLevel> levels;  // j = 2..J
};

/// Delta_q = 1/(q_j j log^2 j) on S_j for 2 <= j <= J. Values are not
/// clipped: small levels are saturated and reported as such. Throws
/// InvalidArgument for J < 2 or when q_J does not fit in 64 bits.
Counterexample delta_counterexample(std::size_t J, const PrimeTable& table,
                                    unsigned prec = kDefaultPrecision);

/// A_q (reduced = false) or A_q* (reduced = true): points of [0,1] within
/// Delta of some a/q, 0 <= a <= q, with gcd(a, q) = 1 for A_q*. Throws
/// SaturationError for Delta > 1/(2q).
IntervalUnion build_Aq(std::uint64_t q, const Rational& delta, bool reduced);

/// measure(A_q* cap A_r*), exactly. For q, r >= 2 this counts the pairs of
/// centres a/q, b/r by k = |ar - bq| instead of building the sets.
Rational reduced_pair_intersection(std::uint64_t q, const Rational& dq, std::uint64_t r,
                                   const Rational& dr);
/// Same quantity, always through IntervalUnion intersection.
Rational reduced_pair_intersection_generic(std::uint64_t q, const Rational& dq, std::uint64_t r,
                                           const Rational& dr);

struct PairData {
  Rational exact_meas;
  Rational M;            // 2 max{Delta_q, Delta_r} lcm(q, r)
  Rational prime_sum;    // sum of 1/p over p | qr/gcd(q,r), p > M
  Rational pv_rational;  // phi(q) Delta_q phi(r) Delta_r
  Enclosure pv_term;     // pv_rational * exp(prime_sum)
};

/// Correlation data for q != r, both >= 2 and unsaturated.
PairData pair_data(std::uint64_t q, std::uint64_t r, const DeltaSequence& delta,
                   const PrimeTable& table, unsigned prec = kDefaultPrecision);

/// (sum_i P_i)^2 / sum_{i,j} P(E_i cap E_j). `pairs` is a row-major n x n
/// symmetric matrix whose diagonal equals `measures`. Returns 0 for all-zero
/// input; throws InvalidArgument on malformed input.
Rational cs_lower_bound(std::span<const Rational> measures, std::span<const Rational> pairs);

/// Smallest R >= Q with 1 <= sum_{Q <= q <= R} 2 phi(q) Delta_q, or nullopt
/// if the partial sums stay below 1 up to qmax.
std::optional<std::uint64_t> find_window(const DeltaSequence& delta, std::uint64_t Q,
                                         const PrimeTable& table);

struct WindowReport {
  std::uint64_t Q = 0;
  std::uint64_t R = 0;
  Rational sum_meas;
  Rational pair_sum;  // C = sum over Q <= q < r <= R of meas(A_q* cap A_r*)
  Rational cs_bound;
  Rational union_meas;
  /// 1/(2 + 2C), compared with union_meas when 1 <= sum_meas <= 2.
  Rational second_moment_floor;
  bool floor_applies = false;
};

/// Computes every field exactly and checks cs_bound <= union_meas <=
/// sum_meas (and the 1/(2+2C) floor when it applies), throwing
/// InvariantFailure if any check fails.
WindowReport window_report(const DeltaSequence& delta, std::uint64_t Q, std::uint64_t R,
                           const PrimeTable& table, unsigned threads = 1);

/// Delta'_q = max over m >= 1 with qm <= qmax of Delta_{qm}; the sup is
/// truncated at qmax and the label says so.
DeltaSequence catlin_transform(const DeltaSequence& delta);

struct MonteCarloResult {
  std::uint64_t samples = 0;
  Rational mean;      // exact sample mean of the counts
  Rational variance;  // exact unbiased sample variance (0 for one sample)
  Rational expected;  // sum of the measures of the sets
  double stddev = 0;
  double stderr_mean = 0;  // stddev / sqrt(samples)
  std::map<std::uint64_t, std::uint64_t> histogram;  // count -> samples

  /// (mean - expected)^2 <= k^2 variance / samples, decided exactly.
  bool within_sigmas(unsigned k) const;
};

/// Draws x = k/2^64 with k uniform from a per-sample generator seeded by
/// (seed, sample index) and counts the q in the support with x in A_q (or
/// A_q*). Results do not depend on `threads`. Throws SaturationError if a
/// radius exceeds 1/(2q).
MonteCarloResult monte_carlo_counts(const DeltaSequence& delta, bool reduced,
                                    std::uint64_t samples, std::uint64_t seed,
                                    const PrimeTable& table, unsigned threads = 1);

/// Number of q in the support with x = k/2^64 in A_q (or A_q*).
std::uint64_t count_hits(const DeltaSequence& delta, bool reduced, std::uint64_t k);

struct MeasureRow {
  std::uint64_t q;
  DeltaEntry delta;
  Rational meas;          // 2 q Delta_q
  Rational reduced_meas;  // 2 phi(q) Delta_q
};

/// Measure table over the support, using the identities for both sets.
std::vector<MeasureRow> measure_table(const DeltaSequence& delta, const PrimeTable& table);

}  // namespace diophant
