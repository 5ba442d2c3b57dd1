#include "diophant/approx_sets.hpp"
#include "diophant/int128.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "diophant/errors.hpp"
#include "diophant/parallel.hpp"

namespace diophant {

namespace {

Integer u128_to_integer(u128 v) {
  Integer hi = from_u64(static_cast<std::uint64_t>(v >> 64));
  mpz_mul_2exp(hi.get_mpz_t(), hi.get_mpz_t(), 64);
  return hi + from_u64(static_cast<std::uint64_t>(v));
}

Rational half_over(std::uint64_t q) { return make_rational(Integer(1), 2 * from_u64(q)); }

/// Rational bounds lo <= v <= hi with hi - lo <= 2^-64 lo, using dyadic
/// denominators. `eval` produces an enclosure of v at a given precision.
std::pair<Rational, Rational> dyadic_bounds(const std::function<Enclosure(unsigned)>& eval,
                                            unsigned prec) {
  for (unsigned pr = prec; pr <= kMaxPrecision; pr *= 2) {
    const Enclosure e = eval(pr);
    if (!e.is_positive()) continue;
    const Rational lo = e.lower();
    // 2^-e well below 2^-64 * lo.
    const Integer inv = floor(Rational(1) / lo) + 1;
    const unsigned long shift = 66 + mpz_sizeinbase(inv.get_mpz_t(), 2);
    Integer scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), shift);
    const Rational rlo = make_rational(floor(lo * Rational(scale)), scale);
    const Rational rhi = make_rational(ceil(e.upper() * Rational(scale)), scale);
    if (rlo > 0 && (rhi - rlo) * Rational(pow(Integer(2), 64)) <= rlo) {
      return {rlo, rhi};
    }
  }
  throw PrecisionError("could not enclose a radius to relative width 2^-64");
}

void check_unsaturated(std::uint64_t q, const Rational& d) {
  if (d > half_over(q)) {
    throw SaturationError("Delta_" + std::to_string(q) + " = " + to_string(d) +
                              " exceeds 1/(2q)",
                          q);
  }
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Inverse of x modulo m (gcd(x, m) = 1, m >= 1), in [0, m).
std::uint64_t inverse_mod(std::uint64_t x, std::uint64_t m) {
  i128 r0 = m, r1 = x % m, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const i128 t = r0 / r1;
    r0 -= t * r1;
    std::swap(r0, r1);
    s0 -= t * s1;
    std::swap(s0, s1);
  }
  const i128 mm = m;
  return static_cast<std::uint64_t>(((s0 % mm) + mm) % mm);
}

/// meas(A_q* cap A_r*) for q, r >= 2. Every interval then lies inside
/// (0, 1), and two intervals around a/q and b/r overlap in
/// min(2 min(dq, dr), dq + dr - k/(qr)) where k = |ar - bq|. Only
/// k < (dq + dr) qr <= (q + r)/2 contributes, so the sum runs over the few
/// admissible k, counting the coprime pairs (a, b) realizing each one.
Rational lattice_pair_intersection(std::uint64_t q, const Rational& dq, std::uint64_t r,
                                   const Rational& dr) {
  const Integer qr = from_u64(q) * from_u64(r);
  const Rational sum = dq + dr;
  const Rational small = std::min(dq, dr);
  // k < kmax contributes; k <= kfull gives full containment.
  const Integer kmax = ceil(sum * Rational(qr));
  const Integer kfull = floor((std::max(dq, dr) - small) * Rational(qr));
  const std::uint64_t g = gcd_u64(q, r), qp = q / g, rp = r / g;
  const std::uint64_t inv = inverse_mod(rp % qp, qp);
  const std::uint64_t kfull_u = kfull.fits_ulong_p() ? kfull.get_ui() : ~std::uint64_t{0};
  std::uint64_t n_full = 0, n_partial = 0;
  u128 k_partial = 0;
  // a r' - b q' = t with k = g |t|.
  const std::uint64_t kmax_u = kmax.get_ui();
  for (std::uint64_t kp = 0; g * kp < kmax_u; ++kp) {
    const std::uint64_t k = g * kp;
    for (int sign : {1, -1}) {
      if (kp == 0 && sign < 0) break;
      const i128 t = sign * static_cast<i128>(kp);
      const i128 tm = ((t % static_cast<i128>(qp)) + qp) % static_cast<i128>(qp);
      const std::uint64_t a0 = static_cast<std::uint64_t>(tm * inv % static_cast<i128>(qp));
      for (std::uint64_t a = a0 == 0 ? qp : a0; a < q; a += qp) {
        const i128 num = static_cast<i128>(a) * rp - t;
        const i128 b = num / static_cast<i128>(qp);
        if (b < 1 || b >= static_cast<i128>(r)) continue;
        if (gcd_u64(a, q) != 1 || gcd_u64(static_cast<std::uint64_t>(b), r) != 1) continue;
        if (k <= kfull_u) {
          ++n_full;
        } else {
          ++n_partial;
          k_partial += k;
        }
      }
    }
  }
  return 2 * small * Rational(from_u64(n_full)) + sum * Rational(from_u64(n_partial)) -
         make_rational(u128_to_integer(k_partial), qr);
}

/// Membership of x = k/2^64 in A_q or A_q*, with thresh = floor(2^64 q Delta).
bool hits(std::uint64_t q, std::uint64_t thresh, bool reduced, std::uint64_t k) {
  const u128 prod = static_cast<u128>(k) * q;
  const auto high = static_cast<std::uint64_t>(prod >> 64);
  const auto low = static_cast<std::uint64_t>(prod);
  constexpr std::uint64_t kHalf = std::uint64_t{1} << 63;
  // Distance to the nearest multiple of 2^64, in units of 1/(q 2^64).
  const std::uint64_t dist = low <= kHalf ? low : (~low + 1);
  if (dist > thresh) return false;
  if (!reduced) return true;
  if (low < kHalf) return gcd_u64(high, q) == 1;
  if (low > kHalf) return gcd_u64(high + 1, q) == 1;
  return gcd_u64(high, q) == 1 || gcd_u64(high + 1, q) == 1;
}

struct HitTarget {
  std::uint64_t q;
  std::uint64_t thresh;
};

std::vector<HitTarget> hit_targets(const DeltaSequence& delta) {
  std::vector<HitTarget> out;
  out.reserve(delta.entries().size());
  const Rational two64(pow(Integer(2), 64));
  for (const auto& [q, e] : delta.entries()) {
    check_unsaturated(q, e.value);
    const Integer t = floor(two64 * Rational(from_u64(q)) * e.value);
    out.push_back({q, to_u64(t)});
  }
  return out;
}

}  // namespace

DeltaSequence::DeltaSequence(std::uint64_t qmax, std::string label)
    : qmax_(qmax), label_(std::move(label)) {
  if (qmax == 0) throw InvalidArgument("DeltaSequence needs qmax >= 1");
}

void DeltaSequence::set(std::uint64_t q, const Rational& value) { set(q, value, value, false); }

void DeltaSequence::set(std::uint64_t q, const Rational& lo, const Rational& hi, bool clipped) {
  if (q == 0 || q > qmax_) {
    throw InvalidArgument("q = " + std::to_string(q) + " outside [1, " + std::to_string(qmax_) +
                          "]");
  }
  if (lo < 0 || hi < lo) throw InvalidArgument("invalid radius enclosure at q = " + std::to_string(q));
  if (hi == 0) {
    values_.erase(q);
    return;
  }
  values_[q] = DeltaEntry{lo, hi, clipped};
}

Rational DeltaSequence::at(std::uint64_t q) const {
  const auto it = values_.find(q);
  return it == values_.end() ? Rational(0) : it->second.value;
}

const DeltaEntry* DeltaSequence::find(std::uint64_t q) const {
  const auto it = values_.find(q);
  return it == values_.end() ? nullptr : &it->second;
}

std::vector<std::uint64_t> DeltaSequence::support() const {
  std::vector<std::uint64_t> out;
  out.reserve(values_.size());
  for (const auto& [q, e] : values_) {
    if (e.value > 0) out.push_back(q);
  }
  return out;
}

bool DeltaSequence::saturated(std::uint64_t q) const { return at(q) > half_over(q); }

std::optional<std::uint64_t> DeltaSequence::first_saturated() const {
  for (const auto& [q, e] : values_) {
    if (e.value > half_over(q)) return q;
  }
  return std::nullopt;
}

DeltaSequence DeltaSequence::restricted(std::uint64_t lo, std::uint64_t hi) const {
  DeltaSequence out(qmax_, label_ + " restricted to [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");
  for (auto it = values_.lower_bound(lo); it != values_.end() && it->first <= hi; ++it) {
    out.values_.insert(*it);
  }
  return out;
}

DeltaSequence delta_khinchin(const Rational& c, std::uint64_t qmax, unsigned prec) {
  if (c <= 0) throw InvalidArgument("khinchin exponent must be positive");
  if (qmax < 2) throw InvalidArgument("khinchin sequence needs qmax >= 2");
  DeltaSequence out(qmax, "khinchin:" + to_string(c));
  const bool integral = c.get_den() == 1 && c.get_num().fits_slong_p();
  const long ci = integral ? c.get_num().get_si() : 0;
  for (std::uint64_t q = 2; q <= qmax; ++q) {
    const auto eval = [&](unsigned pr) {
      const Enclosure qe = Enclosure::point(from_u64(q), pr);
      const Enclosure l = log(qe);
      const Enclosure lc = integral ? pow(l, ci) : pow(l, c);
      return (qe * qe * lc).reciprocal();
    };
    const Rational cap = half_over(q);
    const int s = certified_sign([&](unsigned pr) { return eval(pr) - Enclosure::point(cap, pr); },
                                 prec);
    if (s > 0) {
      out.set(q, cap, cap, true);
      continue;
    }
    const auto [lo, hi] = dyadic_bounds(eval, prec);
    out.set(q, lo, std::min(hi, cap), false);
  }
  return out;
}

DeltaSequence delta_uniform_support(std::span<const std::uint64_t> support, const Rational& n) {
  if (n < 2) throw SaturationError("uniform radius 1/(qN) needs N >= 2, got N = " + to_string(n), 0);
  std::uint64_t qmax = 1;
  for (auto q : support) {
    if (q == 0) throw InvalidArgument("support contains 0");
    qmax = std::max(qmax, q);
  }
  DeltaSequence out(qmax, "uniform:N=" + to_string(n));
  for (auto q : support) out.set(q, Rational(1) / (Rational(from_u64(q)) * n));
  return out;
}

Counterexample delta_counterexample(std::size_t J, const PrimeTable& table, unsigned prec) {
  if (J < 2) throw InvalidArgument("counterexample needs J >= 2");
  if (table.primes().size() < J) {
    throw InvalidArgument("prime table holds fewer than " + std::to_string(J) + " primes");
  }
  const Integer qJ = primorial(J, table);
  if (!qJ.fits_ulong_p() || mpz_sizeinbase(qJ.get_mpz_t(), 2) > 63) {
    throw InvalidArgument("primorial of " + std::to_string(J) + " primes exceeds 64 bits");
  }
  Counterexample out{DeltaSequence(to_u64(qJ), "counterexample:" + std::to_string(J)), {}};
  std::vector<Integer> divisors{1};  // divisors of q_{j-1}
  Integer prev = 1;                  // q_{j-1}
  Rational product = 1;
  for (std::size_t j = 1; j <= J; ++j) {
    const std::uint64_t p = table.primes()[j - 1];
    const Integer qj = prev * p;
    if (j >= 2) {
      CounterexampleLevel level{j, p, qj, {}, 0, product, Enclosure(prec)};
      for (const auto& d : divisors) level.members.push_back(d * p);
      std::sort(level.members.begin(), level.members.end());
      const auto weight = [j](unsigned pr) {
        const Enclosure je = Enclosure::point(static_cast<long>(j), pr);
        const Enclosure l = log(je);
        return (je * l * l).reciprocal();
      };
      level.weight = weight(prec);
      const auto [lo, hi] = dyadic_bounds(
          [&](unsigned pr) { return weight(pr) / Enclosure::point(qj, pr); }, prec);
      for (const auto& q : level.members) {
        level.rational_part += make_rational(q, qj);
        out.delta.set(to_u64(q), lo, hi);
      }
      out.levels.push_back(std::move(level));
    }
    std::vector<Integer> next = divisors;
    for (const auto& d : divisors) next.push_back(d * p);
    divisors = std::move(next);
    product *= Rational(1) + make_rational(Integer(1), from_u64(p));
    prev = qj;
  }
  return out;
}

IntervalUnion build_Aq(std::uint64_t q, const Rational& delta, bool reduced) {
  if (q == 0) throw InvalidArgument("build_Aq needs q >= 1");
  if (delta < 0) throw InvalidArgument("negative radius");
  check_unsaturated(q, delta);
  if (delta == 0) return {};
  std::vector<RatInterval> raw;
  const Integer qi = from_u64(q);
  for (std::uint64_t a = 0; a <= q; ++a) {
    if (reduced && gcd_u64(a, q) != 1) continue;
    const Rational c = make_rational(from_u64(a), qi);
    raw.push_back({c - delta, c + delta});
  }
  return IntervalUnion::normalize(std::move(raw));
}

Rational reduced_pair_intersection_generic(std::uint64_t q, const Rational& dq, std::uint64_t r,
                                           const Rational& dr) {
  return measure(intersect(build_Aq(q, dq, true), build_Aq(r, dr, true)));
}

Rational reduced_pair_intersection(std::uint64_t q, const Rational& dq, std::uint64_t r,
                                   const Rational& dr) {
  check_unsaturated(q, dq);
  check_unsaturated(r, dr);
  if (dq == 0 || dr == 0) return 0;
  if (q >= 2 && r >= 2 && q < (std::uint64_t{1} << 31) && r < (std::uint64_t{1} << 31)) {
    return lattice_pair_intersection(q, dq, r, dr);
  }
  return reduced_pair_intersection_generic(q, dq, r, dr);
}

PairData pair_data(std::uint64_t q, std::uint64_t r, const DeltaSequence& delta,
                   const PrimeTable& table, unsigned prec) {
  if (q == r) throw InvalidArgument("pair_data needs q != r");
  if (q < 2 || r < 2) throw InvalidArgument("pair_data needs q, r >= 2");
  const Rational dq = delta.at(q), dr = delta.at(r);
  check_unsaturated(q, dq);
  check_unsaturated(r, dr);
  const FactoredInt fq = factor(q, table), fr = factor(r, table);
  PairData out{reduced_pair_intersection(q, dq, r, dr),
               Rational(2) * std::max(dq, dr) * Rational(lcm(from_u64(q), from_u64(r))),
               0,
               Rational(totient(fq)) * dq * Rational(totient(fr)) * dr,
               Enclosure(prec)};
  out.prime_sum = correlation_prime_sum(fq, fr, out.M, CorrelationVariant::kGcd);
  out.pv_term = Enclosure::point(out.pv_rational, prec) * exp(Enclosure::point(out.prime_sum, prec));
  if (out.M <= 1 && out.exact_meas != 0) {
    throw InvariantFailure("M(" + std::to_string(q) + "," + std::to_string(r) +
                           ") <= 1 but the reduced sets intersect");
  }
  return out;
}

Rational cs_lower_bound(std::span<const Rational> measures, std::span<const Rational> pairs) {
  const std::size_t n = measures.size();
  if (pairs.size() != n * n) throw InvalidArgument("pair matrix must be n x n");
  Rational sum = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (measures[i] < 0) throw InvalidArgument("negative measure");
    if (pairs[i * n + i] != measures[i]) {
      throw InvalidArgument("pair matrix diagonal differs from the measures");
    }
    sum += measures[i];
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& v = pairs[i * n + j];
      if (v < 0) throw InvalidArgument("negative pair measure");
      if (v != pairs[j * n + i]) throw InvalidArgument("pair matrix is not symmetric");
      total += v;
    }
  }
  if (total == 0) return 0;
  return sum * sum / total;
}

std::optional<std::uint64_t> find_window(const DeltaSequence& delta, std::uint64_t Q,
                                         const PrimeTable& table) {
  Rational sum = 0;
  const auto& entries = delta.entries();
  for (auto it = entries.lower_bound(Q); it != entries.end(); ++it) {
    const auto& [q, e] = *it;
    check_unsaturated(q, e.value);
    sum += Rational(2) * Rational(totient(factor(q, table))) * e.value;
    if (sum >= 1) return q;
  }
  return std::nullopt;
}

WindowReport window_report(const DeltaSequence& delta, std::uint64_t Q, std::uint64_t R,
                           const PrimeTable& table, unsigned threads) {
  if (Q == 0 || Q > R || R > delta.qmax()) {
    throw InvalidArgument("window [" + std::to_string(Q) + ", " + std::to_string(R) +
                          "] outside [1, qmax]");
  }
  std::vector<std::uint64_t> qs;
  std::vector<Rational> ds;
  for (auto it = delta.entries().lower_bound(Q); it != delta.entries().end() && it->first <= R;
       ++it) {
    check_unsaturated(it->first, it->second.value);
    qs.push_back(it->first);
    ds.push_back(it->second.value);
  }
  const std::size_t n = qs.size();
  std::vector<Rational> measures(n), pairs(n * n);
  std::vector<IntervalUnion> sets(n);
  parallel_for(n, threads, [&](std::size_t i) {
    measures[i] = Rational(2) * Rational(totient(factor(qs[i], table))) * ds[i];
    sets[i] = build_Aq(qs[i], ds[i], true);
    pairs[i * n + i] = measures[i];
  });
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs[i * n + j] = reduced_pair_intersection(qs[i], ds[i], qs[j], ds[j]);
    }
  }, 1);
  WindowReport out;
  out.Q = Q;
  out.R = R;
  for (std::size_t i = 0; i < n; ++i) {
    out.sum_meas += measures[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs[j * n + i] = pairs[i * n + j];
      out.pair_sum += pairs[i * n + j];
    }
  }
  out.cs_bound = cs_lower_bound(measures, pairs);
  out.union_meas = measure(unite_all(sets));
  out.second_moment_floor = Rational(1) / (Rational(2) + Rational(2) * out.pair_sum);
  out.floor_applies = out.sum_meas >= 1 && out.sum_meas <= 2;
  if (!(out.cs_bound <= out.union_meas)) {
    throw InvariantFailure("second-moment bound " + to_string(out.cs_bound) +
                           " exceeds the union measure " + to_string(out.union_meas));
  }
  if (!(out.union_meas <= out.sum_meas)) {
    throw InvariantFailure("union measure exceeds the sum of measures");
  }
  if (out.floor_applies && out.union_meas < out.second_moment_floor) {
    throw InvariantFailure("union measure below 1/(2+2C)");
  }
  return out;
}

DeltaSequence catlin_transform(const DeltaSequence& delta) {
  DeltaSequence out(delta.qmax(), "catlin(" + delta.label() + "), sup truncated at qmax=" +
                                      std::to_string(delta.qmax()));
  std::map<std::uint64_t, DeltaEntry> best;
  const auto update = [&](std::uint64_t d, const DeltaEntry& e) {
    auto [it, inserted] = best.try_emplace(d, e);
    if (inserted) return;
    DeltaEntry& cur = it->second;
    if (e.value > cur.value) {
      cur.value = e.value;
      cur.clipped = e.clipped;
    }
    if (e.upper > cur.upper) cur.upper = e.upper;
  };
  for (const auto& [m, e] : delta.entries()) {
    for (std::uint64_t d = 1; d * d <= m; ++d) {
      if (m % d != 0) continue;
      update(d, e);
      if (d * d != m) update(m / d, e);
    }
  }
  for (const auto& [q, e] : best) out.set(q, e.value, e.upper, e.clipped);
  return out;
}

bool MonteCarloResult::within_sigmas(unsigned k) const {
  if (samples == 0) return false;
  const Rational diff = mean - expected;
  return diff * diff * Rational(from_u64(samples)) <= Rational(k * k) * variance;
}

std::uint64_t count_hits(const DeltaSequence& delta, bool reduced, std::uint64_t k) {
  std::uint64_t n = 0;
  for (const auto& t : hit_targets(delta)) n += hits(t.q, t.thresh, reduced, k);
  return n;
}

MonteCarloResult monte_carlo_counts(const DeltaSequence& delta, bool reduced,
                                    std::uint64_t samples, std::uint64_t seed,
                                    const PrimeTable& table, unsigned threads) {
  if (samples == 0) throw InvalidArgument("monte carlo needs at least one sample");
  const auto targets = hit_targets(delta);
  std::vector<std::uint64_t> counts(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 gen(seq);
    const std::uint64_t k = gen();
    std::uint64_t n = 0;
    for (const auto& t : targets) n += hits(t.q, t.thresh, reduced, k);
    counts[i] = n;
  });
  MonteCarloResult out;
  out.samples = samples;
  u128 sum = 0, sum_sq = 0;
  for (auto c : counts) {
    sum += c;
    sum_sq += static_cast<u128>(c) * c;
    ++out.histogram[c];
  }
  const Rational n(from_u64(samples));
  out.mean = Rational(u128_to_integer(sum)) / n;
  if (samples > 1) {
    out.variance = (Rational(u128_to_integer(sum_sq)) - n * out.mean * out.mean) / (n - 1);
  }
  for (const auto& [q, e] : delta.entries()) {
    const Integer mult = reduced ? totient(factor(q, table)) : from_u64(q);
    out.expected += Rational(2) * Rational(mult) * e.value;
  }
  out.stddev = std::sqrt(out.variance.get_d());
  out.stderr_mean = out.stddev / std::sqrt(static_cast<double>(samples));
  return out;
}

std::vector<MeasureRow> measure_table(const DeltaSequence& delta, const PrimeTable& table) {
  std::vector<MeasureRow> out;
  out.reserve(delta.entries().size());
  for (const auto& [q, e] : delta.entries()) {
    const Rational d = e.value;
    out.push_back({q, e, Rational(2) * Rational(from_u64(q)) * d,
                   Rational(2) * Rational(totient(factor(q, table))) * d});
  }
  return out;
}

}  // namespace diophant
