#include "diophant/special_case.hpp"

#include <algorithm>
#include <map>

#include "diophant/errors.hpp"

namespace diophant {

std::vector<std::uint64_t> trimmed_squarefree_set(std::uint64_t Q, const Rational& N,
                                                  const PrimeTable& table) {
  std::vector<std::uint64_t> out;
  Rational total = 0;
  for (std::uint64_t q = Q; q <= 2 * Q; ++q) {
    const FactoredInt f = factor(q, table);
    if (!f.is_squarefree()) continue;
    out.push_back(q);
    total += phi_ratio(f);
  }
  while (!out.empty() && total > N) {
    total -= phi_ratio(factor(out.back(), table));
    out.pop_back();
  }
  return out;
}

MertensWindow find_j0(const PrimeTable& table, unsigned max_j, unsigned prec) {
  const auto& primes = table.primes();
  std::vector<Enclosure> prefix;
  prefix.reserve(primes.size() + 1);
  prefix.push_back(Enclosure::point(0L, prec));
  for (std::uint32_t p : primes) {
    prefix.push_back(prefix.back() + Enclosure::point(Rational(1, p), prec));
  }
  // Sum of 1/p over primes with index in [lo, hi).
  const auto window = [&](std::size_t lo, std::size_t hi) {
    return hi > lo ? prefix[hi] - prefix[lo] : Enclosure::point(0L, prec);
  };
  const std::uint64_t limit = table.limit();
  std::uint64_t root = 1;
  while ((root + 1) * (root + 1) <= limit) ++root;

  MertensWindow out{std::nullopt, Enclosure::point(0L, prec), root};
  for (unsigned j = 0; j <= max_j; ++j) {
    const Enclosure t0 = exp(Enclosure::point(static_cast<long>(1) << j, prec));
    const Rational t0_hi = t0.upper();
    if (t0_hi * t0_hi > Rational(from_u64(limit))) break;
    // t = t0: primes in (t0, t0^2].
    const auto first_above = [&](const Rational& x) {
      return static_cast<std::size_t>(
          std::upper_bound(primes.begin(), primes.end(), x,
                           [](const Rational& v, std::uint32_t p) { return v < Rational(p); }) -
          primes.begin());
    };
    Enclosure sup = window(first_above(t0_hi), first_above(t0.lower() * t0.lower()));
    // t = sqrt(p) for primes p >= t0^2: primes in (sqrt(p), p]; between
    // two such points the window only loses primes.
    std::size_t lo = 0;
    for (std::size_t i = first_above(t0_hi * t0_hi); i < primes.size(); ++i) {
      const std::uint64_t p = primes[i];
      while (lo < i && static_cast<std::uint64_t>(primes[lo]) * primes[lo] <= p) ++lo;
      const Enclosure w = window(lo, i + 1);
      if (mpfr_cmp(w.hi().get(), sup.hi().get()) > 0) sup = w;
    }
    out.sup_sum = sup;
    if (sup.certainly_le(Rational(1))) {
      out.j0 = j;
      return out;
    }
  }
  return out;
}

SpecialCaseReport special_case_harness(std::uint64_t Q, const Rational& N,
                                       std::span<const std::uint64_t> S,
                                       std::span<const Rational> t_ladder,
                                       const ConstantsProfile& c, bool delta_link,
                                       const PrimeTable& table, unsigned threads,
                                       unsigned prec) {
  if (N < 2 || Rational(from_u64(Q)) < N) {
    throw PreconditionError("special case needs Q >= N >= 2");
  }
  SpecialCaseReport out;
  out.Q = Q;
  out.N = N;
  out.S.assign(S.begin(), S.end());
  std::sort(out.S.begin(), out.S.end());
  if (std::adjacent_find(out.S.begin(), out.S.end()) != out.S.end()) {
    throw PreconditionError("S has repeated elements");
  }
  std::vector<FactoredInt> fs;
  for (auto q : out.S) {
    if (q < Q || q > 2 * Q) {
      throw PreconditionError(std::to_string(q) + " lies outside [Q, 2Q]");
    }
    fs.push_back(factor(q, table));
    if (!fs.back().is_squarefree()) {
      throw PreconditionError(std::to_string(q) + " is not square-free");
    }
    out.weight += phi_ratio(fs.back());
  }
  if (out.weight < N / 2 || out.weight > N) {
    throw PreconditionError("weight " + to_string(out.weight) + " outside [N/2, N] = [" +
                            to_string(N / 2) + ", " + to_string(N) + "]");
  }

  // Group the bilinear sum by exponent so each distinct exp is evaluated once.
  std::map<Rational, Rational> by_exponent;
  const Rational QN = Rational(from_u64(Q)) / N;
  for (const auto& q : fs) {
    for (const auto& r : fs) {
      const FactoredInt g = gcd(q, r);
      const Rational L = correlation_prime_sum(q, r, QN / Rational(g.value()),
                                               CorrelationVariant::kGcdSquared);
      by_exponent[L] += phi_ratio(q) * phi_ratio(r);
    }
  }
  out.bilinear = Enclosure::point(0L, prec);
  for (const auto& [L, coeff] : by_exponent) {
    out.bilinear += Enclosure::point(coeff, prec) * exp(Enclosure::point(L, prec));
  }
  out.bilinear_ratio = out.bilinear / Enclosure::point(N * N, prec);

  for (const auto& t : t_ladder) {
    LadderRow row;
    row.t = t;
    const auto Bt = build_Bt(fs, from_u64(Q), N, t, c);
    row.pairs = Bt.size();
    for (const auto& [i, j] : Bt) row.mu_Bt += phi_ratio(fs[i]) * phi_ratio(fs[j]);
    row.ratio = row.mu_Bt * t / (N * N);
    if (!Bt.empty()) {
      GcdGraph g0;
      g0.V = fs;
      g0.W = fs;
      g0.E = Bt;
      std::sort(g0.E.begin(), g0.E.end());
      auto result = compress(g0, t, c);
      row.trace = std::move(result.trace);
      row.terminal = std::move(result.terminal);
    }
    out.ladder.push_back(std::move(row));
  }

  out.window = find_j0(table, 8, prec);

  if (delta_link && !out.S.empty()) {
    const DeltaSequence delta = delta_uniform_support(out.S, N);
    out.link = window_report(delta, out.S.front(), out.S.back(), table, threads);
  }
  return out;
}

}  // namespace diophant
