#include <algorithm>

#include "diophant/errors.hpp"
#include "diophant/gcd_graph.hpp"

namespace diophant {

namespace {

/// Smallest p in R(G) with min{alpha, beta} <= 1 - asym/p.
std::optional<std::uint64_t> part_a_prime(const GcdGraph& g, const ConstantsProfile& c) {
  for (auto p : remaining_primes(g, c)) {
    const auto [alpha, beta] = prime_proportions(g, p);
    if (std::min(alpha, beta) <= 1 - Rational(c.asym_coeff) / Rational(from_u64(p))) return p;
  }
  return std::nullopt;
}

/// Steps at the smallest remaining prime until R(G) is empty. Returns
/// false if the edge set became empty.
bool exhaust(GcdGraph& g, const ConstantsProfile& c, CompressionTrace& trace) {
  for (;;) {
    const auto R = remaining_primes(g, c);
    if (R.empty()) return true;
    trace.steps.push_back(quality_increment_step(g, R.front(), c));
    g = trace.steps.back().graph;
    if (g.E.empty()) return false;
  }
}

}  // namespace

CompressionResult compress(const GcdGraph& g0, const Rational& t, const ConstantsProfile& c) {
  if (g0.E.empty()) throw InvalidArgument("compress needs a non-empty edge set");
  if (t <= 0) throw InvalidArgument("compress needs t > 0");
  CompressionResult out{g0, {}};
  CompressionTrace& trace = out.trace;
  GcdGraph& g = out.terminal;
  trace.q_initial = quality(g0, c);
  if (remaining_primes(g0, c).empty()) {
    trace.q_stage1 = trace.q_initial;
    return out;
  }

  while (auto p = part_a_prime(g, c)) {
    trace.steps.push_back(quality_increment_step(g, *p, c));
    g = trace.steps.back().graph;
    if (g.E.empty()) {
      trace.emptied = true;
      break;
    }
  }
  trace.stage1_steps = trace.steps.size();
  trace.q_stage1 = quality(g, c);
  for (const auto& s : trace.steps) {
    const Integer p = from_u64(s.prime);
    if (divides(p, g.a) != divides(p, g.b)) trace.D.push_back(s.prime);
  }
  std::sort(trace.D.begin(), trace.D.end());
  if (trace.emptied) return out;

  const QualityValue target = trace.q_initial.scaled(pow(t, static_cast<long>(c.case1_exp)));
  if (trace.q_stage1.compare(target) >= 0) {
    trace.branch = CompressionCase::kCase1;
    trace.emptied = !exhaust(g, c, trace);
    return out;
  }

  trace.branch = CompressionCase::kCase2;
  const auto R = remaining_primes(g, c);
  const auto keep = good_edges(g, R, t, c);
  GcdGraph filtered = g;
  filtered.E.clear();
  for (auto i : keep) filtered.E.push_back(g.E[i]);

  StepOutcome filter;
  filter.kind = StepKind::kGoodFilter;
  filter.delta_before = edge_density(g);
  filter.delta_after = edge_density(filtered);
  filter.mu_before = mu_edges(g);
  filter.mu_after = mu_edges(filtered);
  filter.q_before = trace.q_stage1;
  filter.q_after = quality(filtered, c);
  // The filter only promises half of the previous quality.
  for (unsigned m = 0; m < 2; ++m) {
    const QualityValue lhs = filter.q_after.scaled(pow(filter.delta_after, static_cast<long>(m)));
    const QualityValue rhs =
        filter.q_before.scaled(Rational(1, 2) * pow(filter.delta_before, static_cast<long>(m)));
    filter.quality_ok[m] = lhs.compare(rhs) >= 0;
  }
  trace.good_edge_fraction =
      filter.mu_before == 0 ? Rational(0) : filter.mu_after / filter.mu_before;
  filter.graph = filtered;
  trace.steps.push_back(std::move(filter));
  g = std::move(filtered);
  if (g.E.empty()) {
    trace.emptied = true;
    return out;
  }
  trace.emptied = !exhaust(g, c, trace);
  return out;
}

}  // namespace diophant
