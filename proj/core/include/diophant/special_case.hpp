#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "diophant/approx_sets.hpp"
#include "diophant/enclosure.hpp"
#include "diophant/gcd_graph.hpp"
#include "diophant/numtheory.hpp"

namespace diophant {

/// Square-free q in [Q, 2Q], dropping the largest ones until the total
/// weight sum phi(q)/q is at most N.
std::vector<std::uint64_t> trimmed_squarefree_set(std::uint64_t Q, const Rational& N,
                                                  const PrimeTable& table);

/// Sup of sum_{t < p <= t^2} 1/p over t in [e^(2^j), sqrt(limit)], for
/// the smallest j where it is certified to be at most 1.
struct MertensWindow {
  std::optional<unsigned> j0;
  Enclosure sup_sum;            // the sup at j0 (or at the last j tried)
  std::uint64_t checked_up_to;  // largest t examined
};
MertensWindow find_j0(const PrimeTable& table, unsigned max_j = 8,
                      unsigned prec = kDefaultPrecision);

struct LadderRow {
  Rational t;
  std::size_t pairs = 0;
  Rational mu_Bt;  // sum over B_t of phi(q) phi(r)/(q r)
  Rational ratio;  // mu_Bt t / N^2
  /// Compression of (S, S, B_t, {}, 1, 1), when B_t is non-empty.
  std::optional<CompressionTrace> trace;
  std::optional<GcdGraph> terminal;
};

struct SpecialCaseReport {
  std::uint64_t Q = 0;
  Rational N;
  std::vector<std::uint64_t> S;
  Rational weight;             // sum phi(q)/q
  Enclosure bilinear;          // sum over S x S of phi phi/(q r) exp(L(q, r))
  Enclosure bilinear_ratio;    // bilinear / N^2
  std::vector<LadderRow> ladder;
  MertensWindow window;
  std::optional<WindowReport> link;  // Delta_q = 1/(qN) on S
};

/// Checks Q >= N >= 2, S square-free in [Q, 2Q] and N/2 <= weight <= N
/// (PreconditionError otherwise), then evaluates the bilinear sum, the
/// B_t ladder with one compression per non-empty B_t, and optionally the
/// measure chain for Delta_q = 1/(qN).
SpecialCaseReport special_case_harness(std::uint64_t Q, const Rational& N,
                                       std::span<const std::uint64_t> S,
                                       std::span<const Rational> t_ladder,
                                       const ConstantsProfile& c, bool delta_link,
                                       const PrimeTable& table, unsigned threads = 1,
                                       unsigned prec = kDefaultPrecision);

}  // namespace diophant
