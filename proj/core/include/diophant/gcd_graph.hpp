#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "diophant/enclosure.hpp"
#include "diophant/numtheory.hpp"
#include "diophant/rational.hpp"

namespace diophant {

/// Thresholds and exponents of the compression argument. The "paper"
/// profile makes every desk-scale graph terminal; "toy" profiles shrink the
/// thresholds so that every branch is reachable.
struct ConstantsProfile {
  Integer p_threshold;     // primes above this may enter R(G)
  Integer asym_coeff;      // part (a) applies when min{alpha,beta} <= 1 - asym_coeff/p
  unsigned density_exp;    // exponent of delta(G) in q(G)
  unsigned trans_exp;      // exponent of (1 - p^-trans_power)^-1
  Rational trans_power;
  Rational L_threshold;    // L_t(q,r) > L_threshold in B_t
  unsigned case1_exp;      // Case 1 when q(G_J1) >= t^case1_exp q(G_0)
  unsigned good_prime_exp; // good edges sum over p > t^good_prime_exp
  Rational good_L_budget;  // ... and keep edges whose sum is <= this
  std::string label;

  static ConstantsProfile paper();
  static ConstantsProfile toy();

  friend bool operator==(const ConstantsProfile&, const ConstantsProfile&) = default;
};

/// Parses "key = value" lines (blank lines and '#' comments ignored).
/// Values are integers, "b^e" powers or rationals "num/den", optionally in
/// double quotes. Keys not given keep the value of the "paper" profile;
/// unknown keys and non-positive values throw InvalidArgument.
ConstantsProfile parse_profile(std::string_view text);
std::string format_profile(const ConstantsProfile& c);

/// Raw sextuple as read from a file, before any checking.
struct GraphSpec {
  std::vector<Integer> V;
  std::vector<Integer> W;
  std::vector<std::pair<Integer, Integer>> E;
  std::vector<Integer> P;
  Integer a = 1;
  Integer b = 1;
};

struct Violation {
  std::string rule;     // which defining condition fails
  std::string witness;  // the offending element

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Square-free GCD graph (V, W, E, P, a, b). Vertex lists are ascending and
/// distinct; edges are index pairs into V and W, ascending and distinct.
struct GcdGraph {
  std::vector<FactoredInt> V;
  std::vector<FactoredInt> W;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> E;
  std::vector<std::uint64_t> P;
  Integer a = 1;
  Integer b = 1;

  /// Sorts and deduplicates the spec, factors every vertex and checks all
  /// defining conditions. Throws InvalidArgument listing the violations.
  static GcdGraph build(const GraphSpec& spec, const PrimeTable& table);

  GraphSpec spec() const;
  const FactoredInt& edge_v(std::size_t i) const { return V[E[i].first]; }
  const FactoredInt& edge_w(std::size_t i) const { return W[E[i].second]; }
  bool has_prime(std::uint64_t p) const;

  friend bool operator==(const GcdGraph&, const GcdGraph&) = default;
};

/// Every violated defining condition with a witness; empty iff G is a valid
/// square-free GCD graph.
std::vector<Violation> validate(const GraphSpec& spec, const PrimeTable& table);
std::vector<Violation> validate(const GcdGraph& g);

/// G' is a subgraph of G: V' in V, W' in W, E' in E, P' contains P, and the
/// P-parts of a', b' equal a, b.
bool is_subgraph(const GcdGraph& sub, const GcdGraph& g);

/// Sum of phi(v)/v.
Rational mu_weight(std::span<const FactoredInt> s);
/// Sum of phi(v) phi(w)/(v w) over the pairs.
Rational mu_edges(std::span<const std::pair<FactoredInt, FactoredInt>> e);
Rational mu_edges(const GcdGraph& g);
Rational edge_density(const GcdGraph& g);

/// (1 - p^-trans_power)^-trans_exp.
Enclosure prime_factor_term(std::uint64_t p, const ConstantsProfile& c, unsigned prec);

/// q(G) as an exact rational part times a product over P of
/// (1 - p^-trans_power)^-trans_exp, enclosed on demand.
class QualityValue {
 public:
  QualityValue() = default;
  QualityValue(Rational rational_part, std::vector<std::uint64_t> primes, unsigned trans_exp,
               Rational trans_power);

  const Rational& rational_part() const noexcept { return rational_; }
  const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }
  bool is_zero() const { return rational_ == 0; }

  Enclosure trans_part(unsigned prec = kDefaultPrecision) const;
  Enclosure value(unsigned prec = kDefaultPrecision) const;

  /// The same value times an exact rational factor.
  QualityValue scaled(const Rational& f) const;

  /// Sign of *this - other, decided exactly when the prime products cancel
  /// and by escalating enclosures otherwise. Throws PrecisionError if the
  /// enclosures stay overlapping up to kMaxPrecision.
  int compare(const QualityValue& other, unsigned prec = kDefaultPrecision) const;

 private:
  Rational rational_;
  std::vector<std::uint64_t> primes_;
  unsigned trans_exp_ = 0;
  Rational trans_power_;
};

/// delta^density_exp mu(E) ab/gcd(a,b)^2 ab/(phi(a) phi(b)) times the
/// product over P.
QualityValue quality(const GcdGraph& g, const ConstantsProfile& c);

/// Primes p not in P with p > p_threshold dividing gcd(v, w) for some edge.
std::vector<std::uint64_t> remaining_primes(const GcdGraph& g, const ConstantsProfile& c);

/// mu({v in V : p | v}) / mu(V) and the same for W.
std::pair<Rational, Rational> prime_proportions(const GcdGraph& g, std::uint64_t p);

/// G_{k,l} = (V_k, W_l, E cap (V_k x W_l), P + {p}, a p^k, b p^l), where
/// V_1 = {p | v}, V_0 = {p does not divide v}. nullopt if V_k or W_l is
/// empty. Throws InvalidArgument if p is in P.
std::optional<GcdGraph> vertex_split(const GcdGraph& g, std::uint64_t p, int k, int l);

/// (V, W, E minus V_1 x W_1, P + {p}, a, b). Throws InvalidArgument if p
/// is in P.
GcdGraph drop_symmetric_edges(const GcdGraph& g, std::uint64_t p);

/// Relative weights of one split: delta_{k,l} = mu(E_{k,l})/mu(E),
/// alpha_k, beta_l.
struct SplitWeights {
  Rational delta_kl;
  Rational alpha_k;
  Rational beta_l;
};
SplitWeights split_weights(const GcdGraph& g, std::uint64_t p, int k, int l);

/// Closed form of delta(G_{k,l})^m q(G_{k,l}) / (delta(G)^m q(G)):
/// delta_kl^(d+1+m) (alpha_k beta_l)^(-d-m) p^[k != l] /
/// ((1 - 1/p)^(k+l) (1 - p^-tau)^T) with d, tau, T from the profile.
Enclosure quality_ratio_closed_form(const SplitWeights& s, std::uint64_t p, int k, int l,
                                    unsigned m, const ConstantsProfile& c,
                                    unsigned prec = kDefaultPrecision);

/// (a b)^(9/10) + ((1-a)(1-b))^(9/10) + (2/5)(a(1-b) + (1-a) b).
Enclosure balance_inequality_lhs(const Rational& alpha, const Rational& beta,
                                 unsigned prec = kDefaultPrecision);

/// Right-hand side of the part (b) sufficient condition with
/// alpha = 1 - A/p, beta = 1 - B/p, for p given as an enclosure.
Enclosure part_b_rhs(const Rational& A, const Rational& B, const Enclosure& p);
/// (1 - p^-3/2)^-1 for p given as an enclosure.
Enclosure part_b_constant(const Enclosure& p);

enum class StepKind { kSymmetric, kAsymmetric, kEdgeDrop, kPartB, kGoodFilter };
const char* to_string(StepKind kind);

struct StepOutcome {
  GcdGraph graph;
  StepKind kind = StepKind::kSymmetric;
  int k = -1;  // split indices; -1 for edge drops and filters
  int l = -1;
  std::uint64_t prime = 0;  // 0 for filters
  bool part_a = false;
  /// The sufficient density inequality certified the choice (as
  /// opposed to a direct quality comparison).
  bool by_inequality = false;
  Rational alpha;
  Rational beta;
  Rational delta_before;
  Rational delta_after;
  Rational mu_before;
  Rational mu_after;
  unsigned gain_factor = 1;
  /// delta(G')^m q(G') >= gain delta(G)^m q(G), m = 0, 1.
  std::array<bool, 2> quality_ok{false, false};
  QualityValue q_before;
  QualityValue q_after;
};

/// One application of the quality increment argument at p in R(G).
/// Part (a) (min{alpha,beta} <= 1 - asym/p) tries (1,1), (0,0) against the
/// symmetric density inequality, then (1,0), (0,1) against the asymmetric
/// one together with a certified gain of 2, then a direct certified
/// comparison of the same candidates, and finally drops the edges of
/// V_1 x W_1. Part (b) takes the first of the four splits satisfying its
/// sufficient inequality, then the first with a certified q(G') >= q(G),
/// then the best nonempty split. quality_ok is always the outcome of a
/// certified comparison. Throws InvalidArgument if p is not in R(G).
StepOutcome quality_increment_step(const GcdGraph& g, std::uint64_t p,
                                   const ConstantsProfile& c);

/// Pairs (q, r) of S x S with gcd(q, r) > Q/(N t) and
/// L_t(q, r) > L_threshold. Throws InvalidArgument for a non-square-free
/// member.
std::vector<std::pair<std::uint32_t, std::uint32_t>> build_Bt(std::span<const FactoredInt> s,
                                                             const Integer& Q, const Rational& N,
                                                             const Rational& t,
                                                             const ConstantsProfile& c);

/// Edges whose sum of 1/p over p in R, p > t^good_prime_exp, dividing
/// exactly one endpoint is at most good_L_budget; returned as indices
/// into g.E.
std::vector<std::size_t> good_edges(const GcdGraph& g, std::span<const std::uint64_t> R,
                                    const Rational& t, const ConstantsProfile& c);

enum class CompressionCase { kNone, kCase1, kCase2 };
const char* to_string(CompressionCase c);

struct CompressionTrace {
  std::vector<StepOutcome> steps;
  std::size_t stage1_steps = 0;          // J_1
  CompressionCase branch = CompressionCase::kNone;
  std::vector<std::uint64_t> D;          // stage 1 primes dividing exactly one of a, b
  std::optional<Rational> good_edge_fraction;  // mu(E_good)/mu(E), Case 2 only
  bool emptied = false;                  // the edge set became empty
  QualityValue q_initial;
  QualityValue q_stage1;
};

struct CompressionResult {
  GcdGraph terminal;
  CompressionTrace trace;
};

/// Two-stage compression: part (a) steps while some p in R(G) has
/// min{alpha,beta} <= 1 - asym/p (smallest such p first); then Case 1 if
/// q(G_J1) >= t^case1_exp q(G_0), Case 2 otherwise (restrict to good
/// edges first); then steps at the smallest prime of R(G) until R(G) is
/// empty. A graph with R(G0) empty is returned unchanged with an empty
/// trace. Throws InvalidArgument if E(G0) is empty or t <= 0.
CompressionResult compress(const GcdGraph& g0, const Rational& t, const ConstantsProfile& c);

/// Parameters of random square-free toy graphs with P empty and a = b = 1.
struct ToyGraphParams {
  std::vector<std::uint64_t> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  unsigned min_vertices = 3;
  unsigned max_vertices = 10;
  double prime_probability = 0.35;
  double edge_probability = 0.5;
};

/// Deterministic random graph for a seed; always has at least one edge.
/// The table must factor products of params.primes (limit 10^5 covers the
/// default primes).
GcdGraph random_toy_graph(std::uint64_t seed, const PrimeTable& table,
                          const ToyGraphParams& params = {});

}  // namespace diophant
