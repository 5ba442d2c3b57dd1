#include <gtest/gtest.h>

#include <algorithm>

#include "diophant/errors.hpp"
#include "diophant/gcd_graph.hpp"
#include "oracles.hpp"

using namespace diophant;

namespace {

const PrimeTable& table() {
  static const PrimeTable t = sieve(100000);
  return t;
}

Rational R(long n, long d) { return Rational(n, d); }

std::vector<Integer> ints(std::initializer_list<long> xs) {
  std::vector<Integer> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

GraphSpec spec(std::initializer_list<long> V, std::initializer_list<long> W,
               std::initializer_list<std::pair<long, long>> E, std::initializer_list<long> P = {},
               long a = 1, long b = 1) {
  GraphSpec s;
  s.V = ints(V);
  s.W = ints(W);
  for (const auto& [v, w] : E) s.E.emplace_back(v, w);
  for (long p : P) s.P.emplace_back(p);
  s.a = a;
  s.b = b;
  return s;
}

GcdGraph graph(std::initializer_list<long> V, std::initializer_list<long> W,
               std::initializer_list<std::pair<long, long>> E, std::initializer_list<long> P = {},
               long a = 1, long b = 1) {
  return GcdGraph::build(spec(V, W, E, P, a, b), table());
}

std::vector<FactoredInt> factored(std::initializer_list<long> xs) {
  std::vector<FactoredInt> out;
  for (long x : xs) out.push_back(factor(static_cast<std::uint64_t>(x), table()));
  return out;
}

std::vector<long> values(const std::vector<FactoredInt>& s) {
  std::vector<long> out;
  for (const auto& f : s) out.push_back(static_cast<long>(f.to_u64()));
  return out;
}

bool has_rule(const std::vector<Violation>& vs, const std::string& witness) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) {
    return v.witness.find(witness) != std::string::npos;
  });
}

/// Primes dividing some vertex of g that are not yet in P.
std::vector<std::uint64_t> split_primes(const GcdGraph& g) {
  std::vector<std::uint64_t> out;
  for (const auto* side : {&g.V, &g.W}) {
    for (const auto& v : *side) {
      for (auto p : v.prime_divisors()) {
        if (!std::binary_search(g.P.begin(), g.P.end(), p)) out.push_back(p);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

TEST(Weights, Examples) {
  EXPECT_EQ(mu_weight(factored({2})), R(1, 2));
  EXPECT_EQ(mu_weight(factored({})), 0);
  EXPECT_EQ(mu_weight(factored({2, 3})), R(7, 6));
  using Edge = std::pair<FactoredInt, FactoredInt>;
  const auto f = [](long x) { return factor(static_cast<std::uint64_t>(x), table()); };
  const std::vector<Edge> one{{f(2), f(3)}};
  const std::vector<Edge> two{{f(2), f(3)}, {f(2), f(5)}};
  EXPECT_EQ(mu_edges(std::span<const Edge>(one)), R(1, 3));
  EXPECT_EQ(mu_edges(std::span<const Edge>()), 0);
  EXPECT_EQ(mu_edges(std::span<const Edge>(two)), R(11, 15));
}

TEST(EdgeDensity, Examples) {
  EXPECT_EQ(edge_density(graph({2}, {3}, {{2, 3}})), 1);
  EXPECT_EQ(edge_density(graph({2}, {3}, {})), 0);
  EXPECT_EQ(edge_density(graph({2, 3}, {5}, {{2, 5}})), R(3, 7));
}

TEST(Quality, Examples) {
  const ConstantsProfile paper = ConstantsProfile::paper();
  const QualityValue q = quality(graph({2}, {3}, {{2, 3}}), paper);
  EXPECT_EQ(q.rational_part(), R(1, 3));
  EXPECT_TRUE(q.value().contains(R(1, 3)));
  EXPECT_TRUE(quality(graph({2}, {3}, {}), paper).is_zero());

  const GcdGraph g7 = graph({2}, {3}, {{2, 3}}, {7});
  const QualityValue q7 = quality(g7, paper);
  EXPECT_EQ(q7.rational_part(), R(1, 3));
  const Enclosure expected = oracle::quality(g7, paper);
  EXPECT_TRUE(q7.value(256).overlaps(expected));
  const Enclosure seven = Enclosure::point(7L, 256);
  const Enclosure base = Enclosure::point(1L, 256) - (seven * sqrt(seven)).reciprocal();
  EXPECT_TRUE(q7.trans_part(256).overlaps(pow(base, -10L)));
  EXPECT_EQ(q7.compare(q), 1);
  EXPECT_EQ(q.compare(q), 0);
  EXPECT_EQ(q.scaled(2).compare(q7), 1);
}

TEST(RemainingPrimes, Examples) {
  const GcdGraph g = graph({77, 91}, {77, 91}, {{77, 77}, {77, 91}, {91, 77}, {91, 91}});
  EXPECT_EQ(remaining_primes(g, ConstantsProfile::toy()), (std::vector<std::uint64_t>{7, 11, 13}));
  EXPECT_TRUE(remaining_primes(g, ConstantsProfile::paper()).empty());
  EXPECT_TRUE(remaining_primes(graph({77}, {77}, {}), ConstantsProfile::toy()).empty());
  // 11 only divides v in the edge (77, 91).
  const GcdGraph h = graph({77, 91}, {77, 91}, {{77, 91}});
  EXPECT_EQ(remaining_primes(h, ConstantsProfile::toy()), (std::vector<std::uint64_t>{7}));
}

TEST(Validate, Examples) {
  EXPECT_TRUE(validate(spec({2}, {3}, {{2, 3}}), table()).empty());
  const auto bad_a = validate(spec({3}, {3}, {}, {2}, 2, 1), table());
  EXPECT_TRUE(has_rule(bad_a, "a|v fails at v=3"));
  const auto fifth = validate(spec({6}, {15}, {{6, 15}}, {3}), table());
  ASSERT_EQ(fifth.size(), 1u);
  EXPECT_EQ(fifth[0].rule, "p|gcd(v,w) iff p|gcd(a,b) for p in P");
  EXPECT_FALSE(validate(spec({4}, {3}, {}), table()).empty());
  EXPECT_FALSE(validate(spec({}, {3}, {}), table()).empty());
  EXPECT_FALSE(validate(spec({2}, {3}, {{2, 5}}), table()).empty());
  EXPECT_FALSE(validate(spec({2}, {3}, {}, {4}), table()).empty());
  EXPECT_FALSE(validate(spec({2}, {3}, {}, {}, 2, 1), table()).empty());
  EXPECT_THROW(GcdGraph::build(spec({4}, {3}, {}), table()), InvalidArgument);
}

TEST(VertexSplit, Examples) {
  const GcdGraph g = graph({6, 10}, {15}, {{6, 15}, {10, 15}});
  const auto s11 = vertex_split(g, 5, 1, 1);
  ASSERT_TRUE(s11.has_value());
  EXPECT_EQ(values(s11->V), (std::vector<long>{10}));
  EXPECT_EQ(values(s11->W), (std::vector<long>{15}));
  EXPECT_EQ(s11->a, 5);
  EXPECT_EQ(s11->b, 5);
  EXPECT_EQ(s11->P, (std::vector<std::uint64_t>{5}));
  EXPECT_EQ(s11->E.size(), 1u);
  EXPECT_TRUE(validate(*s11).empty());
  EXPECT_TRUE(is_subgraph(*s11, g));

  const auto s00 = vertex_split(g, 7, 0, 0);
  ASSERT_TRUE(s00.has_value());
  EXPECT_EQ(s00->V, g.V);
  EXPECT_EQ(s00->W, g.W);
  EXPECT_EQ(s00->E, g.E);
  EXPECT_EQ(s00->P, (std::vector<std::uint64_t>{7}));

  const GcdGraph all5 = graph({10, 15}, {3}, {{10, 3}});
  EXPECT_FALSE(vertex_split(all5, 5, 0, 0).has_value());
  EXPECT_THROW(vertex_split(*s11, 5, 1, 1), InvalidArgument);
}

TEST(DropSymmetricEdges, Examples) {
  const GcdGraph g = graph({10}, {3, 15}, {{10, 15}, {10, 3}});
  const GcdGraph d = drop_symmetric_edges(g, 5);
  ASSERT_EQ(d.E.size(), 1u);
  EXPECT_EQ(d.edge_w(0).value(), 3);
  EXPECT_TRUE(validate(d).empty());
  EXPECT_TRUE(is_subgraph(d, g));
  EXPECT_EQ(drop_symmetric_edges(g, 7).E, g.E);
  EXPECT_TRUE(drop_symmetric_edges(graph({10}, {15}, {{10, 15}}), 5).E.empty());
  EXPECT_THROW(drop_symmetric_edges(d, 5), InvalidArgument);
}

TEST(Subgraph, Relation) {
  const GcdGraph g = graph({6, 10}, {15}, {{6, 15}, {10, 15}});
  EXPECT_TRUE(is_subgraph(g, g));
  const GcdGraph smaller = graph({6}, {15}, {{6, 15}});
  EXPECT_TRUE(is_subgraph(smaller, g));
  EXPECT_FALSE(is_subgraph(g, smaller));
  // P grows and a gains only the new prime.
  const GcdGraph parent = graph({6}, {10}, {{6, 10}}, {2}, 2, 2);
  const GcdGraph child = graph({6}, {10}, {{6, 10}}, {2, 3}, 6, 2);
  EXPECT_TRUE(is_subgraph(child, parent));
  // Same P, but the P-part of a changed.
  const GcdGraph with_a = graph({6}, {15}, {{6, 15}}, {2}, 2, 1);
  const GcdGraph without_a = graph({6}, {15}, {{6, 15}}, {2}, 1, 1);
  EXPECT_FALSE(is_subgraph(without_a, with_a));
}

TEST(GcdGraphProperties, DensityAtMostOneAndPartitionIdentity) {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const GcdGraph g = random_toy_graph(seed, table());
    ASSERT_TRUE(validate(g).empty());
    const Rational mv = mu_weight(g.V), mw = mu_weight(g.W), me = mu_edges(g);
    ASSERT_LE(me, mv * mw) << seed;
    ASSERT_EQ(edge_density(g), oracle::density(g)) << seed;
    for (auto p : split_primes(g)) {
      const auto [alpha, beta] = prime_proportions(g, p);
      Rational total = 0;
      for (int k : {0, 1}) {
        for (int l : {0, 1}) {
          const auto s = vertex_split(g, p, k, l);
          if (!s) continue;
          ASSERT_TRUE(validate(*s).empty()) << seed;
          ASSERT_TRUE(is_subgraph(*s, g)) << seed;
          const Rational ak = k ? alpha : 1 - alpha;
          const Rational bl = l ? beta : 1 - beta;
          total += oracle::density(*s) * ak * bl;
          const SplitWeights w = split_weights(g, p, k, l);
          ASSERT_EQ(w.alpha_k, ak);
          ASSERT_EQ(w.beta_l, bl);
          ASSERT_EQ(w.delta_kl, mu_edges(*s) / me);
        }
      }
      ASSERT_EQ(total, edge_density(g)) << seed << " p=" << p;
    }
  }
}

TEST(GcdGraphProperties, QualityMatchesDefinitionOnSplits) {
  const ConstantsProfile toy = ConstantsProfile::toy();
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const GcdGraph g = random_toy_graph(seed, table());
    GcdGraph cur = g;
    for (auto p : split_primes(g)) {
      const auto s = vertex_split(cur, p, 1, 0);
      if (s && !s->E.empty()) cur = *s;
    }
    for (const GcdGraph* h : {&g, static_cast<const GcdGraph*>(&cur)}) {
      const Enclosure mine = quality(*h, toy).value(256);
      const Enclosure ref = oracle::quality(*h, toy);
      ASSERT_TRUE(mine.overlaps(ref)) << seed << " " << mine.to_string() << " " << ref.to_string();
    }
  }
}

TEST(GcdGraphProperties, QualityRatioClosedForm) {
  const ConstantsProfile toy = ConstantsProfile::toy();
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const GcdGraph g = random_toy_graph(seed, table());
    const Enclosure q0 = oracle::quality(g, toy);
    const Enclosure d0 = Enclosure::point(oracle::density(g), 256);
    for (auto p : split_primes(g)) {
      for (int k : {0, 1}) {
        for (int l : {0, 1}) {
          const auto s = vertex_split(g, p, k, l);
          if (!s || s->E.empty()) continue;
          const Enclosure q1 = oracle::quality(*s, toy);
          const Enclosure d1 = Enclosure::point(oracle::density(*s), 256);
          const SplitWeights w = split_weights(g, p, k, l);
          for (unsigned m : {0u, 1u}) {
            const Enclosure direct = m ? (d1 * q1) / (d0 * q0) : q1 / q0;
            const Enclosure closed = quality_ratio_closed_form(w, p, k, l, m, toy, 256);
            ASSERT_TRUE(direct.overlaps(closed))
                << seed << " p=" << p << " " << k << l << m << " " << direct.to_string() << " vs "
                << closed.to_string();
          }
        }
      }
    }
  }
}

TEST(BalanceInequality, CoarseGrid) {
  const Rational bound = 1 + Rational(1) / Rational(pow(Integer(2), 64));
  for (long i = 0; i <= 32; ++i) {
    for (long j = 0; j <= 32; ++j) {
      ASSERT_TRUE(balance_inequality_lhs(R(i, 32), R(j, 32)).certainly_le(bound)) << i << " " << j;
    }
  }
  EXPECT_TRUE(balance_inequality_lhs(1, 1).contains(1));
  EXPECT_TRUE(balance_inequality_lhs(0, 0).contains(1));
  EXPECT_TRUE(balance_inequality_lhs(R(1, 2), R(1, 2)).certainly_lt(Rational(1)));
}

TEST(PartBInequality, HoldsAtTheLargeThreshold) {
  const unsigned prec = 1024;
  const Enclosure p = Enclosure::point(pow(Integer(5), 100), prec);
  const Enclosure c = part_b_constant(p);
  const Integer top = pow(Integer(5), 12);
  for (long i = 0; i <= 8; ++i) {
    for (long j = 0; j <= 8; ++j) {
      const Rational A = Rational(top) * R(i, 8), B = Rational(top) * R(j, 8);
      ASSERT_TRUE(part_b_rhs(A, B, p).certainly_le(c)) << i << " " << j;
    }
  }
}

TEST(QualityIncrementStep, FullProportionsUsePartB) {
  const GcdGraph g = graph({7}, {7}, {{7, 7}});
  const StepOutcome s = quality_increment_step(g, 7, ConstantsProfile::toy());
  EXPECT_FALSE(s.part_a);
  EXPECT_EQ(s.kind, StepKind::kPartB);
  EXPECT_EQ(s.k, 1);
  EXPECT_EQ(s.l, 1);
  EXPECT_EQ(s.alpha, 1);
  EXPECT_EQ(s.beta, 1);
  EXPECT_EQ(s.delta_after, s.delta_before);
  EXPECT_TRUE(is_subgraph(s.graph, g));
}

TEST(QualityIncrementStep, ToyExample) {
  const ConstantsProfile toy = ConstantsProfile::toy();
  const GcdGraph g = graph({7, 11}, {7, 13}, {{7, 7}});
  const StepOutcome s = quality_increment_step(g, 7, toy);
  EXPECT_EQ(s.alpha, mu_weight(factored({7})) / mu_weight(factored({7, 11})));
  EXPECT_EQ(s.beta, mu_weight(factored({7})) / mu_weight(factored({7, 13})));
  EXPECT_TRUE(is_subgraph(s.graph, g));
  EXPECT_TRUE(validate(s.graph).empty());
  const Enclosure before = oracle::quality(g, toy), after = oracle::quality(s.graph, toy);
  if (after.certainly_ge(before)) EXPECT_TRUE(s.quality_ok[0]);
  if (after.certainly_lt(before)) EXPECT_FALSE(s.quality_ok[0]);
  EXPECT_THROW(quality_increment_step(g, 11, toy), InvalidArgument);
  EXPECT_THROW(quality_increment_step(g, 3, toy), InvalidArgument);
}

TEST(QualityIncrementStep, CertifiedFlagsAgreeWithOracle) {
  const ConstantsProfile toy = ConstantsProfile::toy();
  std::size_t part_a = 0;
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const GcdGraph g = random_toy_graph(seed, table());
    for (auto p : remaining_primes(g, toy)) {
      const StepOutcome s = quality_increment_step(g, p, toy);
      ASSERT_TRUE(is_subgraph(s.graph, g)) << seed;
      ASSERT_TRUE(validate(s.graph).empty()) << seed;
      ASSERT_LE(s.mu_after, s.mu_before) << seed;
      const Enclosure q0 = oracle::quality(g, toy), q1 = oracle::quality(s.graph, toy);
      const Enclosure d0 = Enclosure::point(oracle::density(g), 256);
      const Enclosure d1 = Enclosure::point(oracle::density(s.graph), 256);
      const Enclosure gain = Enclosure::point(static_cast<long>(s.gain_factor), 256);
      const Enclosure lhs[2] = {q1, d1 * q1};
      const Enclosure rhs[2] = {gain * q0, gain * d0 * q0};
      for (int m : {0, 1}) {
        if (lhs[m].certainly_ge(rhs[m])) ASSERT_TRUE(s.quality_ok[m]) << seed << " " << m;
        if (lhs[m].certainly_lt(rhs[m])) ASSERT_FALSE(s.quality_ok[m]) << seed << " " << m;
      }
      if (s.part_a) {
        ++part_a;
        EXPECT_TRUE(s.quality_ok[0] && s.quality_ok[1]) << seed << " p=" << p;
      }
    }
  }
  EXPECT_GT(part_a, 0u);
}

TEST(BuildBt, Examples) {
  ConstantsProfile c = ConstantsProfile::toy();
  const auto S = factored({6, 10, 15});
  EXPECT_TRUE(build_Bt(S, Integer(6), 2, 1, ConstantsProfile::paper()).empty());
  // gcd floor Q/(Nt) = 3 keeps only {10, 15}; L_1 of that pair is 1/2 + 1/3.
  const auto b = build_Bt(S, Integer(6), 2, 1, c);
  EXPECT_EQ(b, (std::vector<std::pair<std::uint32_t, std::uint32_t>>{{1, 2}, {2, 1}}));
  c.L_threshold = R(1, 1000);
  const auto all = build_Bt(S, Integer(6), 100, 1, c);
  // Every off-diagonal pair; the diagonal has an empty prime sum.
  EXPECT_EQ(all.size(), 6u);
  for (const auto& [i, j] : all) EXPECT_NE(i, j);
  EXPECT_THROW(build_Bt(factored({12}), Integer(6), 2, 1, c), InvalidArgument);
}

TEST(GoodEdges, Examples) {
  ConstantsProfile c = ConstantsProfile::toy();
  c.good_prime_exp = 1;
  const GcdGraph g = graph({77}, {13, 91}, {{77, 13}, {77, 91}});
  EXPECT_EQ(good_edges(g, {}, 1, c).size(), 2u);
  const std::uint64_t R7[] = {7};
  EXPECT_EQ(good_edges(g, R7, 1, c), (std::vector<std::size_t>{0, 1}));
  c.good_L_budget = R(1, 10);
  // 1/7 > 1/10 removes (77, 13); 7 divides both ends of (77, 91).
  EXPECT_EQ(good_edges(g, R7, 1, c), (std::vector<std::size_t>{1}));
}

TEST(ConstantsProfile, ParseAndFormat) {
  EXPECT_EQ(parse_profile(format_profile(ConstantsProfile::paper())), ConstantsProfile::paper());
  EXPECT_EQ(parse_profile(format_profile(ConstantsProfile::toy())), ConstantsProfile::toy());
  const ConstantsProfile p = parse_profile("# only one key\np_threshold = \"5^3\"\n");
  EXPECT_EQ(p.p_threshold, 125);
  EXPECT_EQ(p.asym_coeff, ConstantsProfile::paper().asym_coeff);
  EXPECT_EQ(p.label, "custom");
  EXPECT_EQ(ConstantsProfile::paper().p_threshold, pow(Integer(5), 100));
  EXPECT_THROW(parse_profile("nonsense = 3"), InvalidArgument);
  EXPECT_THROW(parse_profile("density_exp = 0"), InvalidArgument);
  EXPECT_THROW(parse_profile("density_exp"), InvalidArgument);
}

TEST(Compress, FullScaleProfileIsTheIdentity) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GcdGraph g = random_toy_graph(seed, table());
    const CompressionResult r = compress(g, 2, ConstantsProfile::paper());
    EXPECT_EQ(r.terminal, g);
    EXPECT_TRUE(r.trace.steps.empty());
    EXPECT_EQ(r.trace.branch, CompressionCase::kNone);
  }
}

TEST(Compress, ToyExample) {
  const GcdGraph g = graph({77, 91}, {77, 91}, {{77, 77}, {77, 91}, {91, 77}, {91, 91}});
  const CompressionResult r = compress(g, 2, ConstantsProfile::toy());
  EXPECT_FALSE(r.trace.steps.empty());
  EXPECT_TRUE(validate(r.terminal).empty());
  EXPECT_TRUE(remaining_primes(r.terminal, ConstantsProfile::toy()).empty());
  const GcdGraph* prev = &g;
  for (const auto& s : r.trace.steps) {
    EXPECT_TRUE(is_subgraph(s.graph, *prev));
    prev = &s.graph;
  }
  EXPECT_EQ(*prev, r.terminal);
  EXPECT_THROW(compress(graph({7}, {7}, {}), 2, ConstantsProfile::toy()), InvalidArgument);
  EXPECT_THROW(compress(g, 0, ConstantsProfile::toy()), InvalidArgument);
}

TEST(Compress, TracesOnRandomGraphs) {
  const ConstantsProfile toy = ConstantsProfile::toy();
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const GcdGraph g = random_toy_graph(seed, table());
    const CompressionResult r = compress(g, 2, toy);
    const GcdGraph* prev = &g;
    Rational mu = mu_edges(g);
    for (const auto& s : r.trace.steps) {
      ASSERT_TRUE(is_subgraph(s.graph, *prev)) << seed;
      ASSERT_TRUE(validate(s.graph).empty()) << seed;
      ASSERT_LE(mu_edges(s.graph), mu) << seed;
      mu = mu_edges(s.graph);
      prev = &s.graph;
    }
    ASSERT_LE(r.trace.stage1_steps, r.trace.steps.size());
    for (std::size_t i = 0; i < r.trace.stage1_steps; ++i) ASSERT_TRUE(r.trace.steps[i].part_a);
    if (!r.trace.emptied) {
      ASSERT_TRUE(remaining_primes(r.terminal, toy).empty()) << seed;
      ASSERT_EQ(r.trace.branch == CompressionCase::kNone, remaining_primes(g, toy).empty()) << seed;
    }
    // D holds the stage 1 primes dividing exactly one of a, b.
    const GcdGraph& g1 = r.trace.stage1_steps ? r.trace.steps[r.trace.stage1_steps - 1].graph : g;
    std::vector<std::uint64_t> D;
    for (auto p : g1.P) {
      if (divides(from_u64(p), g1.a) != divides(from_u64(p), g1.b)) D.push_back(p);
    }
    ASSERT_EQ(r.trace.D, D) << seed;
  }
}

TEST(RandomToyGraph, DeterministicAndValid) {
  EXPECT_EQ(random_toy_graph(7, table()), random_toy_graph(7, table()));
  EXPECT_NE(random_toy_graph(7, table()), random_toy_graph(8, table()));
  EXPECT_FALSE(random_toy_graph(7, table()).E.empty());
}
