#include "diophant/gcd_graph.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "diophant/errors.hpp"

namespace diophant {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// "n", "b^e" or "num/den".
Rational parse_profile_value(const std::string& key, std::string v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  Rational out;
  if (const auto caret = v.find('^'); caret != std::string::npos) {
    const Integer base = parse_integer(v.substr(0, caret));
    const Integer exp = parse_integer(v.substr(caret + 1));
    if (exp < 0 || !exp.fits_ulong_p()) throw InvalidArgument("bad exponent for " + key);
    out = Rational(pow(base, exp.get_ui()));
  } else {
    out = parse_rational(v);
  }
  if (out <= 0) throw InvalidArgument("profile value for " + key + " must be positive");
  return out;
}

Integer as_integer(const std::string& key, const Rational& v) {
  if (v.get_den() != 1) throw InvalidArgument("profile value for " + key + " must be an integer");
  return v.get_num();
}

unsigned as_unsigned(const std::string& key, const Rational& v) {
  const Integer n = as_integer(key, v);
  if (!n.fits_uint_p()) throw InvalidArgument("profile value for " + key + " too large");
  return static_cast<unsigned>(n.get_ui());
}

bool contains_sorted(const std::vector<std::uint64_t>& v, std::uint64_t p) {
  return std::binary_search(v.begin(), v.end(), p);
}

/// phi(a) for a dividing the product of the primes in P.
Integer phi_over(const Integer& a, const std::vector<std::uint64_t>& P) {
  Integer rest = a, out = 1;
  for (auto p : P) {
    const Integer pi = from_u64(p);
    if (divides(pi, rest)) {
      rest /= pi;
      out *= pi - 1;
    }
  }
  if (rest != 1) throw InvariantFailure("multiplicative data not supported on P");
  return out;
}

/// P-part of n: product of the p in P dividing n.
Integer p_part(const Integer& n, const std::vector<std::uint64_t>& P) {
  Integer out = 1;
  for (auto p : P) {
    const Integer pi = from_u64(p);
    if (divides(pi, n)) out *= pi;
  }
  return out;
}

std::string join_pair(const Integer& v, const Integer& w) {
  return "(" + to_string(v) + "," + to_string(w) + ")";
}

/// The defining conditions on already factored data.
void check_conditions(const std::vector<FactoredInt>& V, const std::vector<FactoredInt>& W,
                      const std::vector<std::pair<const FactoredInt*, const FactoredInt*>>& E,
                      const std::vector<std::uint64_t>& P, const Integer& a, const Integer& b,
                      std::vector<Violation>& out) {
  for (const auto* set : {&V, &W}) {
    const char* name = set == &V ? "V" : "W";
    for (const auto& v : *set) {
      if (!v.is_squarefree()) {
        out.push_back({std::string(name) + " is square-free", to_string(v.value())});
      }
    }
  }
  if (a < 1 || b < 1) {
    out.push_back({"a and b are positive", "a=" + to_string(a) + ", b=" + to_string(b)});
    return;
  }
  Integer prod = 1;
  for (auto p : P) prod *= from_u64(p);
  if (!divides(a, prod)) out.push_back({"a divides the product of P", "a=" + to_string(a)});
  if (!divides(b, prod)) out.push_back({"b divides the product of P", "b=" + to_string(b)});
  for (const auto& v : V) {
    if (!divides(a, v.value())) out.push_back({"a|v", "a|v fails at v=" + to_string(v.value())});
  }
  for (const auto& w : W) {
    if (!divides(b, w.value())) out.push_back({"b|w", "b|w fails at w=" + to_string(w.value())});
  }
  const Integer gab = gcd(a, b);
  for (const auto& [v, w] : E) {
    for (auto p : P) {
      const Integer pi = from_u64(p);
      const bool in_edge = v->divisible_by_prime(p) && w->divisible_by_prime(p);
      if (in_edge != divides(pi, gab)) {
        out.push_back({"p|gcd(v,w) iff p|gcd(a,b) for p in P",
                       "edge " + join_pair(v->value(), w->value()) + ", p=" + std::to_string(p)});
      }
    }
  }
}

std::vector<Rational> weights(const std::vector<FactoredInt>& s) {
  std::vector<Rational> out;
  out.reserve(s.size());
  for (const auto& v : s) out.push_back(phi_ratio(v));
  return out;
}

void insert_prime(std::vector<std::uint64_t>& P, std::uint64_t p) {
  P.insert(std::upper_bound(P.begin(), P.end(), p), p);
}

}  // namespace

ConstantsProfile ConstantsProfile::paper() {
  return {pow(Integer(5), 100), pow(Integer(5), 12), 9, 10, Rational(3, 2), 100, 30, 32, 1,
          "paper"};
}

ConstantsProfile ConstantsProfile::toy() {
  return {5, 2, 9, 10, Rational(3, 2), Rational(1, 4), 3, 2, 1, "toy"};
}

ConstantsProfile parse_profile(std::string_view text) {
  ConstantsProfile c = ConstantsProfile::paper();
  c.label = "custom";
  bool labelled = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("profile line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "label") {
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        value = value.substr(1, value.size() - 2);
      }
      c.label = value;
      labelled = true;
      continue;
    }
    const Rational v = parse_profile_value(key, value);
    if (key == "p_threshold") {
      c.p_threshold = as_integer(key, v);
    } else if (key == "asym_coeff") {
      c.asym_coeff = as_integer(key, v);
    } else if (key == "density_exp") {
      c.density_exp = as_unsigned(key, v);
    } else if (key == "trans_exp") {
      c.trans_exp = as_unsigned(key, v);
    } else if (key == "trans_power") {
      c.trans_power = v;
    } else if (key == "L_threshold") {
      c.L_threshold = v;
    } else if (key == "case1_exp") {
      c.case1_exp = as_unsigned(key, v);
    } else if (key == "good_prime_exp") {
      c.good_prime_exp = as_unsigned(key, v);
    } else if (key == "good_L_budget") {
      c.good_L_budget = v;
    } else {
      throw InvalidArgument("unknown profile key '" + key + "'");
    }
  }
  if (!labelled) {
    ConstantsProfile probe = c;
    probe.label = "paper";
    if (probe == ConstantsProfile::paper()) c.label = "paper";
    probe.label = "toy";
    if (probe == ConstantsProfile::toy()) c.label = "toy";
  }
  return c;
}

std::string format_profile(const ConstantsProfile& c) {
  std::ostringstream out;
  out << "label = \"" << c.label << "\"\n"
      << "p_threshold = " << to_string(c.p_threshold) << "\n"
      << "asym_coeff = " << to_string(c.asym_coeff) << "\n"
      << "density_exp = " << c.density_exp << "\n"
      << "trans_exp = " << c.trans_exp << "\n"
      << "trans_power = \"" << to_string(c.trans_power) << "\"\n"
      << "L_threshold = \"" << to_string(c.L_threshold) << "\"\n"
      << "case1_exp = " << c.case1_exp << "\n"
      << "good_prime_exp = " << c.good_prime_exp << "\n"
      << "good_L_budget = \"" << to_string(c.good_L_budget) << "\"\n";
  return out.str();
}

std::vector<Violation> validate(const GraphSpec& spec, const PrimeTable& table) {
  std::vector<Violation> out;
  if (spec.V.empty()) out.push_back({"V is non-empty", "V={}"});
  if (spec.W.empty()) out.push_back({"W is non-empty", "W={}"});
  const auto factor_all = [&](const std::vector<Integer>& s, const char* name) {
    std::vector<FactoredInt> f;
    for (const auto& v : s) {
      if (v < 1) {
        out.push_back({std::string(name) + " holds positive integers", to_string(v)});
        continue;
      }
      try {
        f.push_back(factor(v, table));
      } catch (const InvalidArgument&) {
        out.push_back({std::string(name) + " within the factoring range of the sieve", to_string(v)});
      }
    }
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    return f;
  };
  const auto V = factor_all(spec.V, "V");
  const auto W = factor_all(spec.W, "W");
  std::vector<std::uint64_t> P;
  for (const auto& p : spec.P) {
    bool prime = false;
    if (p >= 2) {
      try {
        const auto f = factor(p, table);
        prime = f.factors().size() == 1 && f.factors()[0].exponent == 1;
      } catch (const InvalidArgument&) {
      }
    }
    if (!prime || !p.fits_ulong_p()) {
      out.push_back({"P is a set of primes", to_string(p)});
      continue;
    }
    P.push_back(p.get_ui());
  }
  std::sort(P.begin(), P.end());
  P.erase(std::unique(P.begin(), P.end()), P.end());
  std::vector<std::pair<const FactoredInt*, const FactoredInt*>> E;
  const auto lookup = [](const std::vector<FactoredInt>& s, const Integer& x) -> const FactoredInt* {
    const auto it = std::lower_bound(s.begin(), s.end(), x,
                                     [](const FactoredInt& f, const Integer& y) { return f.value() < y; });
    return it != s.end() && it->value() == x ? &*it : nullptr;
  };
  for (const auto& [v, w] : spec.E) {
    const FactoredInt* fv = lookup(V, v);
    const FactoredInt* fw = lookup(W, w);
    if (!fv || !fw) {
      out.push_back({"E is a subset of V x W", "edge " + join_pair(v, w)});
      continue;
    }
    E.emplace_back(fv, fw);
  }
  check_conditions(V, W, E, P, spec.a, spec.b, out);
  return out;
}

std::vector<Violation> validate(const GcdGraph& g) {
  std::vector<Violation> out;
  if (g.V.empty()) out.push_back({"V is non-empty", "V={}"});
  if (g.W.empty()) out.push_back({"W is non-empty", "W={}"});
  std::vector<std::pair<const FactoredInt*, const FactoredInt*>> E;
  for (const auto& [i, j] : g.E) {
    if (i >= g.V.size() || j >= g.W.size()) {
      out.push_back({"E is a subset of V x W", "edge index out of range"});
      continue;
    }
    E.emplace_back(&g.V[i], &g.W[j]);
  }
  check_conditions(g.V, g.W, E, g.P, g.a, g.b, out);
  return out;
}

GcdGraph GcdGraph::build(const GraphSpec& spec, const PrimeTable& table) {
  const auto violations = validate(spec, table);
  if (!violations.empty()) {
    std::string msg = "invalid GCD graph:";
    for (const auto& v : violations) msg += " [" + v.rule + ": " + v.witness + "]";
    throw InvalidArgument(msg);
  }
  GcdGraph g;
  for (const auto& v : spec.V) g.V.push_back(factor(v, table));
  for (const auto& w : spec.W) g.W.push_back(factor(w, table));
  for (auto* s : {&g.V, &g.W}) {
    std::sort(s->begin(), s->end());
    s->erase(std::unique(s->begin(), s->end()), s->end());
  }
  const auto index = [](const std::vector<FactoredInt>& s, const Integer& x) {
    return static_cast<std::uint32_t>(
        std::lower_bound(s.begin(), s.end(), x,
                         [](const FactoredInt& f, const Integer& y) { return f.value() < y; }) -
        s.begin());
  };
  for (const auto& [v, w] : spec.E) g.E.emplace_back(index(g.V, v), index(g.W, w));
  std::sort(g.E.begin(), g.E.end());
  g.E.erase(std::unique(g.E.begin(), g.E.end()), g.E.end());
  for (const auto& p : spec.P) g.P.push_back(p.get_ui());
  std::sort(g.P.begin(), g.P.end());
  g.P.erase(std::unique(g.P.begin(), g.P.end()), g.P.end());
  g.a = spec.a;
  g.b = spec.b;
  return g;
}

GraphSpec GcdGraph::spec() const {
  GraphSpec s;
  for (const auto& v : V) s.V.push_back(v.value());
  for (const auto& w : W) s.W.push_back(w.value());
  for (const auto& [i, j] : E) s.E.emplace_back(V[i].value(), W[j].value());
  for (auto p : P) s.P.push_back(from_u64(p));
  s.a = a;
  s.b = b;
  return s;
}

bool GcdGraph::has_prime(std::uint64_t p) const { return contains_sorted(P, p); }

bool is_subgraph(const GcdGraph& sub, const GcdGraph& g) {
  const auto subset = [](const std::vector<FactoredInt>& x, const std::vector<FactoredInt>& y) {
    return std::includes(y.begin(), y.end(), x.begin(), x.end());
  };
  if (!subset(sub.V, g.V) || !subset(sub.W, g.W)) return false;
  if (!std::includes(sub.P.begin(), sub.P.end(), g.P.begin(), g.P.end())) return false;
  std::set<std::pair<Integer, Integer>> edges;
  for (std::size_t i = 0; i < g.E.size(); ++i) {
    edges.emplace(g.edge_v(i).value(), g.edge_w(i).value());
  }
  for (std::size_t i = 0; i < sub.E.size(); ++i) {
    if (!edges.count({sub.edge_v(i).value(), sub.edge_w(i).value()})) return false;
  }
  return p_part(sub.a, g.P) == g.a && p_part(sub.b, g.P) == g.b;
}

Rational mu_weight(std::span<const FactoredInt> s) {
  Rational out = 0;
  for (const auto& v : s) out += phi_ratio(v);
  return out;
}

Rational mu_edges(std::span<const std::pair<FactoredInt, FactoredInt>> e) {
  Rational out = 0;
  for (const auto& [v, w] : e) out += phi_ratio(v) * phi_ratio(w);
  return out;
}

Rational mu_edges(const GcdGraph& g) {
  const auto wv = weights(g.V), ww = weights(g.W);
  Rational out = 0;
  for (const auto& [i, j] : g.E) out += wv[i] * ww[j];
  return out;
}

Rational edge_density(const GcdGraph& g) {
  const Rational denom = mu_weight(g.V) * mu_weight(g.W);
  if (denom == 0) return 0;
  return mu_edges(g) / denom;
}

Enclosure prime_factor_term(std::uint64_t p, const ConstantsProfile& c, unsigned prec) {
  const Enclosure pe = Enclosure::point(from_u64(p), prec);
  const Enclosure base = Enclosure::point(1L, prec) - pow(pe, c.trans_power).reciprocal();
  return pow(base, static_cast<long>(c.trans_exp)).reciprocal();
}

QualityValue::QualityValue(Rational rational_part, std::vector<std::uint64_t> primes,
                           unsigned trans_exp, Rational trans_power)
    : rational_(std::move(rational_part)),
      primes_(std::move(primes)),
      trans_exp_(trans_exp),
      trans_power_(std::move(trans_power)) {
  std::sort(primes_.begin(), primes_.end());
}

namespace {

Enclosure trans_product(std::span<const std::uint64_t> primes, unsigned trans_exp,
                        const Rational& trans_power, unsigned prec) {
  Enclosure out = Enclosure::point(1L, prec);
  ConstantsProfile c;
  c.trans_exp = trans_exp;
  c.trans_power = trans_power;
  for (auto p : primes) out *= prime_factor_term(p, c, prec);
  return out;
}

}  // namespace

Enclosure QualityValue::trans_part(unsigned prec) const {
  return trans_product(primes_, trans_exp_, trans_power_, prec);
}

Enclosure QualityValue::value(unsigned prec) const {
  return Enclosure::point(rational_, prec) * trans_part(prec);
}

QualityValue QualityValue::scaled(const Rational& f) const {
  QualityValue out = *this;
  out.rational_ *= f;
  return out;
}

int QualityValue::compare(const QualityValue& other, unsigned prec) const {
  const int sa = mpq_sgn(rational_.get_mpq_t()), sb = mpq_sgn(other.rational_.get_mpq_t());
  if (sa == 0 || sb == 0) return sa > sb ? 1 : (sa < sb ? -1 : 0);
  std::vector<std::uint64_t> only_a, only_b;
  std::set_difference(primes_.begin(), primes_.end(), other.primes_.begin(), other.primes_.end(),
                      std::back_inserter(only_a));
  std::set_difference(other.primes_.begin(), other.primes_.end(), primes_.begin(), primes_.end(),
                      std::back_inserter(only_b));
  if (only_a.empty() && only_b.empty()) {
    const int c = cmp(rational_, other.rational_);
    return c > 0 ? 1 : (c < 0 ? -1 : 0);
  }
  return certified_sign(
      [&](unsigned pr) {
        return Enclosure::point(rational_, pr) * trans_product(only_a, trans_exp_, trans_power_, pr) -
               Enclosure::point(other.rational_, pr) *
                   trans_product(only_b, other.trans_exp_, other.trans_power_, pr);
      },
      prec);
}

QualityValue quality(const GcdGraph& g, const ConstantsProfile& c) {
  const Rational muE = mu_edges(g);
  if (muE == 0) return QualityValue(0, g.P, c.trans_exp, c.trans_power);
  const Rational delta = muE / (mu_weight(g.V) * mu_weight(g.W));
  const Integer gab = gcd(g.a, g.b);
  const Integer ab = g.a * g.b;
  const Rational r = pow(delta, static_cast<long>(c.density_exp)) * muE *
                     make_rational(ab, gab * gab) *
                     make_rational(ab, phi_over(g.a, g.P) * phi_over(g.b, g.P));
  return QualityValue(r, g.P, c.trans_exp, c.trans_power);
}

std::vector<std::uint64_t> remaining_primes(const GcdGraph& g, const ConstantsProfile& c) {
  std::set<std::uint64_t> out;
  for (std::size_t i = 0; i < g.E.size(); ++i) {
    const FactoredInt d = gcd(g.edge_v(i), g.edge_w(i));
    for (const auto& f : d.factors()) {
      if (out.count(f.prime) || g.has_prime(f.prime)) continue;
      if (from_u64(f.prime) > c.p_threshold) out.insert(f.prime);
    }
  }
  return {out.begin(), out.end()};
}

std::pair<Rational, Rational> prime_proportions(const GcdGraph& g, std::uint64_t p) {
  Rational v1 = 0, v = 0, w1 = 0, w = 0;
  for (const auto& x : g.V) {
    const Rational r = phi_ratio(x);
    v += r;
    if (x.divisible_by_prime(p)) v1 += r;
  }
  for (const auto& x : g.W) {
    const Rational r = phi_ratio(x);
    w += r;
    if (x.divisible_by_prime(p)) w1 += r;
  }
  if (v == 0 || w == 0) throw InvalidArgument("proportions need non-empty vertex sets");
  return {v1 / v, w1 / w};
}

std::optional<GcdGraph> vertex_split(const GcdGraph& g, std::uint64_t p, int k, int l) {
  if (g.has_prime(p)) throw InvalidArgument("prime " + std::to_string(p) + " already in P");
  if ((k != 0 && k != 1) || (l != 0 && l != 1)) throw InvalidArgument("split indices are 0 or 1");
  GcdGraph out;
  std::vector<std::int64_t> vmap(g.V.size(), -1), wmap(g.W.size(), -1);
  for (std::size_t i = 0; i < g.V.size(); ++i) {
    if (g.V[i].divisible_by_prime(p) == (k == 1)) {
      vmap[i] = static_cast<std::int64_t>(out.V.size());
      out.V.push_back(g.V[i]);
    }
  }
  for (std::size_t j = 0; j < g.W.size(); ++j) {
    if (g.W[j].divisible_by_prime(p) == (l == 1)) {
      wmap[j] = static_cast<std::int64_t>(out.W.size());
      out.W.push_back(g.W[j]);
    }
  }
  if (out.V.empty() || out.W.empty()) return std::nullopt;
  for (const auto& [i, j] : g.E) {
    if (vmap[i] >= 0 && wmap[j] >= 0) {
      out.E.emplace_back(static_cast<std::uint32_t>(vmap[i]), static_cast<std::uint32_t>(wmap[j]));
    }
  }
  out.P = g.P;
  insert_prime(out.P, p);
  out.a = k == 1 ? g.a * from_u64(p) : g.a;
  out.b = l == 1 ? g.b * from_u64(p) : g.b;
  return out;
}

GcdGraph drop_symmetric_edges(const GcdGraph& g, std::uint64_t p) {
  if (g.has_prime(p)) throw InvalidArgument("prime " + std::to_string(p) + " already in P");
  GcdGraph out = g;
  std::erase_if(out.E, [&](const auto& e) {
    return g.V[e.first].divisible_by_prime(p) && g.W[e.second].divisible_by_prime(p);
  });
  insert_prime(out.P, p);
  return out;
}

SplitWeights split_weights(const GcdGraph& g, std::uint64_t p, int k, int l) {
  const auto wv = weights(g.V), ww = weights(g.W);
  Rational muE = 0, muKL = 0;
  for (const auto& [i, j] : g.E) {
    const Rational w = wv[i] * ww[j];
    muE += w;
    if (g.V[i].divisible_by_prime(p) == (k == 1) && g.W[j].divisible_by_prime(p) == (l == 1)) {
      muKL += w;
    }
  }
  if (muE == 0) throw InvalidArgument("split weights need a non-empty edge set");
  const auto [alpha, beta] = prime_proportions(g, p);
  return {muKL / muE, k == 1 ? alpha : 1 - alpha, l == 1 ? beta : 1 - beta};
}

Enclosure quality_ratio_closed_form(const SplitWeights& s, std::uint64_t p, int k, int l,
                                    unsigned m, const ConstantsProfile& c, unsigned prec) {
  if (s.alpha_k == 0 || s.beta_l == 0) throw InvalidArgument("split with an empty vertex set");
  const long d = static_cast<long>(c.density_exp);
  const long em = static_cast<long>(m);
  const Rational pr = Rational(from_u64(p));
  Rational r = pow(s.delta_kl, d + 1 + em) * pow(s.alpha_k * s.beta_l, -d - em);
  if (k != l) r *= pr;
  r /= pow(1 - 1 / pr, static_cast<long>(k + l));
  return Enclosure::point(r, prec) * prime_factor_term(p, c, prec);
}

Enclosure balance_inequality_lhs(const Rational& alpha, const Rational& beta, unsigned prec) {
  const Rational e(9, 10);
  const Enclosure x = pow(Enclosure::point(alpha * beta, prec), e);
  const Enclosure y = pow(Enclosure::point((1 - alpha) * (1 - beta), prec), e);
  const Rational z = Rational(2, 5) * (alpha * (1 - beta) + (1 - alpha) * beta);
  return x + y + Enclosure::point(z, prec);
}

Enclosure part_b_constant(const Enclosure& p) {
  const unsigned prec = p.precision();
  return (Enclosure::point(1L, prec) - pow(p, Rational(3, 2)).reciprocal()).reciprocal();
}

Enclosure part_b_rhs(const Rational& A, const Rational& B, const Enclosure& p) {
  const unsigned prec = p.precision();
  const Rational nine_tenths(9, 10);
  const Enclosure one = Enclosure::point(1L, prec);
  const Enclosure ip = p.reciprocal();
  const Enclosure a = one - Enclosure::point(A, prec) * ip;  // alpha
  const Enclosure b = one - Enclosure::point(B, prec) * ip;  // beta
  const Enclosure a9 = pow(a, nine_tenths), b9 = pow(b, nine_tenths);
  const Enclosure A9 = pow(Enclosure::point(A, prec), nine_tenths);
  const Enclosure B9 = pow(Enclosure::point(B, prec), nine_tenths);
  const Enclosure first = a9 * b9 * pow(one - ip, Rational(1, 5));
  const Enclosure second = A9 * B9 / pow(p, Rational(9, 5));
  const Enclosure third = (a9 * B9 + A9 * b9) * ip;
  return first + second + third;
}

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::kSymmetric: return "symmetric";
    case StepKind::kAsymmetric: return "asymmetric";
    case StepKind::kEdgeDrop: return "edge_drop";
    case StepKind::kPartB: return "part_b";
    case StepKind::kGoodFilter: return "good_filter";
  }
  return "unknown";
}

const char* to_string(CompressionCase c) {
  switch (c) {
    case CompressionCase::kNone: return "none";
    case CompressionCase::kCase1: return "case1";
    case CompressionCase::kCase2: return "case2";
  }
  return "unknown";
}

namespace {

struct StepContext {
  const GcdGraph& g;
  std::uint64_t p;
  const ConstantsProfile& c;
  Rational alpha, beta, delta, muE;
  QualityValue q;
  bool part_a;
};

StepOutcome finish(const StepContext& ctx, GcdGraph next, StepKind kind, int k, int l,
                   unsigned gain, bool by_inequality) {
  StepOutcome out;
  out.kind = kind;
  out.k = k;
  out.l = l;
  out.prime = ctx.p;
  out.part_a = ctx.part_a;
  out.by_inequality = by_inequality;
  out.alpha = ctx.alpha;
  out.beta = ctx.beta;
  out.delta_before = ctx.delta;
  out.mu_before = ctx.muE;
  out.delta_after = edge_density(next);
  out.mu_after = mu_edges(next);
  out.gain_factor = gain;
  out.q_before = ctx.q;
  out.q_after = quality(next, ctx.c);
  for (unsigned m = 0; m < 2; ++m) {
    const QualityValue lhs = out.q_after.scaled(pow(out.delta_after, static_cast<long>(m)));
    const QualityValue rhs =
        ctx.q.scaled(Rational(gain) * pow(ctx.delta, static_cast<long>(m)));
    out.quality_ok[m] = lhs.compare(rhs) >= 0;
  }
  out.graph = std::move(next);
  return out;
}

/// q(G') delta(G')^m >= gain q(G) delta(G)^m for m = 0 and, if `both`, m = 1.
bool certified_gain(const StepContext& ctx, const GcdGraph& next, unsigned gain, bool both) {
  const QualityValue qn = quality(next, ctx.c);
  if (qn.is_zero()) return false;
  const Rational dn = edge_density(next);
  for (unsigned m = 0; m < (both ? 2u : 1u); ++m) {
    const QualityValue lhs = qn.scaled(pow(dn, static_cast<long>(m)));
    const QualityValue rhs = ctx.q.scaled(Rational(gain) * pow(ctx.delta, static_cast<long>(m)));
    if (lhs.compare(rhs) < 0) return false;
  }
  return true;
}

constexpr std::array<std::pair<int, int>, 4> kCandidates{{{1, 1}, {0, 0}, {1, 0}, {0, 1}}};

}  // namespace

StepOutcome quality_increment_step(const GcdGraph& g, std::uint64_t p, const ConstantsProfile& c) {
  if (g.E.empty()) throw InvalidArgument("quality increment step needs a non-empty edge set");
  const auto R = remaining_primes(g, c);
  if (!std::binary_search(R.begin(), R.end(), p)) {
    throw InvalidArgument("prime " + std::to_string(p) + " is not in R(G)");
  }
  const auto [alpha, beta] = prime_proportions(g, p);
  const Rational pr = Rational(from_u64(p));
  const Rational cut = 1 - Rational(c.asym_coeff) / pr;
  StepContext ctx{g, p, c, alpha, beta, edge_density(g), mu_edges(g), quality(g, c),
                  std::min(alpha, beta) <= cut};
  const long d = static_cast<long>(c.density_exp);

  std::array<std::optional<GcdGraph>, 4> split;
  std::array<SplitWeights, 4> sw;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto [k, l] = kCandidates[i];
    split[i] = vertex_split(g, p, k, l);
    sw[i] = split_weights(g, p, k, l);
  }
  const auto usable = [&](std::size_t i) { return split[i].has_value() && sw[i].delta_kl > 0; };

  if (ctx.part_a) {
    for (std::size_t i = 0; i < 2; ++i) {
      if (!usable(i)) continue;
      if (pow(sw[i].delta_kl, d + 1) >= pow(sw[i].alpha_k * sw[i].beta_l, d)) {
        return finish(ctx, *split[i], StepKind::kSymmetric, kCandidates[i].first,
                      kCandidates[i].second, 1, true);
      }
    }
    const Rational spread = (alpha * (1 - beta) + (1 - alpha) * beta) / 5;
    for (std::size_t i = 2; i < 4; ++i) {
      if (!usable(i) || sw[i].delta_kl < spread) continue;
      if (certified_gain(ctx, *split[i], 2, true)) {
        return finish(ctx, *split[i], StepKind::kAsymmetric, kCandidates[i].first,
                      kCandidates[i].second, 2, true);
      }
    }
    GcdGraph dropped = drop_symmetric_edges(g, p);
    if (certified_gain(ctx, dropped, 1, true)) {
      return finish(ctx, std::move(dropped), StepKind::kEdgeDrop, -1, -1, 1, true);
    }
    for (std::size_t i = 0; i < 4; ++i) {
      if (!usable(i)) continue;
      const bool asym = i >= 2;
      if (certified_gain(ctx, *split[i], asym ? 2 : 1, true)) {
        return finish(ctx, *split[i], asym ? StepKind::kAsymmetric : StepKind::kSymmetric,
                      kCandidates[i].first, kCandidates[i].second, asym ? 2 : 1, false);
      }
    }
    return finish(ctx, std::move(dropped), StepKind::kEdgeDrop, -1, -1, 1, false);
  }

  // Part (b): the four sufficient inequalities raised to the power d + 1.
  const Rational one_minus = 1 - 1 / pr;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!usable(i)) continue;
    const auto [k, l] = kCandidates[i];
    Rational rhs = pow(sw[i].alpha_k * sw[i].beta_l, d);
    if (k == 1 && l == 1) rhs *= one_minus * one_minus;
    if (k != l) rhs /= pr;
    const Rational lhs = pow(sw[i].delta_kl, d + 1);
    const int s = certified_sign(
        [&](unsigned prec) {
          return Enclosure::point(lhs, prec) * prime_factor_term(p, c, prec) -
                 Enclosure::point(rhs, prec);
        });
    if (s >= 0) return finish(ctx, *split[i], StepKind::kPartB, k, l, 1, true);
  }
  std::optional<std::size_t> best;
  QualityValue best_q;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!usable(i)) continue;
    if (certified_gain(ctx, *split[i], 1, false)) {
      return finish(ctx, *split[i], StepKind::kPartB, kCandidates[i].first,
                    kCandidates[i].second, 1, false);
    }
    QualityValue qi = quality(*split[i], c);
    if (!best || qi.compare(best_q) > 0) {
      best = i;
      best_q = std::move(qi);
    }
  }
  // p in R(G) guarantees an edge inside V_1 x W_1, so some split is usable.
  return finish(ctx, *split[*best], StepKind::kPartB, kCandidates[*best].first,
                kCandidates[*best].second, 1, false);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> build_Bt(std::span<const FactoredInt> s,
                                                             const Integer& Q, const Rational& N,
                                                             const Rational& t,
                                                             const ConstantsProfile& c) {
  for (const auto& q : s) {
    if (!q.is_squarefree()) {
      throw InvalidArgument("B_t needs square-free integers, got " + to_string(q.value()));
    }
  }
  if (N <= 0 || t <= 0) throw InvalidArgument("B_t needs N, t > 0");
  const Rational floor_gcd = Rational(Q) / (N * t);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      const FactoredInt g = gcd(s[i], s[j]);
      if (!(Rational(g.value()) > floor_gcd)) continue;
      if (correlation_prime_sum(s[i], s[j], t, CorrelationVariant::kGcdSquared) > c.L_threshold) {
        out.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
      }
    }
  }
  return out;
}

std::vector<std::size_t> good_edges(const GcdGraph& g, std::span<const std::uint64_t> R,
                                    const Rational& t, const ConstantsProfile& c) {
  const Rational floor_p = pow(t, static_cast<long>(c.good_prime_exp));
  std::vector<std::uint64_t> big;
  for (auto p : R) {
    if (Rational(from_u64(p)) > floor_p) big.push_back(p);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.E.size(); ++i) {
    const FactoredInt& v = g.edge_v(i);
    const FactoredInt& w = g.edge_w(i);
    Rational sum = 0;
    for (auto p : big) {
      if (v.divisible_by_prime(p) != w.divisible_by_prime(p)) {
        sum += make_rational(Integer(1), from_u64(p));
      }
    }
    if (sum <= c.good_L_budget) out.push_back(i);
  }
  return out;
}

GcdGraph random_toy_graph(std::uint64_t seed, const PrimeTable& table,
                          const ToyGraphParams& params) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 gen(seq);
  std::uniform_int_distribution<unsigned> size(params.min_vertices, params.max_vertices);
  std::bernoulli_distribution take(params.prime_probability);
  std::bernoulli_distribution link(params.edge_probability);
  const auto vertices = [&] {
    const unsigned n = size(gen);
    std::set<std::uint64_t> vals;
    for (unsigned attempt = 0; vals.size() < n && attempt < 20 * n; ++attempt) {
      std::uint64_t v = 1;
      for (auto p : params.primes) {
        if (take(gen)) v *= p;
      }
      vals.insert(v);
    }
    return std::vector<Integer>(vals.begin(), vals.end());
  };
  GraphSpec spec;
  std::vector<Integer> V = vertices(), W = vertices();
  for (const auto& v : V) {
    for (const auto& w : W) {
      if (link(gen)) spec.E.emplace_back(v, w);
    }
  }
  if (spec.E.empty()) {
    std::uniform_int_distribution<std::size_t> pv(0, V.size() - 1), pw(0, W.size() - 1);
    spec.E.emplace_back(V[pv(gen)], W[pw(gen)]);
  }
  spec.V = std::move(V);
  spec.W = std::move(W);
  return GcdGraph::build(spec, table);
}

}  // namespace diophant
