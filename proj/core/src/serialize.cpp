#include "diophant/serialize.hpp"

#include <algorithm>

namespace diophant::io {

namespace {

constexpr int kSchemaVersion = 1;

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgument(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

std::uint64_t u64_from_json(const Json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  if (j.is_string()) return to_u64(parse_integer(j.get<std::string>()));
  throw InvalidArgument("expected a non-negative integer, got " + j.dump());
}

// q(G) endpoints for the CSV summary.
std::string enclosure_lo(const Enclosure& e) { return e.lo().to_string(17, MPFR_RNDD); }
std::string enclosure_hi(const Enclosure& e) { return e.hi().to_string(17, MPFR_RNDU); }

const char* bound_name(cf::BoundCheck b) {
  switch (b) {
    case cf::BoundCheck::kHolds: return "holds";
    case cf::BoundCheck::kFails: return "fails";
    case cf::BoundCheck::kNotApplicable: break;
  }
  return "n/a";
}

}  // namespace

std::string schema_name(std::string_view kind) {
  return "diophant." + std::string(kind) + "/" + std::to_string(kSchemaVersion);
}

void expect_schema(const Json& j, std::string_view kind) {
  const Json& s = field(j, "schema");
  if (!s.is_string() || s.get<std::string>() != schema_name(kind)) {
    throw InvalidArgument("expected schema " + schema_name(kind) + ", got " + s.dump());
  }
}

Json rational_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(integer_from_json(j));
  throw InvalidArgument("expected a rational string, got " + j.dump());
}

Json integer_json(const Integer& n) {
  if (mpz_fits_slong_p(n.get_mpz_t())) return n.get_si();
  return to_string(n);
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_unsigned()) return from_u64(j.get<std::uint64_t>());
  if (j.is_number_integer()) return Integer(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) return parse_integer(j.get<std::string>());
  throw InvalidArgument("expected an integer, got " + j.dump());
}

Json enclosure_json(const Enclosure& e, int digits) {
  return Json{{"lo", e.lo().to_string(digits, MPFR_RNDD)},
              {"hi", e.hi().to_string(digits, MPFR_RNDU)}};
}

Json to_json(const FactoredInt& n) {
  Json factors = Json::array();
  for (const auto& pp : n.factors()) factors.push_back(Json::array({pp.prime, pp.exponent}));
  return Json{{"value", to_string(n.value())}, {"factors", factors}};
}

FactoredInt factored_from_json(const Json& j, const PrimeTable& table) {
  const FactoredInt f = factor(integer_from_json(field(j, "value")), table);
  if (j.contains("factors")) {
    std::vector<PrimePower> listed;
    for (const auto& e : j.at("factors")) {
      listed.push_back({u64_from_json(e.at(0)), static_cast<unsigned>(u64_from_json(e.at(1)))});
    }
    if (!std::ranges::equal(listed, f.factors())) {
      throw InvalidArgument("stored factors do not match " + to_string(f.value()));
    }
  }
  return f;
}

Json to_json(const IntervalUnion& u) {
  Json parts = Json::array();
  for (const auto& p : u.parts()) {
    parts.push_back(Json::array({to_string(p.lo.get_num()), to_string(p.lo.get_den()),
                                 to_string(p.hi.get_num()), to_string(p.hi.get_den())}));
  }
  return Json{{"schema", schema_name("intervals")}, {"parts", parts}};
}

IntervalUnion interval_union_from_json(const Json& j) {
  if (j.contains("schema")) expect_schema(j, "intervals");
  std::vector<RatInterval> raw;
  for (const auto& p : field(j, "parts")) {
    if (!p.is_array() || p.size() != 4) throw InvalidArgument("interval needs 4 entries");
    raw.push_back({make_rational(integer_from_json(p[0]), integer_from_json(p[1])),
                   make_rational(integer_from_json(p[2]), integer_from_json(p[3]))});
  }
  return IntervalUnion::normalize(std::move(raw));
}

Json to_json(const DeltaSequence& d) {
  Json values = Json::array();
  Json upper = Json::array();
  Json clipped = Json::array();
  for (const auto& [q, e] : d.entries()) {
    values.push_back(Json::array({q, to_string(e.value.get_num()), to_string(e.value.get_den())}));
    if (!e.exact()) {
      upper.push_back(Json::array({q, to_string(e.upper.get_num()), to_string(e.upper.get_den())}));
    }
    if (e.clipped) clipped.push_back(q);
  }
  Json j{{"schema", schema_name("delta")},
         {"qmax", d.qmax()},
         {"label", d.label()},
         {"values", values}};
  if (!upper.empty()) j["upper"] = upper;
  if (!clipped.empty()) j["clipped"] = clipped;
  return j;
}

DeltaSequence delta_from_json(const Json& j) {
  if (j.contains("schema")) expect_schema(j, "delta");
  DeltaSequence d(u64_from_json(field(j, "qmax")),
                  j.contains("label") ? j.at("label").get<std::string>() : std::string());
  std::map<std::uint64_t, Rational> upper;
  if (j.contains("upper")) {
    for (const auto& e : j.at("upper")) {
      upper[u64_from_json(e.at(0))] =
          make_rational(integer_from_json(e.at(1)), integer_from_json(e.at(2)));
    }
  }
  std::vector<std::uint64_t> clipped;
  if (j.contains("clipped")) {
    for (const auto& q : j.at("clipped")) clipped.push_back(u64_from_json(q));
  }
  for (const auto& e : field(j, "values")) {
    if (!e.is_array() || e.size() != 3) throw InvalidArgument("delta value needs [q, num, den]");
    const std::uint64_t q = u64_from_json(e[0]);
    const Rational v = make_rational(integer_from_json(e[1]), integer_from_json(e[2]));
    const auto it = upper.find(q);
    const bool clip = std::ranges::find(clipped, q) != clipped.end();
    if (it != upper.end() || clip) {
      d.set(q, v, it != upper.end() ? it->second : v, clip);
    } else {
      d.set(q, v);
    }
  }
  return d;
}

Json to_json(const WindowReport& w) {
  return Json{{"schema", schema_name("window")},
              {"Q", w.Q},
              {"R", w.R},
              {"sum_meas", rational_json(w.sum_meas)},
              {"pair_sum", rational_json(w.pair_sum)},
              {"cs_bound", rational_json(w.cs_bound)},
              {"union_meas", rational_json(w.union_meas)},
              {"second_moment_floor", rational_json(w.second_moment_floor)},
              {"floor_applies", w.floor_applies}};
}

WindowReport window_report_from_json(const Json& j) {
  expect_schema(j, "window");
  WindowReport w;
  w.Q = u64_from_json(field(j, "Q"));
  w.R = u64_from_json(field(j, "R"));
  w.sum_meas = rational_from_json(field(j, "sum_meas"));
  w.pair_sum = rational_from_json(field(j, "pair_sum"));
  w.cs_bound = rational_from_json(field(j, "cs_bound"));
  w.union_meas = rational_from_json(field(j, "union_meas"));
  w.second_moment_floor = rational_from_json(field(j, "second_moment_floor"));
  w.floor_applies = field(j, "floor_applies").get<bool>();
  if (!(w.cs_bound <= w.union_meas && w.union_meas <= w.sum_meas)) {
    throw InvalidArgument("window report violates cs_bound <= union_meas <= sum_meas");
  }
  return w;
}

Json to_json(const GraphSpec& g) {
  const auto ints = [](const std::vector<Integer>& xs) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(integer_json(x));
    return a;
  };
  Json edges = Json::array();
  for (const auto& [v, w] : g.E) edges.push_back(Json::array({integer_json(v), integer_json(w)}));
  return Json{{"schema", schema_name("gcd-graph")},
              {"V", ints(g.V)},
              {"W", ints(g.W)},
              {"E", edges},
              {"P", ints(g.P)},
              {"a", integer_json(g.a)},
              {"b", integer_json(g.b)}};
}

Json to_json(const GcdGraph& g) { return to_json(g.spec()); }

GraphSpec graph_spec_from_json(const Json& j) {
  if (j.contains("schema")) expect_schema(j, "gcd-graph");
  const auto ints = [&](const char* key) {
    std::vector<Integer> out;
    const Json& a = field(j, key);
    if (!a.is_array()) throw InvalidArgument(std::string("\"") + key + "\" must be an array");
    for (const auto& x : a) out.push_back(integer_from_json(x));
    return out;
  };
  GraphSpec g;
  g.V = ints("V");
  g.W = ints("W");
  g.P = j.contains("P") ? ints("P") : std::vector<Integer>{};
  for (const auto& e : field(j, "E")) {
    if (!e.is_array() || e.size() != 2) throw InvalidArgument("edge needs [v, w]");
    g.E.emplace_back(integer_from_json(e[0]), integer_from_json(e[1]));
  }
  g.a = j.contains("a") ? integer_from_json(j.at("a")) : Integer(1);
  g.b = j.contains("b") ? integer_from_json(j.at("b")) : Integer(1);
  return g;
}

Json to_json(const QualityValue& q, unsigned prec) {
  Json primes = Json::array();
  for (auto p : q.primes()) primes.push_back(p);
  return Json{{"rational_part", rational_json(q.rational_part())},
              {"primes", primes},
              {"value", enclosure_json(q.value(prec))}};
}

Json to_json(const StepOutcome& s) {
  Json j{{"kind", to_string(s.kind)}, {"prime", s.prime}, {"part_a", s.part_a}};
  if (s.k >= 0) {
    j["k"] = s.k;
    j["l"] = s.l;
  }
  j["by_inequality"] = s.by_inequality;
  j["alpha"] = rational_json(s.alpha);
  j["beta"] = rational_json(s.beta);
  j["delta_before"] = rational_json(s.delta_before);
  j["delta_after"] = rational_json(s.delta_after);
  j["mu_before"] = rational_json(s.mu_before);
  j["mu_after"] = rational_json(s.mu_after);
  j["gain_factor"] = s.gain_factor;
  j["quality_ok"] = Json::array({s.quality_ok[0], s.quality_ok[1]});
  j["q_before"] = to_json(s.q_before);
  j["q_after"] = to_json(s.q_after);
  j["graph"] = to_json(s.graph);
  return j;
}

Json to_json(const CompressionTrace& t, const GcdGraph& terminal) {
  Json steps = Json::array();
  for (const auto& s : t.steps) steps.push_back(to_json(s));
  Json D = Json::array();
  for (auto p : t.D) D.push_back(p);
  Json j{{"schema", schema_name("compression-trace")},
         {"branch", to_string(t.branch)},
         {"stage1_steps", t.stage1_steps},
         {"D", D},
         {"emptied", t.emptied},
         {"q_initial", to_json(t.q_initial)},
         {"q_stage1", to_json(t.q_stage1)}};
  if (t.good_edge_fraction) j["good_edge_fraction"] = rational_json(*t.good_edge_fraction);
  j["steps"] = steps;
  j["terminal"] = to_json(terminal);
  return j;
}

std::vector<GcdGraph> trace_graphs_from_json(const Json& j, const PrimeTable& table) {
  expect_schema(j, "compression-trace");
  std::vector<GcdGraph> out;
  for (const auto& s : field(j, "steps")) {
    out.push_back(GcdGraph::build(graph_spec_from_json(field(s, "graph")), table));
  }
  out.push_back(GcdGraph::build(graph_spec_from_json(field(j, "terminal")), table));
  return out;
}

void write_trace_csv(std::ostream& out, const CompressionTrace& t) {
  out << "step,prime,case,alpha,beta,delta,q_lo,q_hi\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& s = t.steps[i];
    const char* phase = i < t.stage1_steps ? "stage1" : to_string(t.branch);
    const Enclosure q = s.q_after.value();
    out << i + 1 << ',' << s.prime << ',' << phase << ',' << to_string(s.alpha) << ','
        << to_string(s.beta) << ',' << to_string(s.delta_after) << ',' << enclosure_lo(q) << ','
        << enclosure_hi(q) << '\n';
  }
}

Json to_json(const Counterexample& c) {
  Json levels = Json::array();
  for (const auto& l : c.levels) {
    levels.push_back(Json{{"j", l.j},
                          {"prime", l.prime},
                          {"primorial", to_string(l.primorial)},
                          {"members", l.members.size()},
                          {"rational_part", rational_json(l.rational_part)},
                          {"euler_product", rational_json(l.euler_product)},
                          {"identity_holds", l.rational_part == l.euler_product},
                          {"weight", enclosure_json(l.weight)}});
  }
  Json saturated = Json::array();
  for (const auto& [q, e] : c.delta.entries()) {
    if (c.delta.saturated(q)) saturated.push_back(q);
  }
  return Json{{"schema", schema_name("counterexample")},
              {"levels", levels},
              {"saturated", saturated},
              {"delta", to_json(c.delta)}};
}

void write_counterexample_csv(std::ostream& out, const Counterexample& c) {
  out << "j,prime,primorial,members,rational_part,euler_product,identity_holds,weight_lo,weight_hi\n";
  for (const auto& l : c.levels) {
    out << l.j << ',' << l.prime << ',' << to_string(l.primorial) << ',' << l.members.size() << ','
        << to_string(l.rational_part) << ',' << to_string(l.euler_product) << ','
        << (l.rational_part == l.euler_product ? "true" : "false") << ','
        << enclosure_lo(l.weight) << ',' << enclosure_hi(l.weight) << '\n';
  }
}

Json to_json(const MonteCarloResult& m) {
  Json hist = Json::array();
  for (const auto& [count, n] : m.histogram) hist.push_back(Json::array({count, n}));
  return Json{{"schema", schema_name("montecarlo")},
              {"samples", m.samples},
              {"mean", rational_json(m.mean)},
              {"variance", rational_json(m.variance)},
              {"expected", rational_json(m.expected)},
              {"stddev", m.stddev},
              {"stderr_mean", m.stderr_mean},
              {"within_3_sigma", m.within_sigmas(3)},
              {"histogram", hist}};
}

Json measure_table_json(const std::vector<MeasureRow>& rows, const DeltaSequence& d,
                        bool reduced) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back(Json{{"q", r.q},
                       {"delta", rational_json(r.delta.value)},
                       {"meas", rational_json(reduced ? r.reduced_meas : r.meas)}});
  }
  return Json{{"schema", schema_name("measures")},
              {"label", d.label()},
              {"reduced", reduced},
              {"rows", out}};
}

void write_measure_csv(std::ostream& out, const std::vector<MeasureRow>& rows, bool reduced) {
  out << "q,delta,meas\n";
  for (const auto& r : rows) {
    out << r.q << ',' << to_string(r.delta.value) << ','
        << to_string(reduced ? r.reduced_meas : r.meas) << '\n';
  }
}

Json to_json(const PairData& p, std::uint64_t q, std::uint64_t r) {
  return Json{{"q", q},
              {"r", r},
              {"exact_meas", rational_json(p.exact_meas)},
              {"M", rational_json(p.M)},
              {"prime_sum", rational_json(p.prime_sum)},
              {"pv_rational", rational_json(p.pv_rational)},
              {"pv_term", enclosure_json(p.pv_term)}};
}

Json convergent_table_json(const cf::Value& x, const std::vector<cf::ConvergentRow>& rows,
                           bool terminated) {
  Json quotients = Json::array();
  Json conv = Json::array();
  for (const auto& row : rows) {
    const auto& c = row.convergent;
    quotients.push_back(integer_json(c.quotient));
    conv.push_back(Json{{"j", c.j},
                        {"quotient", integer_json(c.quotient)},
                        {"numerator", integer_json(c.numerator)},
                        {"denominator", integer_json(c.denominator)},
                        {"error", enclosure_json(row.error)},
                        {"bounds", bound_name(row.bounds)}});
  }
  return Json{{"schema", schema_name("convergents")},
              {"value", cf::describe(x)},
              {"quotients", quotients},
              {"terminated", terminated},
              {"convergents", conv}};
}

void write_convergent_csv(std::ostream& out, const std::vector<cf::ConvergentRow>& rows) {
  out << "j,quotient,numerator,denominator,error_lo,error_hi,bounds\n";
  for (const auto& row : rows) {
    const auto& c = row.convergent;
    out << c.j << ',' << to_string(c.quotient) << ',' << to_string(c.numerator) << ','
        << to_string(c.denominator) << ',' << enclosure_lo(row.error) << ','
        << enclosure_hi(row.error) << ',' << bound_name(row.bounds) << '\n';
  }
}

Json to_json(const SpecialCaseReport& r) {
  Json S = Json::array();
  for (auto q : r.S) S.push_back(q);
  Json ladder = Json::array();
  for (const auto& row : r.ladder) {
    Json jr{{"t", rational_json(row.t)},
            {"pairs", row.pairs},
            {"mu_Bt", rational_json(row.mu_Bt)},
            {"ratio", rational_json(row.ratio)}};
    if (row.trace && row.terminal) jr["compression"] = to_json(*row.trace, *row.terminal);
    ladder.push_back(std::move(jr));
  }
  Json window{{"sup_sum", enclosure_json(r.window.sup_sum)},
              {"checked_up_to", r.window.checked_up_to}};
  window["j0"] = r.window.j0 ? Json(*r.window.j0) : Json(nullptr);
  Json j{{"schema", schema_name("special-case")},
         {"Q", r.Q},
         {"N", rational_json(r.N)},
         {"S", S},
         {"weight", rational_json(r.weight)},
         {"bilinear", enclosure_json(r.bilinear)},
         {"bilinear_ratio", enclosure_json(r.bilinear_ratio)},
         {"ladder", ladder},
         {"mertens_window", window}};
  if (r.link) j["link"] = to_json(*r.link);
  return j;
}

Json error_json(ErrorKind kind, const std::string& message, int exit_code) {
  return Json{{"schema", schema_name("error")},
              {"kind", to_string(kind)},
              {"message", message},
              {"exit_code", exit_code}};
}

}  // namespace diophant::io
