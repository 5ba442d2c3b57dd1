#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "diophant/approx_sets.hpp"
#include "diophant/contfrac.hpp"
#include "diophant/errors.hpp"
#include "diophant/gcd_graph.hpp"
#include "diophant/int128.hpp"
#include "diophant/serialize.hpp"
#include "diophant/special_case.hpp"

namespace diophant::cli {

namespace {

using io::Json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  bool json_errors = false;
  unsigned threads = 1;
  std::string format = "auto";
  std::string output;
};

constexpr std::uint64_t kMaxSieve = 50'000'000;

std::uint64_t isqrt_u64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// Sieve large enough to factor every n <= nmax quickly.
PrimeTable table_for(std::uint64_t nmax) {
  const std::uint64_t limit =
      std::max<std::uint64_t>({1000, std::min<std::uint64_t>(nmax, 2'000'000), isqrt_u64(nmax) + 1});
  if (limit > kMaxSieve) {
    throw ResourceLimit("factoring up to " + std::to_string(nmax) + " needs a sieve beyond " +
                        std::to_string(kMaxSieve));
  }
  return sieve(limit);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

Rational parse_rational_flag(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const Error&) {
    throw UsageError(name + ": not a rational: " + text);
  }
}

std::vector<Rational> parse_rational_list(const std::string& name, const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational_flag(name, item));
  if (out.empty()) throw UsageError(name + ": empty list");
  return out;
}

std::uint64_t parse_u64(const std::string& name, std::string_view text) {
  try {
    const Integer n = parse_integer(text);
    if (n < 0 || mpz_sizeinbase(n.get_mpz_t(), 2) > 64) throw UsageError("");
    return to_u64(n);
  } catch (const std::exception&) {
    throw UsageError(name + ": not a non-negative integer: " + std::string(text));
  }
}

/// khinchin:c, uniform:lo..hi:N, counterexample:J or file:path.
DeltaSequence parse_delta(const std::string& spec, std::optional<std::uint64_t> qmax) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("--delta: expected kind:args, got " + spec);
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "khinchin") {
    return delta_khinchin(parse_rational_flag("--delta", rest), qmax.value_or(1000));
  }
  if (kind == "uniform") {
    const auto dots = rest.find("..");
    const auto sep = rest.rfind(':');
    if (dots == std::string::npos || sep == std::string::npos || sep < dots) {
      throw UsageError("--delta: expected uniform:lo..hi:N, got " + spec);
    }
    const std::uint64_t lo = parse_u64("--delta", rest.substr(0, dots));
    const std::uint64_t hi = parse_u64("--delta", rest.substr(dots + 2, sep - dots - 2));
    if (lo < 1 || hi < lo) throw UsageError("--delta: need 1 <= lo <= hi in " + spec);
    std::vector<std::uint64_t> support;
    for (std::uint64_t q = lo; q <= hi; ++q) support.push_back(q);
    DeltaSequence d = delta_uniform_support(support, parse_rational_flag("--delta", rest.substr(sep + 1)));
    d.set_label(spec);
    return d;
  }
  if (kind == "counterexample") {
    const std::uint64_t J = parse_u64("--delta", rest);
    return delta_counterexample(J, sieve(1000)).delta;
  }
  if (kind == "file") {
    DeltaSequence d = io::delta_from_json(read_json(rest));
    if (d.label().empty()) d.set_label(spec);
    return d;
  }
  throw UsageError("--delta: unknown kind '" + kind + "'");
}

ConstantsProfile load_profile(const std::string& spec) {
  if (spec == "paper") return ConstantsProfile::paper();
  if (spec == "toy") return ConstantsProfile::toy();
  return parse_profile(read_file(spec));
}

std::uint64_t largest_value(const GraphSpec& s) {
  Integer m = 1;
  for (const auto* list : {&s.V, &s.W}) {
    for (const auto& x : *list) if (abs(x) > m) m = abs(x);
  }
  return mpz_sizeinbase(m.get_mpz_t(), 2) > 64 ? ~std::uint64_t{0} : to_u64(m);
}

struct LoadedGraph {
  PrimeTable table;
  GcdGraph graph;
};

LoadedGraph load_graph(const std::string& path) {
  const GraphSpec spec = io::graph_spec_from_json(read_json(path));
  PrimeTable table = table_for(largest_value(spec));
  GcdGraph g = GcdGraph::build(spec, table);
  return {std::move(table), std::move(g)};
}

class Emitter {
 public:
  Emitter(const Globals& g, std::ostream& out) : globals_(g), out_(out) {}

  bool csv(bool csv_by_default = false) const {
    if (globals_.format == "auto") return csv_by_default;
    return globals_.format == "csv";
  }

  std::ostream& stream() {
    if (globals_.output.empty()) return out_;
    if (!file_) {
      file_.emplace(globals_.output, std::ios::binary);
      if (!*file_) throw UsageError("cannot write " + globals_.output);
    }
    return *file_;
  }

  void json(const Json& j) { stream() << j.dump(2) << '\n'; }

 private:
  const Globals& globals_;
  std::ostream& out_;
  std::optional<std::ofstream> file_;
};

int exit_code_for(ErrorKind kind) {
  return kind == ErrorKind::kInvariant ? kInvariant : kPrecondition;
}

void report(const Globals& g, std::ostream& err, ErrorKind kind, const std::string& msg,
            int code) {
  if (g.json_errors) {
    err << io::error_json(kind, msg, code).dump() << '\n';
  } else {
    err << "error: " << msg << '\n';
  }
}

void report_usage(const Globals& g, std::ostream& err, const std::string& msg) {
  if (g.json_errors) {
    err << Json{{"schema", io::schema_name("error")},
                {"kind", "UsageError"},
                {"message", msg},
                {"exit_code", static_cast<int>(kUsage)}}
               .dump()
        << '\n';
  } else {
    err << "usage error: " << msg << '\n';
  }
}

struct CfArgs {
  std::string value;
  std::size_t terms = 10;
  unsigned precision = kDefaultPrecision;
};

int run_cf(const CfArgs& a, Emitter& em) {
  cf::Value x;
  try {
    x = cf::parse_value(a.value);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("--value: ") + e.what());
  }
  if (a.terms == 0) throw UsageError("--terms must be positive");
  std::vector<cf::ConvergentRow> rows;
  bool terminated = false;
  rows = cf::convergent_table(x, a.terms, a.precision);
  terminated = cf::expand(x, a.terms, a.precision).terminated;
  if (em.csv()) {
    io::write_convergent_csv(em.stream(), rows);
  } else {
    em.json(io::convergent_table_json(x, rows, terminated));
  }
  return kOk;
}

struct DsArgs {
  std::string delta;
  std::optional<std::uint64_t> qmax;
  bool reduced = false;
  std::optional<std::uint64_t> from;
  std::optional<std::uint64_t> to;
  std::size_t levels = 6;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
};

DeltaSequence ds_delta(const DsArgs& a) {
  if (a.delta.empty()) throw UsageError("--delta is required");
  DeltaSequence d = parse_delta(a.delta, a.qmax);
  if (a.from || a.to) {
    d = d.restricted(a.from.value_or(1), a.to.value_or(d.qmax()));
  }
  return d;
}

int run_ds_measure(const DsArgs& a, Emitter& em) {
  const DeltaSequence d = ds_delta(a);
  const PrimeTable table = table_for(d.qmax());
  const auto rows = measure_table(d, table);
  if (em.csv(true)) {
    io::write_measure_csv(em.stream(), rows, a.reduced);
  } else {
    em.json(io::measure_table_json(rows, d, a.reduced));
  }
  return kOk;
}

int run_ds_pairs(const DsArgs& a, Emitter& em) {
  const DeltaSequence d = ds_delta(a);
  const PrimeTable table = table_for(d.qmax());
  const auto support = d.support();
  Json pairs = Json::array();
  std::optional<std::pair<std::uint64_t, std::uint64_t>> argmax;
  Enclosure best = Enclosure::point(0L);
  std::ostringstream csv;
  csv << "q,r,exact_meas,M,prime_sum,pv_lo,pv_hi\n";
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 2) continue;
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      const std::uint64_t q = support[i], r = support[j];
      const PairData p = pair_data(q, r, d, table);
      pairs.push_back(io::to_json(p, q, r));
      csv << q << ',' << r << ',' << to_string(p.exact_meas) << ',' << to_string(p.M) << ','
          << to_string(p.prime_sum) << ',' << p.pv_term.lo().to_string(17, MPFR_RNDD) << ','
          << p.pv_term.hi().to_string(17, MPFR_RNDU) << '\n';
      if (p.exact_meas == 0) continue;
      const Enclosure ratio = Enclosure::point(p.exact_meas) / p.pv_term;
      if (!argmax || mpfr_cmp(ratio.hi().get(), best.hi().get()) > 0) {
        best = ratio;
        argmax = {q, r};
      }
    }
  }
  if (em.csv()) {
    em.stream() << csv.str();
    return kOk;
  }
  Json j{{"schema", io::schema_name("pairs")}, {"label", d.label()}, {"pairs", pairs}};
  if (argmax) {
    j["max_ratio"] = Json{{"q", argmax->first}, {"r", argmax->second}, {"ratio", io::enclosure_json(best)}};
  }
  em.json(j);
  return kOk;
}

int run_ds_window(const DsArgs& a, const Globals& g, Emitter& em) {
  if (!a.from) throw UsageError("--from is required");
  const DeltaSequence d = ds_delta(a);
  const PrimeTable table = table_for(d.qmax());
  std::uint64_t R = 0;
  if (a.to) {
    R = *a.to;
  } else {
    const auto found = find_window(d, *a.from, table);
    if (!found) {
      throw PreconditionError("sum of 2 phi(q) Delta_q from Q = " + std::to_string(*a.from) +
                              " stays below 1 up to qmax = " + std::to_string(d.qmax()));
    }
    R = *found;
  }
  em.json(io::to_json(window_report(d, *a.from, R, table, g.threads)));
  return kOk;
}

int run_ds_counterexample(const DsArgs& a, Emitter& em) {
  const Counterexample c = delta_counterexample(a.levels, sieve(1000));
  if (em.csv()) {
    io::write_counterexample_csv(em.stream(), c);
  } else {
    em.json(io::to_json(c));
  }
  return kOk;
}

int run_ds_montecarlo(const DsArgs& a, const Globals& g, Emitter& em) {
  const DeltaSequence d = ds_delta(a);
  const PrimeTable table = table_for(d.qmax());
  const MonteCarloResult m = monte_carlo_counts(d, a.reduced, a.samples, a.seed, table, g.threads);
  Json j = io::to_json(m);
  j["seed"] = a.seed;
  j["label"] = d.label();
  j["reduced"] = a.reduced;
  em.json(j);
  return kOk;
}

int run_ds_catlin(const DsArgs& a, Emitter& em) {
  em.json(io::to_json(catlin_transform(ds_delta(a))));
  return kOk;
}

struct GcdArgs {
  std::string graph;
  std::string constants = "paper";
  std::string t = "2";
  std::optional<std::uint64_t> prime;
  std::uint64_t Q = 0;
  std::string N;
  std::string S;
  std::string ladder = "2,4,8";
  bool link = false;
};

Json validation_json(const std::vector<Violation>& vs) {
  Json list = Json::array();
  for (const auto& v : vs) list.push_back(Json{{"rule", v.rule}, {"witness", v.witness}});
  return Json{{"schema", io::schema_name("validation")}, {"valid", vs.empty()}, {"violations", list}};
}

int run_gcd_validate(const GcdArgs& a, const Globals& g, Emitter& em, std::ostream& err) {
  if (a.graph.empty()) throw UsageError("--graph is required");
  const GraphSpec spec = io::graph_spec_from_json(read_json(a.graph));
  const PrimeTable table = table_for(largest_value(spec));
  const auto vs = validate(spec, table);
  em.json(validation_json(vs));
  if (vs.empty()) return kOk;
  report(g, err, ErrorKind::kInvalidArgument,
         std::to_string(vs.size()) + " violation(s) in " + a.graph, kPrecondition);
  return kPrecondition;
}

int run_gcd_quality(const GcdArgs& a, Emitter& em) {
  if (a.graph.empty()) throw UsageError("--graph is required");
  const ConstantsProfile c = load_profile(a.constants);
  const LoadedGraph lg = load_graph(a.graph);
  Json R = Json::array();
  for (auto p : remaining_primes(lg.graph, c)) R.push_back(p);
  em.json(Json{{"schema", io::schema_name("quality")},
               {"profile", c.label},
               {"mu_E", io::rational_json(mu_edges(lg.graph))},
               {"delta", io::rational_json(edge_density(lg.graph))},
               {"quality", io::to_json(quality(lg.graph, c))},
               {"remaining_primes", R}});
  return kOk;
}

int run_gcd_step(const GcdArgs& a, Emitter& em) {
  if (a.graph.empty()) throw UsageError("--graph is required");
  const ConstantsProfile c = load_profile(a.constants);
  const LoadedGraph lg = load_graph(a.graph);
  std::uint64_t p = 0;
  if (a.prime) {
    p = *a.prime;
  } else {
    const auto R = remaining_primes(lg.graph, c);
    if (R.empty()) throw PreconditionError("R(G) is empty; the graph is terminal");
    p = R.front();
  }
  Json j = io::to_json(quality_increment_step(lg.graph, p, c));
  j["schema"] = io::schema_name("step");
  em.json(j);
  return kOk;
}

int run_gcd_compress(const GcdArgs& a, Emitter& em, std::ostream& err) {
  if (a.graph.empty()) throw UsageError("--graph is required");
  const ConstantsProfile c = load_profile(a.constants);
  const LoadedGraph lg = load_graph(a.graph);
  const CompressionResult r = compress(lg.graph, parse_rational_flag("--t", a.t), c);
  for (std::size_t i = 0; i < r.trace.steps.size(); ++i) {
    const auto& s = r.trace.steps[i];
    if (s.part_a && !(s.quality_ok[0] && s.quality_ok[1])) {
      err << "warning: step " << i + 1 << " at p = " << s.prime
          << " did not certify the quality increment\n";
    }
  }
  if (em.csv()) {
    io::write_trace_csv(em.stream(), r.trace);
  } else {
    em.json(io::to_json(r.trace, r.terminal));
  }
  return kOk;
}

int run_gcd_special_case(const GcdArgs& a, const Globals& g, Emitter& em) {
  if (a.Q == 0) throw UsageError("--Q is required");
  if (a.N.empty()) throw UsageError("--N is required");
  const Rational N = parse_rational_flag("--N", a.N);
  const ConstantsProfile c = load_profile(a.constants);
  const PrimeTable table = table_for(std::max<std::uint64_t>(2 * a.Q, 1'000'000));
  std::vector<std::uint64_t> S;
  if (a.S.empty()) {
    S = trimmed_squarefree_set(a.Q, N, table);
  } else {
    std::stringstream ss(a.S);
    std::string item;
    while (std::getline(ss, item, ',')) S.push_back(parse_u64("--S", item));
  }
  const auto ladder = parse_rational_list("--ladder", a.ladder);
  em.json(io::to_json(special_case_harness(a.Q, N, S, ladder, c, a.link, table, g.threads)));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Globals g;
  g.json_errors = std::ranges::find(args, "--json-errors") != args.end();

  CLI::App app{"Exact and certified experiments in metric Diophantine approximation", "diophant"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_flag("--json-errors", g.json_errors, "Write errors as JSON on stderr");
  app.add_option("--threads", g.threads, "Worker threads for parallel kernels")
      ->check(CLI::Range(1u, 256u));
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"auto", "json", "csv"}));
  app.add_option("--output,-o", g.output, "Write output to this file instead of stdout");

  CfArgs cfa;
  auto* cf_cmd = app.add_subcommand("cf", "Continued fraction expansion and convergent table");
  cf_cmd->add_option("--value", cfa.value, "p/q, sqrt:d, surd:p,d,r, golden, e or pi")->required();
  cf_cmd->add_option("--terms", cfa.terms, "Number of partial quotients");
  cf_cmd->add_option("--precision", cfa.precision, "Working precision in bits for e and pi")
      ->check(CLI::Range(64u, 1u << 20));

  DsArgs dsa;
  auto* ds_cmd = app.add_subcommand("ds", "Approximation sets for a Delta sequence");
  ds_cmd->require_subcommand(1);
  const auto add_delta = [&](CLI::App* sub) {
    sub->add_option("--delta", dsa.delta,
                    "khinchin:c, uniform:lo..hi:N, counterexample:J or file:path");
    sub->add_option("--qmax", dsa.qmax, "Largest q for khinchin sequences");
  };
  const auto add_range = [&](CLI::App* sub) {
    sub->add_option("--from", dsa.from, "Smallest q");
    sub->add_option("--to", dsa.to, "Largest q");
  };
  auto* measure_cmd = ds_cmd->add_subcommand("measure", "Measure table of A_q or A_q*");
  add_delta(measure_cmd);
  add_range(measure_cmd);
  measure_cmd->add_flag("--reduced", dsa.reduced, "Use A_q* (reduced fractions)");
  auto* pairs_cmd = ds_cmd->add_subcommand("pairs", "Pair correlations against their bound");
  add_delta(pairs_cmd);
  add_range(pairs_cmd);
  auto* window_cmd = ds_cmd->add_subcommand("window", "Second moment report on a window");
  add_delta(window_cmd);
  add_range(window_cmd);
  auto* counter_cmd = ds_cmd->add_subcommand("counterexample", "Primorial counterexample levels");
  counter_cmd->add_option("--levels", dsa.levels, "Largest level J")->check(CLI::Range(2, 15));
  auto* mc_cmd = ds_cmd->add_subcommand("montecarlo", "Count the sets hit by random points");
  add_delta(mc_cmd);
  add_range(mc_cmd);
  mc_cmd->add_flag("--reduced", dsa.reduced, "Use A_q* (reduced fractions)");
  mc_cmd->add_option("--samples", dsa.samples, "Number of sample points")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100'000'000}));
  mc_cmd->add_option("--seed", dsa.seed, "Random seed");
  auto* catlin_cmd = ds_cmd->add_subcommand("catlin", "Catlin transform of the sequence");
  add_delta(catlin_cmd);
  add_range(catlin_cmd);

  GcdArgs ga;
  auto* gcd_cmd = app.add_subcommand("gcd", "Square-free GCD graphs and compression");
  gcd_cmd->require_subcommand(1);
  const auto add_graph = [&](CLI::App* sub, bool constants) {
    sub->add_option("--graph", ga.graph, "Graph JSON file");
    if (constants) {
      sub->add_option("--constants", ga.constants, "Profile file, or 'paper' / 'toy'");
    }
  };
  auto* validate_cmd = gcd_cmd->add_subcommand("validate", "Check the defining conditions");
  add_graph(validate_cmd, false);
  auto* quality_cmd = gcd_cmd->add_subcommand("quality", "Quality q(G) enclosure");
  add_graph(quality_cmd, true);
  auto* step_cmd = gcd_cmd->add_subcommand("step", "One quality increment step");
  add_graph(step_cmd, true);
  step_cmd->add_option("--prime", ga.prime, "Prime of R(G) (default: smallest)");
  auto* compress_cmd = gcd_cmd->add_subcommand("compress", "Run the compression to a terminal graph");
  add_graph(compress_cmd, true);
  compress_cmd->add_option("--t", ga.t, "Parameter t > 0 (rational)");
  auto* special_cmd = gcd_cmd->add_subcommand("special-case", "Square-free special case report");
  special_cmd->add_option("--Q", ga.Q, "Scale Q")->required();
  special_cmd->add_option("--N", ga.N, "Weight target N (rational)")->required();
  special_cmd->add_option("--S", ga.S, "Comma-separated support (default: trimmed square-free set)");
  special_cmd->add_option("--ladder", ga.ladder, "Comma-separated values of t");
  special_cmd->add_option("--constants", ga.constants, "Profile file, or 'paper' / 'toy'");
  special_cmd->add_flag("--link", ga.link, "Also run the second moment chain for 1/(qN)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_usage(g, err, e.what());
    return kUsage;
  }

  Emitter em(g, out);
  try {
    if (cf_cmd->parsed()) return run_cf(cfa, em);
    if (measure_cmd->parsed()) return run_ds_measure(dsa, em);
    if (pairs_cmd->parsed()) return run_ds_pairs(dsa, em);
    if (window_cmd->parsed()) return run_ds_window(dsa, g, em);
    if (counter_cmd->parsed()) return run_ds_counterexample(dsa, em);
    if (mc_cmd->parsed()) return run_ds_montecarlo(dsa, g, em);
    if (catlin_cmd->parsed()) return run_ds_catlin(dsa, em);
    if (validate_cmd->parsed()) return run_gcd_validate(ga, g, em, err);
    if (quality_cmd->parsed()) return run_gcd_quality(ga, em);
    if (step_cmd->parsed()) return run_gcd_step(ga, em);
    if (compress_cmd->parsed()) return run_gcd_compress(ga, em, err);
    if (special_cmd->parsed()) return run_gcd_special_case(ga, g, em);
  } catch (const UsageError& e) {
    report_usage(g, err, e.what());
    return kUsage;
  } catch (const SaturationError& e) {
    report(g, err, e.kind(),
           e.q() ? std::string(e.what()) + " (q = " + std::to_string(e.q()) + ")" : e.what(),
           kPrecondition);
    return kPrecondition;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    report(g, err, e.kind(), e.what(), code);
    return code;
  } catch (const std::bad_alloc&) {
    report(g, err, ErrorKind::kResourceLimit, "out of memory", kPrecondition);
    return kPrecondition;
  }
  report_usage(g, err, "no command given");
  return kUsage;
}

}  // namespace diophant::cli
