#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "diophant/approx_sets.hpp"
#include "diophant/contfrac.hpp"
#include "diophant/enclosure.hpp"
#include "diophant/errors.hpp"
#include "diophant/gcd_graph.hpp"
#include "diophant/intervals.hpp"
#include "diophant/numtheory.hpp"
#include "diophant/special_case.hpp"

// JSON and CSV forms of the library's artifacts. Every top-level document
// carries a "schema" field of the form "diophant.<kind>/<version>".
// Integers that may exceed 64 bits are written as decimal strings, exact
// rationals as "num/den" strings, enclosures as {"lo", "hi"} decimals
// rounded outward.
namespace diophant::io {

using Json = nlohmann::ordered_json;

std::string schema_name(std::string_view kind);
/// Throws InvalidArgument unless j["schema"] names `kind` at a version this
/// build understands.
void expect_schema(const Json& j, std::string_view kind);

Json rational_json(const Rational& q);
Rational rational_from_json(const Json& j);
/// Integers: JSON numbers and decimal strings are both accepted.
Json integer_json(const Integer& n);
Integer integer_from_json(const Json& j);
Json enclosure_json(const Enclosure& e, int digits = 25);

Json to_json(const FactoredInt& n);
/// Re-factors the value and checks it against the stored factors.
FactoredInt factored_from_json(const Json& j, const PrimeTable& table);

Json to_json(const IntervalUnion& u);
IntervalUnion interval_union_from_json(const Json& j);

Json to_json(const DeltaSequence& d);
DeltaSequence delta_from_json(const Json& j);

Json to_json(const WindowReport& w);
WindowReport window_report_from_json(const Json& j);

Json to_json(const GraphSpec& g);
Json to_json(const GcdGraph& g);
GraphSpec graph_spec_from_json(const Json& j);

Json to_json(const QualityValue& q, unsigned prec = kDefaultPrecision);
Json to_json(const StepOutcome& s);
Json to_json(const CompressionTrace& t, const GcdGraph& terminal);
/// Rebuilds (and thereby validates) every graph recorded in a trace
/// document: the graph after each step, then the terminal graph.
std::vector<GcdGraph> trace_graphs_from_json(const Json& j, const PrimeTable& table);
void write_trace_csv(std::ostream& out, const CompressionTrace& t);

Json to_json(const Counterexample& c);
void write_counterexample_csv(std::ostream& out, const Counterexample& c);

Json to_json(const MonteCarloResult& m);
Json measure_table_json(const std::vector<MeasureRow>& rows, const DeltaSequence& d,
                        bool reduced);
void write_measure_csv(std::ostream& out, const std::vector<MeasureRow>& rows, bool reduced);

Json to_json(const PairData& p, std::uint64_t q, std::uint64_t r);

Json convergent_table_json(const cf::Value& x, const std::vector<cf::ConvergentRow>& rows,
                           bool terminated);
void write_convergent_csv(std::ostream& out, const std::vector<cf::ConvergentRow>& rows);

Json to_json(const SpecialCaseReport& r);

/// {"schema", "kind", "message", "exit_code"}.
Json error_json(ErrorKind kind, const std::string& message, int exit_code);

}  // namespace diophant::io
