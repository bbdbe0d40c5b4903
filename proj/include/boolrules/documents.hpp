#pragma once

// Versioned JSON documents exchanged by the CLI, the service and tests.
// Every document carries a "schema" field; readers reject other versions.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "boolrules/dataset.hpp"
#include "boolrules/groebner.hpp"
#include "boolrules/ideal.hpp"
#include "boolrules/workflow.hpp"

namespace boolrules::docs {

using json = nlohmann::json;

inline constexpr const char *kToolVersion = "boolrules 1.0.0";

inline constexpr const char *kVarmapSchema = "boolrules.varmap/1";
inline constexpr const char *kPatternsSchema = "boolrules.patterns/1";
inline constexpr const char *kThresholdsSchema = "boolrules.thresholds/1";
inline constexpr const char *kDeviationsSchema = "boolrules.deviations/1";
inline constexpr const char *kBasisSchema = "boolrules.basis/1";
inline constexpr const char *kTraceSchema = "boolrules.trace/1";
inline constexpr const char *kReportSchema = "boolrules.report/1";

/// Throws InputError unless doc["schema"] == expected.
void require_schema(const json &doc, const char *expected);

json read_json_file(const std::string &path);
void write_json_file(const std::string &path, const json &doc);
/// Stable rendering used for every machine output (2-space indent, sorted keys).
std::string dump(const json &doc);

json to_json(const VariableTable &vars);
VariableTable variables_from_json(const json &doc);

json to_json(const DatasetSchema &schema);
DatasetSchema dataset_schema_from_json(const json &doc);

json to_json(const PatternTable &patterns);
PatternTable patterns_from_json(const json &doc);

json to_json(const Thresholds &cuts);
Thresholds thresholds_from_json(const json &doc, const VariableTable &vars);
json to_json(const std::vector<ThresholdDeviation> &deviations);

/// Basis export: order descriptor plus canonical polynomial strings.
json basis_to_json(const GroebnerBasis &basis, const VariableTable &vars);
GroebnerBasis basis_from_json(const json &doc, const VariableTable &vars);

/// Ideal snapshot: generators, basis and order in the basis document format.
json ideal_to_json(const Ideal &ideal, const VariableTable &vars);
Ideal ideal_from_json(const json &doc, const VariableTable &vars);

json trace_to_json(const DecisionTrace &trace, const VariableTable &vars, const MonomialOrder &order);
DecisionTrace trace_from_json(const json &doc, const VariableTable &vars);

json rule_to_json(const Rule &rule, const VariableTable &vars, const MonomialOrder &order);
Rule rule_from_json(const json &doc, const VariableTable &vars);

json report_to_json(const Report &report);
Report report_from_json(const json &doc);

/// Human-readable report with rule tables in factored form.
std::string render_markdown(const Report &report);

} // namespace boolrules::docs
