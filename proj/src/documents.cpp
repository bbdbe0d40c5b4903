#include "boolrules/documents.hpp"

#include <fstream>
#include <sstream>

#include "boolrules/error.hpp"

namespace boolrules::docs {

void require_schema(const json &doc, const char *expected) {
  if (!doc.is_object() || !doc.contains("schema"))
    throw InputError(std::string("document has no schema field, expected ") + expected);
  const std::string got = doc.at("schema").get<std::string>();
  if (got != expected)
    throw InputError("unsupported document schema '" + got + "', expected '" + expected + "'");
}

json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string dump(const json &doc) { return doc.dump(2) + "\n"; }

void write_json_file(const std::string &path, const json &doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw InputError("cannot write '" + path + "'");
  out << dump(doc);
}

namespace {

char code_of(const json &j) {
  const std::string s = j.get<std::string>();
  if (s.size() != 1)
    throw InputError("variable code must be a single letter, got '" + s + "'");
  return s[0];
}

// Wraps nlohmann type errors as input errors.
template <typename F> auto guarded(const char *what, F &&f) {
  try {
    return f();
  } catch (const json::exception &e) {
    throw InputError(std::string("malformed ") + what + " document: " + e.what());
  }
}

} // namespace

json to_json(const VariableTable &vars) {
  json arr = json::array();
  for (std::size_t i = 0; i < vars.size(); ++i)
    arr.push_back({{"name", vars[i].name},
                   {"code", std::string(1, vars[i].code)},
                   {"class", i == vars.class_index()}});
  return arr;
}

VariableTable variables_from_json(const json &doc) {
  return guarded("variable table", [&] {
    std::vector<Variable> features;
    std::optional<Variable> cls;
    for (const json &v : doc) {
      Variable var{v.at("name").get<std::string>(), code_of(v.at("code"))};
      if (v.value("class", false)) {
        if (cls)
          throw InputError("variable table flags more than one class variable");
        cls = var;
      } else {
        features.push_back(var);
      }
    }
    if (!cls)
      throw InputError("variable table has no class variable");
    return VariableTable(std::move(features), *cls);
  });
}

json to_json(const DatasetSchema &schema) {
  json features = json::array();
  for (const auto &f : schema.features)
    features.push_back({{"column", f.column}, {"code", std::string(1, f.code)}});
  return {{"schema", kVarmapSchema},
          {"id_column", schema.id_column},
          {"features", features},
          {"class",
           {{"column", schema.class_column},
            {"code", std::string(1, schema.class_code)},
            {"positive", schema.positive_labels},
            {"negative", schema.negative_labels}}}};
}

DatasetSchema dataset_schema_from_json(const json &doc) {
  require_schema(doc, kVarmapSchema);
  return guarded("variable map", [&] {
    DatasetSchema s;
    s.id_column = doc.value("id_column", std::string("record_id"));
    for (const json &f : doc.at("features"))
      s.features.push_back({f.at("column").get<std::string>(), code_of(f.at("code"))});
    const json &c = doc.at("class");
    s.class_column = c.at("column").get<std::string>();
    s.class_code = c.contains("code") ? code_of(c.at("code")) : 's';
    if (c.contains("positive"))
      s.positive_labels = c.at("positive").get<std::vector<std::string>>();
    if (c.contains("negative"))
      s.negative_labels = c.at("negative").get<std::vector<std::string>>();
    s.variables(); // validates codes
    return s;
  });
}

json to_json(const PatternTable &patterns) {
  json arr = json::array();
  for (const Pattern &p : patterns.patterns())
    arr.push_back({{"bits", patterns.key(p.bits)},
                   {"multiplicity", p.multiplicity()},
                   {"record_ids", p.record_ids}});
  return {{"schema", kPatternsSchema}, {"variables", to_json(patterns.vars())}, {"patterns", arr}};
}

PatternTable patterns_from_json(const json &doc) {
  require_schema(doc, kPatternsSchema);
  return guarded("patterns", [&] {
    VariableTable vars = variables_from_json(doc.at("variables"));
    PatternTable probe(vars, {});
    std::vector<Pattern> patterns;
    for (const json &p : doc.at("patterns")) {
      Pattern pat;
      pat.bits = probe.bits_from_key(p.at("bits").get<std::string>());
      pat.record_ids = p.at("record_ids").get<std::vector<std::string>>();
      if (p.contains("multiplicity") && p.at("multiplicity").get<std::size_t>() != pat.record_ids.size())
        throw InputError("pattern " + p.at("bits").get<std::string>() +
                         ": multiplicity does not match the number of record ids");
      patterns.push_back(std::move(pat));
    }
    return PatternTable(std::move(vars), std::move(patterns));
  });
}

json to_json(const Thresholds &cuts) {
  json m = json::object();
  for (std::size_t i = 0; i < cuts.features.size(); ++i)
    m[cuts.features[i]] = cuts.cuts[i];
  return {{"schema", kThresholdsSchema}, {"rule", "high iff value > cut"}, {"cuts", m}};
}

Thresholds thresholds_from_json(const json &doc, const VariableTable &vars) {
  require_schema(doc, kThresholdsSchema);
  return guarded("thresholds", [&] {
    const json &m = doc.at("cuts");
    Thresholds t;
    for (std::size_t f = 0; f < vars.feature_count(); ++f) {
      const std::string &name = vars[f].name;
      if (!m.contains(name))
        throw InputError("thresholds file has no cut for feature '" + name + "'");
      t.features.push_back(name);
      t.cuts.push_back(m.at(name).get<double>());
    }
    return t;
  });
}

json to_json(const std::vector<ThresholdDeviation> &deviations) {
  json arr = json::array();
  for (const auto &d : deviations)
    arr.push_back({{"feature", d.feature},
                   {"cut", d.cut},
                   {"target_high", d.target_high},
                   {"realized_high", d.realized_high}});
  return {{"schema", kDeviationsSchema}, {"deviations", arr}};
}

namespace {

json poly_list(const std::vector<BoolPoly> &polys, const VariableTable &vars, const MonomialOrder &order) {
  json arr = json::array();
  for (const BoolPoly &p : polys)
    arr.push_back(format_poly(p, vars, order));
  return arr;
}

std::vector<BoolPoly> parse_list(const json &arr, const VariableTable &vars) {
  std::vector<BoolPoly> out;
  for (const json &s : arr)
    out.push_back(parse_poly(s.get<std::string>(), vars));
  return out;
}

} // namespace

json basis_to_json(const GroebnerBasis &basis, const VariableTable &vars) {
  return {{"schema", kBasisSchema},
          {"variables", to_json(vars)},
          {"order", basis.order.describe(vars)},
          {"reduced", basis.reduced},
          {"basis", poly_list(basis.elements, vars, basis.order)}};
}

GroebnerBasis basis_from_json(const json &doc, const VariableTable &vars) {
  require_schema(doc, kBasisSchema);
  return guarded("basis", [&] {
    GroebnerBasis b;
    b.order = MonomialOrder::parse(doc.at("order").get<std::string>(), vars);
    b.elements = parse_list(doc.at("basis"), vars);
    b.reduced = doc.value("reduced", false);
    return b;
  });
}

json ideal_to_json(const Ideal &ideal, const VariableTable &vars) {
  json doc = basis_to_json(ideal.basis(), vars);
  doc["label"] = ideal.label();
  doc["generators"] = poly_list(ideal.generators(), vars, ideal.order());
  return doc;
}

Ideal ideal_from_json(const json &doc, const VariableTable &vars) {
  require_schema(doc, kBasisSchema);
  return guarded("ideal", [&] {
    MonomialOrder order = MonomialOrder::parse(doc.at("order").get<std::string>(), vars);
    return Ideal(doc.value("label", std::string()), order, parse_list(doc.at("generators"), vars));
  });
}

json trace_to_json(const DecisionTrace &trace, const VariableTable &vars, const MonomialOrder &order) {
  json cycles = json::array();
  for (const TraceCycle &c : trace.cycles) {
    json rounds = json::array();
    for (const auto &r : c.insight_rounds)
      rounds.push_back(poly_list(r, vars, order));
    json exc = json::array();
    for (const auto &e : c.exceptions)
      exc.push_back({{"pattern", e.key}, {"record_ids", e.record_ids}});
    cycles.push_back({{"cycle", c.cycle}, {"insight_rounds", rounds}, {"exceptions", exc}});
  }
  return {{"schema", kTraceSchema}, {"variables", vars.codes()}, {"cycles", cycles}};
}

DecisionTrace trace_from_json(const json &doc, const VariableTable &vars) {
  require_schema(doc, kTraceSchema);
  return guarded("trace", [&] {
    if (doc.contains("variables") && doc.at("variables").get<std::string>() != vars.codes())
      throw InputError("trace was recorded for variables '" + doc.at("variables").get<std::string>() +
                       "', data has '" + vars.codes() + "'");
    DecisionTrace t;
    for (const json &c : doc.at("cycles")) {
      TraceCycle tc;
      tc.cycle = c.at("cycle").get<int>();
      for (const json &r : c.value("insight_rounds", json::array()))
        tc.insight_rounds.push_back(parse_list(r, vars));
      for (const json &e : c.value("exceptions", json::array()))
        tc.exceptions.push_back({e.value("pattern", std::string()),
                                 e.value("record_ids", std::vector<std::string>{})});
      t.cycles.push_back(std::move(tc));
    }
    return t;
  });
}

json rule_to_json(const Rule &rule, const VariableTable &vars, const MonomialOrder &order) {
  json factors = json::array();
  for (const BoolPoly &f : rule.factors)
    factors.push_back(format_poly(f, vars, order));
  json j = {{"polarity", to_string(rule.polarity)},
            {"criterion", format_poly(rule.criterion, vars, order)},
            {"factored", format_factored(rule.factors, vars)},
            {"factors", factors},
            {"support", rule.support},
            {"agree", rule.agree},
            {"class_positive", rule.class_positive()},
            {"exception_ids", rule.exception_ids},
            {"source", format_poly(rule.provenance.source, vars, order)},
            {"cycle", rule.provenance.cycle}};
  if (rule.provenance.parent)
    j["parent"] = format_poly(*rule.provenance.parent, vars, order);
  return j;
}

Rule rule_from_json(const json &doc, const VariableTable &vars) {
  return guarded("rule", [&] {
    Rule r;
    r.polarity = parse_polarity(doc.at("polarity").get<std::string>());
    r.criterion = parse_poly(doc.at("criterion").get<std::string>(), vars);
    r.factors = parse_list(doc.at("factors"), vars);
    r.support = doc.at("support").get<std::size_t>();
    r.agree = doc.at("agree").get<std::size_t>();
    r.exception_ids = doc.at("exception_ids").get<std::vector<std::string>>();
    r.provenance.source = parse_poly(doc.value("source", std::string("0")), vars);
    r.provenance.cycle = doc.value("cycle", 0);
    if (doc.contains("parent"))
      r.provenance.parent = parse_poly(doc.at("parent").get<std::string>(), vars);
    return r;
  });
}

json report_to_json(const Report &report) {
  const VariableTable &vars = report.vars;
  json rules = json::array();
  for (const Rule &r : report.rules)
    rules.push_back(rule_to_json(r, vars, report.order));
  json gens = json::array();
  for (const Rule &r : report.generalizations)
    gens.push_back(rule_to_json(r, vars, report.order));
  json doc = {{"schema", kReportSchema},
              {"tool_version", kToolVersion},
              {"variables", to_json(vars)},
              {"order", report.order.describe(vars)},
              {"summary",
               {{"records", report.summary.records},
                {"positives", report.summary.positives},
                {"patterns", report.summary.patterns},
                {"unobserved_exponent", report.summary.unobserved_exponent}}},
              {"cycles", report.cycles},
              {"excised_records", report.excised_records},
              {"insight_basis", poly_list(report.insight_basis, vars, report.order)},
              {"rules", rules},
              {"generalizations", gens},
              {"decision_source", report.context.decision_source},
              {"trace", trace_to_json(report.trace, vars, report.order)},
              {"notes", report.notes}};
  if (report.context.thresholds)
    doc["thresholds"] = to_json(*report.context.thresholds);
  return doc;
}

Report report_from_json(const json &doc) {
  require_schema(doc, kReportSchema);
  return guarded("report", [&] {
    Report r;
    r.vars = variables_from_json(doc.at("variables"));
    r.order = MonomialOrder::parse(doc.at("order").get<std::string>(), r.vars);
    const json &s = doc.at("summary");
    r.summary = {s.at("records").get<std::size_t>(), s.at("positives").get<std::size_t>(),
                 s.at("patterns").get<std::size_t>(), s.at("unobserved_exponent").get<std::uint64_t>()};
    r.cycles = doc.at("cycles").get<int>();
    r.excised_records = doc.at("excised_records").get<std::vector<std::string>>();
    r.insight_basis = parse_list(doc.at("insight_basis"), r.vars);
    for (const json &j : doc.at("rules"))
      r.rules.push_back(rule_from_json(j, r.vars));
    for (const json &j : doc.at("generalizations"))
      r.generalizations.push_back(rule_from_json(j, r.vars));
    r.context.decision_source = doc.value("decision_source", std::string());
    if (doc.contains("thresholds"))
      r.context.thresholds = thresholds_from_json(doc.at("thresholds"), r.vars);
    r.trace = trace_from_json(doc.at("trace"), r.vars);
    r.notes = doc.value("notes", std::vector<std::string>{});
    return r;
  });
}

namespace {

void rule_table(std::ostringstream &out, const std::vector<Rule> &rules, const VariableTable &vars,
                const std::string &class_name) {
  out << "| type | number (" << class_name << ") | selection criterion | exceptions |\n";
  out << "|------|------|------|------|\n";
  for (const Rule &r : rules) {
    out << "| " << to_string(r.polarity) << " | " << r.support << "(" << r.class_positive() << ") | "
        << format_factored(r.factors, vars) << " | ";
    // Long lists are cut here; the JSON report keeps every id.
    constexpr std::size_t kShown = 8;
    for (std::size_t i = 0; i < r.exception_ids.size() && i < kShown; ++i)
      out << (i ? ", " : "") << r.exception_ids[i];
    if (r.exception_ids.size() > kShown)
      out << ", ... (" << r.exception_ids.size() - kShown << " more)";
    out << " |\n";
  }
}

} // namespace

std::string render_markdown(const Report &report) {
  const VariableTable &vars = report.vars;
  const std::string class_name = vars[vars.class_index()].name;
  std::ostringstream out;
  out << "# Rule report\n\n";
  out << "- " << report.summary.records << " records, " << report.summary.positives << " positive, "
      << report.summary.patterns << " patterns, 2^" << report.summary.unobserved_exponent
      << " empty criteria\n";
  out << "- order: `" << report.order.describe(vars) << "`\n";
  out << "- cycles: " << report.cycles << "\n";
  out << "- decisions: " << (report.context.decision_source.empty() ? "-" : report.context.decision_source)
      << "\n";
  out << "- excised records: ";
  if (report.excised_records.empty())
    out << "none";
  for (std::size_t i = 0; i < report.excised_records.size(); ++i)
    out << (i ? ", " : "") << report.excised_records[i];
  out << "\n\n## Variables\n\n| code | name |\n|------|------|\n";
  for (const Variable &v : vars.variables())
    out << "| " << v.code << " | " << v.name << " |\n";

  out << "\n## Rules\n\n";
  if (report.rules.empty())
    out << "No rules.\n";
  else
    rule_table(out, report.rules, vars, class_name);

  out << "\n## Generalizations\n\n";
  if (report.generalizations.empty())
    out << "No generalizations.\n";
  else
    rule_table(out, report.generalizations, vars, class_name);

  out << "\n## Insight basis\n\n";
  for (const BoolPoly &g : report.insight_basis)
    out << "- `" << format_poly(g, vars, report.order) << "`\n";
  if (report.insight_basis.empty())
    out << "Empty (zero ideal).\n";
  for (const std::string &n : report.notes)
    out << "\n> " << n << "\n";
  return out.str();
}

} // namespace boolrules::docs
