// boolrules: binarize records, run the rule workflow headlessly or behind a
// local HTTP API, verify and re-render reports.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>

#include "boolrules/documents.hpp"
#include "boolrules/error.hpp"
#include "boolrules/service.hpp"
#include "boolrules/workflow.hpp"

namespace fs = std::filesystem;
using namespace boolrules;

namespace {

constexpr int kExitMismatch = 2;
constexpr int kExitInput = 3;

struct Options {
  std::string records;
  std::string varmap;
  std::string patterns;
  std::string thresholds;
  std::string order = "deglex";
  std::vector<std::string> policy;
  std::string trace;
  std::string out;
  std::string report;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string ui;
  bool quiet = false;
};

fs::path out_dir(const Options &o) {
  fs::path dir = o.out;
  if (dir.empty()) {
    const char *env = std::getenv("BOOLRULES_OUT");
    dir = env ? env : ".";
  }
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw InputError("cannot write '" + path.string() + "'");
  out << text;
}

RecordTable load_records(const Options &o) {
  std::ifstream in(o.records);
  if (!in)
    throw InputError("cannot open '" + o.records + "'");
  DatasetSchema schema;
  if (!o.varmap.empty()) {
    schema = docs::dataset_schema_from_json(docs::read_json_file(o.varmap));
  } else {
    std::string header;
    std::getline(in, header);
    schema = DatasetSchema::infer(split_csv_line(header));
    in.clear();
    in.seekg(0);
  }
  return parse_records(in, schema);
}

struct Loaded {
  PatternTable patterns;
  std::optional<RecordTable> records;
  std::optional<Thresholds> thresholds;
  std::vector<ThresholdDeviation> deviations;
};

Loaded load_input(const Options &o) {
  if (o.records.empty() == o.patterns.empty())
    throw InputError("give exactly one of --records or --patterns");
  Loaded l;
  if (!o.patterns.empty()) {
    l.patterns = docs::patterns_from_json(docs::read_json_file(o.patterns));
    if (!o.thresholds.empty())
      l.thresholds = docs::thresholds_from_json(docs::read_json_file(o.thresholds), l.patterns.vars());
    return l;
  }
  l.records = load_records(o);
  if (!o.thresholds.empty()) {
    l.thresholds = docs::thresholds_from_json(docs::read_json_file(o.thresholds), l.records->vars);
  } else {
    ThresholdResult t = compute_thresholds(*l.records);
    l.thresholds = t.thresholds;
    l.deviations = t.deviations;
  }
  l.patterns = binarize(*l.records, *l.thresholds);
  return l;
}

std::size_t parse_count(const std::string &key, const std::string &value) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(value, &pos);
    if (pos == value.size() && v >= 0)
      return static_cast<std::size_t>(v);
  } catch (const std::exception &) {
  }
  throw InputError("policy " + key + " needs a non-negative integer, got '" + value + "'");
}

struct Policy {
  RelevancePolicy relevance;
  ExceptionPolicy exceptions;
  std::string describe() const {
    std::ostringstream s;
    s << "policy min_support=" << relevance.min_support << " max_variables=" << relevance.max_variables
      << " max_monomials=" << exceptions.max_monomials << " max_multiplicity=" << exceptions.max_multiplicity;
    if (exceptions.max_variables)
      s << " exception_max_variables=" << *exceptions.max_variables;
    return s.str();
  }
};

Policy parse_policy(const std::vector<std::string> &items) {
  Policy p;
  for (const std::string &item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw InputError("policy settings look like key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "min_support")
      p.relevance.min_support = parse_count(key, value);
    else if (key == "max_variables")
      p.relevance.max_variables = static_cast<int>(parse_count(key, value));
    else if (key == "max_monomials")
      p.exceptions.max_monomials = parse_count(key, value);
    else if (key == "max_multiplicity")
      p.exceptions.max_multiplicity = parse_count(key, value);
    else if (key == "exception_max_variables")
      p.exceptions.max_variables = static_cast<int>(parse_count(key, value));
    else
      throw InputError("unknown policy setting '" + key + "'");
  }
  return p;
}

void print_deviations(const std::vector<ThresholdDeviation> &deviations) {
  for (const auto &d : deviations)
    std::cerr << "note: " << d.feature << " cut " << d.cut << " marks " << d.realized_high
              << " records high (target " << d.target_high << ") because of ties\n";
}

int cmd_binarize(const Options &o) {
  if (o.records.empty() && !o.patterns.empty()) {
    PatternTable patterns = docs::patterns_from_json(docs::read_json_file(o.patterns));
    std::cout << summary_line(patterns) << "\n";
    return 0;
  }
  if (o.records.empty())
    throw InputError("binarize needs --records (or --patterns to summarize)");
  Loaded l = load_input(o);
  fs::path dir = out_dir(o);
  docs::write_json_file((dir / "patterns.json").string(), docs::to_json(l.patterns));
  docs::write_json_file((dir / "thresholds.json").string(), docs::to_json(*l.thresholds));
  docs::write_json_file((dir / "deviations.json").string(), docs::to_json(l.deviations));
  print_deviations(l.deviations);
  std::cout << summary_line(l.patterns) << "\n";
  return 0;
}

int verify_and_print(const Report &report, const RecordTable &records, const Thresholds &cuts) {
  VerificationResult v = verify_rules(report, records, cuts);
  for (const std::string &m : v.mismatches)
    std::cerr << "mismatch: " << m << "\n";
  std::cout << "verified " << v.rules_checked << " rules, " << v.mismatches.size() << " mismatches\n";
  return v.ok() ? 0 : kExitMismatch;
}

int cmd_analyze(const Options &o) {
  if (!o.trace.empty() && !o.policy.empty())
    throw InputError("--trace and --policy are mutually exclusive");
  Loaded l = load_input(o);
  print_deviations(l.deviations);
  MonomialOrder order = MonomialOrder::parse(o.order, l.patterns.vars());
  SessionState start = start_session(l.patterns, order);

  SessionState done;
  ReportContext ctx;
  ctx.thresholds = l.thresholds;
  if (!o.trace.empty()) {
    DecisionTrace trace = docs::trace_from_json(docs::read_json_file(o.trace), l.patterns.vars());
    done = replay(start, trace);
    ctx.decision_source = service::kRecordedDecisions;
  } else {
    Policy p = parse_policy(o.policy);
    done = run_policy(start, p.relevance, p.exceptions).state;
    ctx.decision_source = p.describe();
  }
  Report report = final_report(done, ctx);

  fs::path dir = out_dir(o);
  docs::write_json_file((dir / "report.json").string(), docs::report_to_json(report));
  write_text(dir / "report.md", docs::render_markdown(report));
  docs::write_json_file((dir / "trace.json").string(), docs::trace_to_json(done.trace, report.vars, order));
  if (!o.quiet) {
    std::cout << summary_line(l.patterns) << "\n";
    std::cout << report.cycles << " cycles, " << report.rules.size() << " rules, "
              << report.generalizations.size() << " generalizations\n";
    for (const Rule &r : report.rules)
      std::cout << "  " << format_rule(r, report.vars) << "\n";
  }
  if (l.records)
    return verify_and_print(report, *l.records, *l.thresholds);
  return 0;
}

int cmd_verify(const Options &o) {
  if (o.report.empty() || o.records.empty())
    throw InputError("verify needs --report and --records");
  Report report = docs::report_from_json(docs::read_json_file(o.report));
  RecordTable records = load_records(o);
  if (!(records.vars == report.vars))
    throw InputError("records and report use different variable tables");
  Thresholds cuts;
  if (!o.thresholds.empty())
    cuts = docs::thresholds_from_json(docs::read_json_file(o.thresholds), records.vars);
  else if (report.context.thresholds)
    cuts = *report.context.thresholds;
  else
    cuts = compute_thresholds(records).thresholds;
  return verify_and_print(report, records, cuts);
}

int cmd_report(const Options &o) {
  if (o.report.empty())
    throw InputError("report needs --report");
  Report report = docs::report_from_json(docs::read_json_file(o.report));
  const std::string md = docs::render_markdown(report);
  if (o.out.empty())
    std::cout << md;
  else
    write_text(out_dir(o) / "report.md", md);
  return 0;
}

int cmd_serve(const Options &o) {
  Loaded l = load_input(o);
  service::SessionConfig cfg{l.patterns, MonomialOrder::parse(o.order, l.patterns.vars()), l.records,
                             l.thresholds};
  service::Api api(std::move(cfg));
  httplib::Server server;
  // Plain SO_REUSEADDR: the default SO_REUSEPORT would let two servers share a port.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void *>(&yes), sizeof(yes));
  });
  std::optional<std::string> ui;
  if (!o.ui.empty() && fs::is_directory(o.ui))
    ui = o.ui;
  api.mount(server, ui);
  if (!server.bind_to_port(o.host, o.port))
    throw InputError("cannot listen on " + o.host + ":" + std::to_string(o.port) + " (port busy?)");
  std::cout << "serving on http://" << o.host << ":" << o.port << "\n";
  if (!ui)
    std::cout << "no review UI assets found, serving the API only\n";
  std::cout.flush();
  server.listen_after_bind();
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Rule discovery on binarized records with Boolean Groebner bases"};
  app.require_subcommand(1);
  Options o;

  auto input = [&](CLI::App *cmd) {
    cmd->add_option("--records", o.records, "records CSV");
    cmd->add_option("--varmap", o.varmap, "variable map JSON (column names to letters)");
    cmd->add_option("--patterns", o.patterns, "patterns JSON from binarize");
    cmd->add_option("--thresholds", o.thresholds, "thresholds JSON overriding computed cuts");
  };

  auto *binarize = app.add_subcommand("binarize", "turn records into patterns, print a summary");
  input(binarize);
  binarize->add_option("--out", o.out, "output directory (default $BOOLRULES_OUT or .)");

  auto *analyze = app.add_subcommand("analyze", "run the workflow with a policy or a recorded trace");
  input(analyze);
  analyze->add_option("--order", o.order, "deglex | degrevlex | lex, optionally kind:CODES");
  analyze->add_option("--policy", o.policy, "key=value, repeatable");
  analyze->add_option("--trace", o.trace, "decision trace JSON to replay");
  analyze->add_option("--out", o.out, "output directory (default $BOOLRULES_OUT or .)");
  analyze->add_flag("--quiet", o.quiet, "no rule listing");

  auto *serve = app.add_subcommand("serve", "serve the session API on loopback");
  input(serve);
  serve->add_option("--order", o.order, "monomial order");
  serve->add_option("--host", o.host, "bind address");
  serve->add_option("--port", o.port, "port");
  serve->add_option("--ui", o.ui, "directory with built review UI assets");

  auto *verify = app.add_subcommand("verify", "recount report rules from raw records");
  verify->add_option("--report", o.report, "report JSON")->required();
  verify->add_option("--records", o.records, "records CSV")->required();
  verify->add_option("--varmap", o.varmap, "variable map JSON");
  verify->add_option("--thresholds", o.thresholds, "thresholds JSON");

  auto *report = app.add_subcommand("report", "render a report JSON as Markdown");
  report->add_option("--report", o.report, "report JSON")->required();
  report->add_option("--out", o.out, "write report.md here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*binarize)
      return cmd_binarize(o);
    if (*analyze)
      return cmd_analyze(o);
    if (*serve)
      return cmd_serve(o);
    if (*verify)
      return cmd_verify(o);
    return cmd_report(o);
  } catch (const InputError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
