#include "boolrules/service.hpp"

#include <filesystem>

#include <httplib.h>

#include "boolrules/error.hpp"

namespace boolrules::service {

namespace {

Response error(int status, const std::string &message) {
  return {status, {{"schema", kErrorSchema}, {"status", status}, {"error", message}}};
}

Response no_session() { return error(404, "no session loaded"); }

json insight_json(const InsightCandidate &c, std::size_t index, const SessionState &s) {
  json rules = json::array();
  for (const Rule &r : c.rules)
    rules.push_back(docs::rule_to_json(r, s.vars(), s.order()));
  return {{"id", "i" + std::to_string(index + 1)},
          {"source", format_poly(c.source, s.vars(), s.order())},
          {"remainder", format_poly(c.remainder, s.vars(), s.order())},
          {"max_support", c.max_support()},
          {"min_variables", c.min_variables()},
          {"rules", rules}};
}

json exception_json(const ExceptionCandidate &c, const SessionState &s) {
  return {{"id", c.key},
          {"pattern", c.key},
          {"remainder", format_poly(c.remainder, s.vars(), s.order())},
          {"monomials", c.remainder.size()},
          {"variables", std::popcount(c.remainder.support())},
          {"multiplicity", c.multiplicity()},
          {"record_ids", c.record_ids}};
}

std::string session_id(std::uint64_t n, const PatternTable &patterns) {
  // Stable for a given load order and table, no clock or randomness.
  std::uint64_t h = 1469598103934665603ull;
  for (const Pattern &p : patterns.patterns()) {
    h = (h ^ p.bits) * 1099511628211ull;
    h = (h ^ p.multiplicity()) * 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%llu-%08llx", static_cast<unsigned long long>(n),
                static_cast<unsigned long long>(h & 0xffffffffu));
  return buf;
}

} // namespace

void Api::load(SessionConfig config) {
  std::lock_guard writer(writer_);
  auto s = std::make_shared<Session>();
  s->id = session_id(++loads_, config.patterns);
  s->current = std::make_shared<const SessionState>(start_session(config.patterns, config.order));
  s->config = std::move(config);
  std::unique_lock lock(mutex_);
  session_ = std::move(s);
}

bool Api::has_session() const { return snapshot() != nullptr; }

std::shared_ptr<const Api::Session> Api::snapshot() const {
  std::shared_lock lock(mutex_);
  return session_;
}

json Api::summary(const Session &s) const {
  const SessionState &st = *s.current;
  std::size_t candidates = 0;
  if (st.phase == Phase::AwaitingInsights)
    candidates = st.insights.size();
  else if (st.phase == Phase::AwaitingExceptions)
    candidates = st.exceptions.size();
  return {{"schema", kStateSchema},
          {"session", s.id},
          {"sequence", s.sequence},
          {"cycle", st.cycle},
          {"round", st.round},
          {"phase", std::string(to_string(st.phase))},
          {"variables", docs::to_json(st.vars())},
          {"order", st.order().describe(st.vars())},
          {"patterns", {{"total", st.all_patterns.observed_count()}, {"active", st.active_patterns.observed_count()}}},
          {"records",
           {{"total", st.all_patterns.record_count()},
            {"positive", st.all_patterns.positive_count()},
            {"excised", std::vector<std::string>(st.excised_records.begin(), st.excised_records.end())}}},
          {"unobserved_exponent", st.all_patterns.unobserved_count()},
          {"generators", {{"I", st.empty_ideal.generators().size()}, {"J", st.insight_ideal.generators().size()}}},
          {"candidates", candidates}};
}

Response Api::state() const {
  auto s = snapshot();
  if (!s)
    return no_session();
  return {200, summary(*s)};
}

Response Api::candidates(std::string_view kind) const {
  auto s = snapshot();
  if (!s)
    return no_session();
  const SessionState &st = *s->current;
  json list = json::array();
  if (kind == "insights" || kind == "insight") {
    if (st.phase != Phase::AwaitingInsights)
      return error(409, "session is in the " + std::string(to_string(st.phase)) + " phase");
    for (std::size_t i = 0; i < st.insights.size(); ++i)
      list.push_back(insight_json(st.insights[i], i, st));
  } else if (kind == "exceptions" || kind == "exception") {
    if (st.phase != Phase::AwaitingExceptions)
      return error(409, "session is in the " + std::string(to_string(st.phase)) + " phase");
    for (const ExceptionCandidate &c : st.exceptions)
      list.push_back(exception_json(c, st));
  } else {
    return error(400, "unknown candidate kind '" + std::string(kind) + "'");
  }
  return {200,
          {{"schema", kCandidatesSchema},
           {"kind", st.phase == Phase::AwaitingInsights ? "insight" : "exception"},
           {"sequence", s->sequence},
           {"cycle", st.cycle},
           {"round", st.round},
           {"candidates", list}}};
}

Response Api::decide(const json &body) {
  std::lock_guard writer(writer_);
  auto s = snapshot();
  if (!s)
    return no_session();
  if (!body.is_object() || !body.contains("kind") || !body.contains("ids") || !body.contains("sequence") ||
      !body["kind"].is_string() || !body["ids"].is_array() || !body["sequence"].is_number_unsigned())
    return error(400, "expected {\"kind\", \"ids\", \"sequence\"}");
  if (body["sequence"].get<std::uint64_t>() != s->sequence)
    return error(409, "stale sequence " + body["sequence"].dump() + ", current is " + std::to_string(s->sequence));

  const SessionState &st = *s->current;
  const std::string kind = body["kind"].get<std::string>();
  std::vector<std::string> ids;
  for (const json &id : body["ids"]) {
    if (!id.is_string())
      return error(400, "ids must be strings");
    ids.push_back(id.get<std::string>());
  }

  SessionState next;
  try {
    if (kind == "insight") {
      if (st.phase != Phase::AwaitingInsights)
        return error(409, "session is in the " + std::string(to_string(st.phase)) + " phase");
      std::vector<BoolPoly> accepted;
      for (const std::string &id : ids) {
        std::size_t n = 0;
        if (id.size() < 2 || id[0] != 'i' || id.find_first_not_of("0123456789", 1) != std::string::npos ||
            (n = std::stoul(id.substr(1))) == 0 || n > st.insights.size())
          return error(400, "unknown insight id '" + id + "'");
        accepted.push_back(st.insights[n - 1].source);
      }
      next = decide_insights(st, accepted);
    } else if (kind == "exception") {
      if (st.phase != Phase::AwaitingExceptions)
        return error(409, "session is in the " + std::string(to_string(st.phase)) + " phase");
      std::vector<ExceptionDecision> accepted;
      for (const std::string &id : ids) {
        auto it = std::find_if(st.exceptions.begin(), st.exceptions.end(),
                               [&](const ExceptionCandidate &c) { return c.key == id; });
        if (it == st.exceptions.end())
          return error(400, "unknown exception id '" + id + "'");
        accepted.push_back({id, {}});
      }
      next = decide_exceptions(st, accepted);
    } else {
      return error(400, "unknown decision kind '" + kind + "'");
    }
  } catch (const StateError &e) {
    return error(409, e.what());
  } catch (const InputError &e) {
    return error(400, e.what());
  }

  auto updated = std::make_shared<Session>(*s);
  updated->current = std::make_shared<const SessionState>(std::move(next));
  ++updated->sequence;
  {
    std::unique_lock lock(mutex_);
    session_ = updated;
  }
  return {200, summary(*updated)};
}

Response Api::report() const {
  auto s = snapshot();
  if (!s)
    return no_session();
  if (s->current->phase != Phase::Terminated)
    return error(409, "report is available once the session has terminated");
  ReportContext ctx{kRecordedDecisions, s->config.thresholds};
  return {200, docs::report_to_json(final_report(*s->current, ctx))};
}

Response Api::trace() const {
  auto s = snapshot();
  if (!s)
    return no_session();
  return {200, docs::trace_to_json(s->current->trace, s->current->vars(), s->current->order())};
}

Response Api::pattern(const std::string &key) const {
  auto s = snapshot();
  if (!s)
    return no_session();
  const SessionState &st = *s->current;
  const VariableTable &vars = st.vars();
  std::uint64_t bits = 0;
  try {
    bits = st.all_patterns.bits_from_key(key);
  } catch (const Error &e) {
    return error(400, e.what());
  }
  const Pattern *p = st.all_patterns.find(bits);
  if (p == nullptr)
    return error(404, "pattern " + key + " is not observed");

  json assignment = json::object();
  for (std::size_t i = 0; i < vars.size(); ++i)
    assignment[std::string(1, vars[i].code)] = (bits >> i) & 1u;
  json records = json::array();
  for (const std::string &id : p->record_ids) {
    json r = {{"id", id}, {"excised", st.excised_records.contains(id)}};
    if (s->config.records) {
      for (const Record &rec : s->config.records->records) {
        if (rec.id != id)
          continue;
        json values = json::object();
        for (std::size_t f = 0; f < vars.feature_count(); ++f)
          values[vars[f].name] = rec.values[f];
        r["values"] = values;
        break;
      }
    }
    records.push_back(r);
  }
  const Pattern *active = st.active_patterns.find(bits);
  json indicator = format_poly(pattern_indicator(bits, vars), vars, st.order());
  return {200,
          {{"schema", kPatternSchema},
           {"pattern", key},
           {"bits", bits},
           {"assignment", assignment},
           {"multiplicity", p->multiplicity()},
           {"active_multiplicity", active ? active->multiplicity() : 0},
           {"indicator", indicator},
           {"records", records}}};
}

void Api::mount(httplib::Server &server, const std::optional<std::string> &ui_dir) {
  auto send = [](httplib::Response &res, const Response &r) {
    res.status = r.status;
    res.set_content(r.body.dump(2), "application/json");
  };
  server.Get("/state", [this, send](const httplib::Request &, httplib::Response &res) { send(res, state()); });
  server.Get("/health", [this, send](const httplib::Request &, httplib::Response &res) { send(res, state()); });
  server.Get(R"(/candidates/(\w+))", [this, send](const httplib::Request &req, httplib::Response &res) {
    send(res, candidates(req.matches[1].str()));
  });
  server.Post("/decisions", [this, send](const httplib::Request &req, httplib::Response &res) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded()) {
      send(res, error(400, "request body is not JSON"));
      return;
    }
    send(res, decide(body));
  });
  server.Get("/report", [this, send](const httplib::Request &, httplib::Response &res) { send(res, report()); });
  server.Get("/trace", [this, send](const httplib::Request &, httplib::Response &res) { send(res, trace()); });
  server.Get(R"(/patterns/([01]+))", [this, send](const httplib::Request &req, httplib::Response &res) {
    send(res, pattern(req.matches[1].str()));
  });
  server.set_exception_handler([send](const httplib::Request &, httplib::Response &res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception &e) {
      send(res, error(500, e.what()));
    }
  });
  if (ui_dir && std::filesystem::is_directory(*ui_dir))
    server.set_mount_point("/", *ui_dir);
}

} // namespace boolrules::service
