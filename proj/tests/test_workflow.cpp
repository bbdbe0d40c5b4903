#include <doctest.h>

#include "boolrules/documents.hpp"
#include "boolrules/error.hpp"
#include "boolrules/workflow.hpp"
#include "support/fixtures.hpp"

using namespace boolrules;

namespace {

SessionState start(const PatternTable &p) { return start_session(p, MonomialOrder::standard(p.vars())); }

const Rule *find(const std::vector<Rule> &rules, Polarity pol, const BoolPoly &criterion) {
  for (const Rule &r : rules)
    if (r.polarity == pol && r.criterion == criterion)
      return &r;
  return nullptr;
}

void check_containment(const SessionState &s) {
  for (const BoolPoly &j : s.insight_ideal.generators())
    REQUIRE(membership(j, s.empty_ideal));
}

} // namespace

TEST_CASE("fresh session awaits insights with sorted candidates") {
  PatternTable p = fixtures::planted_patterns();
  SessionState s = start(p);
  CHECK(s.cycle == 1);
  CHECK(s.phase == Phase::AwaitingInsights);
  const auto &c = insight_candidates(s);
  REQUIRE_FALSE(c.empty());
  for (std::size_t i = 1; i < c.size(); ++i)
    CHECK(c[i - 1].max_support() >= c[i].max_support());
  for (const auto &cand : c) {
    CHECK(cand.source.involves(p.vars().class_index()));
    CHECK(membership(cand.remainder, s.empty_ideal));
  }
  CHECK_THROWS_AS(exception_candidates(s), StateError);
  CHECK_THROWS_AS(decide_exceptions(s, {}), StateError);
  CHECK_THROWS_AS(decide_insights(s, {parse_poly("AG", p.vars())}), InputError);
  CHECK_THROWS_AS(final_report(s), StateError);
}

TEST_CASE("planted rule is recovered by the default policy") {
  RecordTable records = fixtures::planted_records();
  PatternTable p = binarize(records, fixtures::planted_thresholds());
  PolicyRun run = run_policy(start(p), {}, {});
  CHECK(run.state.phase == Phase::Terminated);
  CHECK(run.state.excised_records.empty());
  Report report = final_report(run.state, {"policy", fixtures::planted_thresholds()});
  const VariableTable &v = p.vars();
  const Rule *pos = find(report.rules, Polarity::Positive, parse_poly("A(B+1)", v));
  const Rule *neg = find(report.rules, Polarity::Negative, parse_poly("A(B+1)+1", v));
  REQUIRE(pos != nullptr);
  REQUIRE(neg != nullptr);
  CHECK(pos->support == 50);
  CHECK(pos->exception_ids.empty());
  CHECK(neg->support == 150);
  CHECK(neg->exception_ids.empty());
  for (const Rule &r : report.rules)
    CHECK(r.exception_ids.empty());
  VerificationResult vr = verify_rules(report, records, fixtures::planted_thresholds());
  CHECK(vr.ok());
  CHECK(vr.rules_checked == report.rules.size() + report.generalizations.size());
}

TEST_CASE("an off-rule record becomes the only exception") {
  PatternTable p = fixtures::planted_patterns(true);
  const VariableTable &v = p.vars();
  SessionState s = start(p);
  // Accept every insight, then move on to exceptions.
  while (s.phase == Phase::AwaitingInsights) {
    std::vector<BoolPoly> all;
    for (const auto &c : insight_candidates(s))
      all.push_back(c.source);
    s = decide_insights(s, all);
    check_containment(s);
  }
  // Every active pattern has a nonzero remainder; only the off-rule one is
  // both short and rare.
  const auto &all = exception_candidates(s);
  CHECK(all.size() == p.observed_count());
  PolicyProvider policy({}, {});
  std::vector<ExceptionCandidate> ex;
  for (const auto &c : all)
    if (policy.exceptional(c, v))
      ex.push_back(c);
  REQUIRE(ex.size() == 1);
  CHECK(ex[0].record_ids == std::vector<std::string>{"x999"});
  CHECK(ex[0].remainder.size() <= 2);
  CHECK(policy.choose_exceptions(s).size() == 1);
  const std::uint64_t bits = ex[0].bits;

  SessionState next = decide_exceptions(s, {{ex[0].key, {}}});
  CHECK(next.cycle == 2);
  CHECK(next.phase == Phase::AwaitingInsights);
  CHECK(membership(pattern_indicator(bits, v), next.empty_ideal));
  CHECK_FALSE(membership(pattern_indicator(bits, v), s.empty_ideal));
  CHECK(next.active_patterns.record_count() == 200);
  check_containment(next);

  PolicyRun run = run_policy(start(p), {}, {});
  CHECK(run.state.excised_records == std::set<std::string>{"x999"});
  Report report = final_report(run.state);
  const Rule *neg = find(report.rules, Polarity::Negative, parse_poly("B", v));
  REQUIRE(neg != nullptr);
  CHECK(neg->support == 101);
  CHECK(neg->exception_ids == std::vector<std::string>{"x999"});
  CHECK(verify_rules(report, fixtures::planted_records(true), fixtures::planted_thresholds()).ok());
}

TEST_CASE("partial excision keeps the pattern observed") {
  PatternTable p = fixtures::patterns_from_codes("ABs", 's', {{0b000, 3}, {0b001, 2}, {0b111, 2}, {0b110, 3}});
  SessionState s = start(p);
  s = decide_insights(s, {});
  REQUIRE(s.phase == Phase::AwaitingExceptions);
  const auto &ex = exception_candidates(s);
  REQUIRE_FALSE(ex.empty());
  const ExceptionCandidate c = ex.front();
  SessionState next = decide_exceptions(s, {{c.key, {c.record_ids.front()}}});
  CHECK(next.excised_records.size() == 1);
  CHECK(next.empty_ideal.generators().size() == s.empty_ideal.generators().size());
  CHECK(next.active_patterns.find(c.bits)->multiplicity() == c.multiplicity() - 1);
  CHECK_THROWS_AS(decide_exceptions(s, {{c.key, {"nobody"}}}), InputError);
}

TEST_CASE("a strict policy yields no rules and still terminates") {
  PatternTable p = fixtures::planted_patterns();
  RelevancePolicy strict;
  strict.min_support = 1000;
  PolicyRun run = run_policy(start(p), strict, {});
  CHECK(run.state.phase == Phase::Terminated);
  Report r = final_report(run.state);
  CHECK(r.rules.empty());
  CHECK(r.generalizations.empty());
  CHECK_FALSE(r.notes.empty());
}

TEST_CASE("replaying a recorded trace reaches the same state") {
  PatternTable p = fixtures::planted_patterns(true);
  SessionState s0 = start(p);
  PolicyRun run = run_policy(s0, {}, {});
  SessionState again = replay(s0, run.trace);
  CHECK(again.cycle == run.state.cycle);
  CHECK(again.excised_records == run.state.excised_records);
  CHECK(again.insight_ideal.generators() == run.state.insight_ideal.generators());
  CHECK(again.empty_ideal.generators() == run.state.empty_ideal.generators());
  auto a = docs::dump(docs::report_to_json(final_report(run.state, {"x", {}})));
  auto b = docs::dump(docs::report_to_json(final_report(again, {"x", {}})));
  CHECK(a == b);
}

TEST_CASE("trace mismatches name the cycle and phase") {
  PatternTable p = fixtures::planted_patterns(true);
  const VariableTable &v = p.vars();
  SessionState s0 = start(p);

  DecisionTrace bad_insight{{TraceCycle{1, {{parse_poly("AGD", v)}}, {}}}};
  try {
    replay(s0, bad_insight);
    FAIL("expected a mismatch");
  } catch (const TraceMismatch &e) {
    CHECK(e.cycle() == 1);
    CHECK(e.phase() == "insight");
  }

  DecisionTrace bad_exception{{TraceCycle{1, {}, {{"", {"nobody"}}}}}};
  try {
    replay(s0, bad_exception);
    FAIL("expected a mismatch");
  } catch (const TraceMismatch &e) {
    CHECK(e.cycle() == 1);
    CHECK(e.phase() == "exception");
  }

  DecisionTrace too_long{{TraceCycle{1, {}, {}}, TraceCycle{5, {{parse_poly("Bs", v)}}, {}}}};
  CHECK_THROWS_AS(replay(s0, too_long), TraceMismatch);
}

TEST_CASE("empty decisions walk the phases to termination") {
  PatternTable p = fixtures::planted_patterns();
  SessionState s = start(p);
  s = decide_insights(s, {});
  CHECK(s.phase == Phase::AwaitingExceptions);
  s = decide_exceptions(s, {});
  CHECK(s.phase == Phase::Terminated);
  CHECK(final_report(s).insight_basis.empty());
  CHECK(s.trace.cycles.size() == 1);
}

TEST_CASE("summary line") {
  CHECK(summary_line(fixtures::planted_patterns()) == "200 records, 50 positive, 16 patterns, 2^16 empty criteria");
  CHECK(summary_line(fixtures::random_patterns(194, 1)).find("194 patterns, 2^830 empty criteria") !=
        std::string::npos);
}

TEST_CASE("verification catches tampered counts") {
  RecordTable records = fixtures::planted_records();
  PatternTable p = binarize(records, fixtures::planted_thresholds());
  Report r = final_report(run_policy(start(p), {}, {}).state);
  REQUIRE_FALSE(r.rules.empty());
  r.rules[0].support += 1;
  VerificationResult vr = verify_rules(r, records, fixtures::planted_thresholds());
  CHECK_FALSE(vr.ok());
  CHECK(vr.mismatches.size() == 1);
}
