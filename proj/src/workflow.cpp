#include "boolrules/workflow.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "boolrules/error.hpp"

namespace boolrules {

std::string_view to_string(Phase phase) {
  switch (phase) {
  case Phase::AwaitingInsights:
    return "insight";
  case Phase::AwaitingExceptions:
    return "exception";
  case Phase::Terminated:
    return "terminated";
  }
  return "?";
}

std::size_t InsightCandidate::max_support() const noexcept {
  std::size_t best = 0;
  for (const Rule &r : rules)
    best = std::max(best, r.support);
  return best;
}

int InsightCandidate::min_variables() const noexcept {
  int best = 64;
  for (const Rule &r : rules)
    best = std::min(best, r.variable_count());
  return best;
}

namespace {

std::vector<InsightCandidate> compute_insights(const SessionState &state) {
  const std::size_t s = state.vars().class_index();
  const GroebnerBasis &gb_i = state.empty_ideal.basis();
  std::vector<BoolPoly> sources;
  for (const BoolPoly &g : gb_i.elements)
    if (g.involves(s))
      sources.push_back(g);
  const std::vector<BoolPoly> rems = remainders_mod(sources, state.insight_ideal);

  std::vector<InsightCandidate> out;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const BoolPoly &r = rems[i];
    if (r.is_zero() || !r.involves(s))
      continue;
    if (!normal_form(r, gb_i).is_zero())
      throw StateError("remainder left the empty-criteria ideal");
    std::vector<Rule> rules = extract_rules(r, state.active_patterns, state.cycle);
    if (rules.empty())
      continue;
    out.push_back({sources[i], r, std::move(rules)});
  }
  const VariableTable &vars = state.vars();
  const MonomialOrder &order = state.order();
  std::stable_sort(out.begin(), out.end(), [&](const InsightCandidate &a, const InsightCandidate &b) {
    if (a.max_support() != b.max_support())
      return a.max_support() > b.max_support();
    if (a.min_variables() != b.min_variables())
      return a.min_variables() < b.min_variables();
    return format_poly(a.source, vars, order) < format_poly(b.source, vars, order);
  });
  return out;
}

std::vector<ExceptionCandidate> compute_exceptions(const SessionState &state) {
  const auto &patterns = state.active_patterns.patterns();
  std::vector<BoolPoly> indicators;
  indicators.reserve(patterns.size());
  for (const Pattern &p : patterns)
    indicators.push_back(pattern_indicator(p.bits, state.vars()));
  const std::vector<BoolPoly> rems = remainders_mod(indicators, state.empty_ideal);
  std::vector<ExceptionCandidate> out;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (rems[i].is_zero())
      continue;
    out.push_back({patterns[i].bits, state.active_patterns.key(patterns[i].bits), rems[i],
                   patterns[i].record_ids});
  }
  std::stable_sort(out.begin(), out.end(), [](const ExceptionCandidate &a, const ExceptionCandidate &b) {
    if (a.remainder.size() != b.remainder.size())
      return a.remainder.size() < b.remainder.size();
    if (a.multiplicity() != b.multiplicity())
      return a.multiplicity() < b.multiplicity();
    return a.key < b.key;
  });
  return out;
}

TraceCycle &current_trace_cycle(SessionState &state) {
  if (state.trace.cycles.empty() || state.trace.cycles.back().cycle != state.cycle)
    state.trace.cycles.push_back(TraceCycle{state.cycle, {}, {}});
  return state.trace.cycles.back();
}

} // namespace

SessionState start_session(const PatternTable &patterns, const MonomialOrder &order) {
  if (patterns.empty())
    throw InputError("cannot start a session without observed patterns");
  if (order.variable_count() != patterns.vars().size())
    throw InputError("monomial order does not match the variable table");
  SessionState state;
  state.all_patterns = patterns;
  state.active_patterns = patterns;
  state.empty_ideal = ideal_from_patterns(patterns, order, "I");
  state.insight_ideal = Ideal("J", order);
  state.phase = Phase::AwaitingInsights;
  state.insights = compute_insights(state);
  return state;
}

const std::vector<InsightCandidate> &insight_candidates(const SessionState &state) {
  if (state.phase != Phase::AwaitingInsights)
    throw StateError("insight candidates requested in the " + std::string(to_string(state.phase)) +
                     " phase");
  return state.insights;
}

const std::vector<ExceptionCandidate> &exception_candidates(const SessionState &state) {
  if (state.phase != Phase::AwaitingExceptions)
    throw StateError("exception candidates requested in the " + std::string(to_string(state.phase)) +
                     " phase");
  return state.exceptions;
}

SessionState decide_insights(const SessionState &state, const std::vector<BoolPoly> &accepted) {
  if (state.phase != Phase::AwaitingInsights)
    throw StateError("insight decision in the " + std::string(to_string(state.phase)) + " phase");
  std::vector<BoolPoly> chosen;
  for (const BoolPoly &p : accepted) {
    auto it = std::find_if(state.insights.begin(), state.insights.end(), [&](const InsightCandidate &c) {
      return c.source == p || c.remainder == p;
    });
    if (it == state.insights.end())
      throw InputError("'" + format_poly(p, state.vars(), state.order()) +
                       "' is not a presented insight candidate");
    if (std::find(chosen.begin(), chosen.end(), p) == chosen.end())
      chosen.push_back(p);
  }

  SessionState next = state;
  if (chosen.empty()) {
    next.phase = Phase::AwaitingExceptions;
    next.insights.clear();
    next.exceptions = compute_exceptions(next);
    return next;
  }
  current_trace_cycle(next).insight_rounds.push_back(chosen);
  next.insight_ideal = state.insight_ideal.extend(chosen);
  ++next.round;
  next.insights = compute_insights(next);
  return next;
}

SessionState decide_exceptions(const SessionState &state, const std::vector<ExceptionDecision> &accepted) {
  if (state.phase != Phase::AwaitingExceptions)
    throw StateError("exception decision in the " + std::string(to_string(state.phase)) + " phase");

  SessionState next = state;
  std::vector<BoolPoly> new_generators;
  std::vector<ExceptionDecision> recorded;
  for (const ExceptionDecision &d : accepted) {
    const Pattern *pattern = nullptr;
    if (!d.key.empty()) {
      pattern = state.active_patterns.find(state.active_patterns.bits_from_key(d.key));
    } else {
      if (d.record_ids.empty())
        throw InputError("exception decision names neither a pattern nor records");
      pattern = state.active_patterns.find_record(d.record_ids.front());
    }
    if (pattern == nullptr)
      throw InputError("exception decision does not match an active pattern");
    const std::string key = state.active_patterns.key(pattern->bits);
    auto cand = std::find_if(state.exceptions.begin(), state.exceptions.end(),
                             [&](const ExceptionCandidate &c) { return c.bits == pattern->bits; });
    if (cand == state.exceptions.end())
      throw InputError("pattern " + key + " has a zero remainder and cannot be an exception");

    std::vector<std::string> ids = d.record_ids.empty() ? pattern->record_ids : d.record_ids;
    std::sort(ids.begin(), ids.end());
    for (const auto &id : ids) {
      if (std::find(pattern->record_ids.begin(), pattern->record_ids.end(), id) ==
          pattern->record_ids.end())
        throw InputError("record '" + id + "' is not an active record of pattern " + key);
      next.excised_records.insert(id);
    }
    const bool whole = std::all_of(pattern->record_ids.begin(), pattern->record_ids.end(),
                                   [&](const std::string &id) { return next.excised_records.contains(id); });
    // Only a pattern with no records left becomes a non-observation.
    if (whole)
      new_generators.push_back(cand->remainder);
    recorded.push_back({key, ids});
  }

  if (recorded.empty()) {
    current_trace_cycle(next);
    next.phase = Phase::Terminated;
    next.exceptions.clear();
    return next;
  }
  current_trace_cycle(next).exceptions = recorded;
  next.active_patterns = state.all_patterns.without_records(next.excised_records);
  if (next.active_patterns.empty())
    throw InputError("accepting these exceptions would remove every record");
  next.empty_ideal = state.empty_ideal.extend(new_generators);
  for (const BoolPoly &j : next.insight_ideal.generators())
    if (!membership(j, next.empty_ideal))
      throw StateError("insight ideal is no longer contained in the empty-criteria ideal");
  ++next.cycle;
  next.round = 1;
  next.phase = Phase::AwaitingInsights;
  next.exceptions.clear();
  next.insights = compute_insights(next);
  return next;
}

bool PolicyProvider::relevant(const InsightCandidate &c) const {
  return std::any_of(c.rules.begin(), c.rules.end(), [this](const Rule &r) {
    return r.support >= relevance_.min_support && r.variable_count() <= relevance_.max_variables;
  });
}

bool PolicyProvider::exceptional(const ExceptionCandidate &c, const VariableTable &vars) const {
  if (c.remainder.size() > exceptions_.max_monomials || c.multiplicity() > exceptions_.max_multiplicity)
    return false;
  if (exceptions_.max_variables) {
    const int vars_used = std::popcount(c.remainder.support() & vars.feature_mask());
    if (vars_used > *exceptions_.max_variables)
      return false;
  }
  return true;
}

std::vector<BoolPoly> PolicyProvider::choose_insights(const SessionState &state) {
  std::vector<BoolPoly> out;
  for (const InsightCandidate &c : insight_candidates(state))
    if (relevant(c))
      out.push_back(c.source);
  return out;
}

std::vector<ExceptionDecision> PolicyProvider::choose_exceptions(const SessionState &state) {
  std::vector<ExceptionDecision> out;
  for (const ExceptionCandidate &c : exception_candidates(state))
    if (exceptional(c, state.vars()))
      out.push_back({c.key, {}});
  return out;
}

const TraceCycle *TraceProvider::cycle_entry(int cycle) const {
  for (const TraceCycle &c : trace_.cycles)
    if (c.cycle == cycle)
      return &c;
  return nullptr;
}

std::vector<BoolPoly> TraceProvider::choose_insights(const SessionState &state) {
  const TraceCycle *c = cycle_entry(state.cycle);
  if (c == nullptr || state.round > static_cast<int>(c->insight_rounds.size()))
    return {};
  return c->insight_rounds[static_cast<std::size_t>(state.round - 1)];
}

std::vector<ExceptionDecision> TraceProvider::choose_exceptions(const SessionState &state) {
  const TraceCycle *c = cycle_entry(state.cycle);
  return c == nullptr ? std::vector<ExceptionDecision>{} : c->exceptions;
}

void TraceProvider::finish(const SessionState &state) const {
  for (const TraceCycle &c : trace_.cycles)
    if (c.cycle > state.cycle && (!c.insight_rounds.empty() || !c.exceptions.empty()))
      throw TraceMismatch(c.cycle, "insight", "run terminated before this cycle");
}

SessionState run(SessionState state, DecisionProvider &provider) {
  while (state.phase != Phase::Terminated) {
    if (state.phase == Phase::AwaitingInsights) {
      auto chosen = provider.choose_insights(state);
      try {
        state = decide_insights(state, chosen);
      } catch (const TraceMismatch &) {
        throw;
      } catch (const InputError &e) {
        throw TraceMismatch(state.cycle, "insight", e.what());
      }
    } else {
      auto chosen = provider.choose_exceptions(state);
      try {
        state = decide_exceptions(state, chosen);
      } catch (const TraceMismatch &) {
        throw;
      } catch (const InputError &e) {
        throw TraceMismatch(state.cycle, "exception", e.what());
      }
    }
  }
  return state;
}

PolicyRun run_policy(const SessionState &state, const RelevancePolicy &relevance,
                     const ExceptionPolicy &exceptions) {
  PolicyProvider provider(relevance, exceptions);
  SessionState final_state = run(state, provider);
  DecisionTrace trace = final_state.trace;
  return {std::move(final_state), std::move(trace)};
}

SessionState replay(const SessionState &state, const DecisionTrace &trace) {
  TraceProvider provider(trace);
  SessionState out = run(state, provider);
  provider.finish(out);
  return out;
}

Report final_report(const SessionState &state, ReportContext context) {
  if (state.phase != Phase::Terminated)
    throw StateError("report requested before the session terminated");
  Report report;
  report.vars = state.vars();
  report.order = state.order();
  const PatternTable &all = state.all_patterns;
  report.summary = {all.record_count(), all.positive_count(), all.observed_count(),
                    all.unobserved_count()};
  report.cycles = state.cycle;
  report.excised_records.assign(state.excised_records.begin(), state.excised_records.end());
  report.trace = state.trace;
  report.context = std::move(context);

  const std::size_t s = report.vars.class_index();
  const GroebnerBasis &gb_j = state.insight_ideal.basis();
  report.insight_basis = gb_j.elements;
  for (const BoolPoly &g : gb_j.elements) {
    if (!g.involves(s))
      continue;
    for (Rule &r : extract_rules(g, all, state.cycle))
      report.rules.push_back(std::move(r));
  }
  if (report.rules.empty())
    report.notes.push_back("no class rules: the insight ideal has no basis element containing the class "
                           "variable");

  std::set<std::pair<Polarity, BoolPoly>> seen;
  for (const Rule &r : report.rules)
    seen.insert({r.polarity, r.criterion});
  for (const Rule &r : report.rules) {
    for (Rule &gen : generalize(r, all)) {
      if (seen.insert({gen.polarity, gen.criterion}).second)
        report.generalizations.push_back(std::move(gen));
    }
  }
  return report;
}

VerificationResult verify_rules(const Report &report, const RecordTable &records, const Thresholds &cuts) {
  if (!(report.vars == records.vars))
    throw InputError("report and records use different variable tables");
  VerificationResult result;
  std::vector<std::uint64_t> bits;
  bits.reserve(records.size());
  for (const Record &r : records.records)
    bits.push_back(binarize_record(r, records.vars, cuts));

  if (report.context.thresholds) {
    const Thresholds &t = *report.context.thresholds;
    if (t.cuts != cuts.cuts)
      result.mismatches.push_back("thresholds recorded in the report differ from the supplied cuts");
  }
  if (report.summary.records != records.size())
    result.mismatches.push_back("report counts " + std::to_string(report.summary.records) +
                                " records, data has " + std::to_string(records.size()));

  auto check = [&](const Rule &rule, const std::string &where) {
    ++result.rules_checked;
    std::size_t support = 0, agree = 0;
    std::vector<std::string> exceptions;
    const bool want_positive = rule.polarity == Polarity::Positive;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!rule.criterion.evaluate(bits[i]))
        continue;
      ++support;
      if (records.records[i].positive == want_positive)
        ++agree;
      else
        exceptions.push_back(records.records[i].id);
    }
    std::sort(exceptions.begin(), exceptions.end());
    const std::string name =
        where + " " + std::string(to_string(rule.polarity)) + " " + format_factored(rule.factors, report.vars);
    if (support != rule.support)
      result.mismatches.push_back(name + ": support " + std::to_string(rule.support) + " recorded, " +
                                  std::to_string(support) + " recomputed");
    if (agree != rule.agree)
      result.mismatches.push_back(name + ": agreement " + std::to_string(rule.agree) + " recorded, " +
                                  std::to_string(agree) + " recomputed");
    std::vector<std::string> recorded = rule.exception_ids;
    std::sort(recorded.begin(), recorded.end());
    if (recorded != exceptions)
      result.mismatches.push_back(name + ": exception list differs");
  };
  for (const Rule &r : report.rules)
    check(r, "rule");
  for (const Rule &r : report.generalizations)
    check(r, "generalization");
  return result;
}

std::string summary_line(const PatternTable &patterns) {
  return std::to_string(patterns.record_count()) + " records, " + std::to_string(patterns.positive_count()) +
         " positive, " + std::to_string(patterns.observed_count()) + " patterns, 2^" +
         std::to_string(patterns.unobserved_count()) + " empty criteria";
}

} // namespace boolrules
