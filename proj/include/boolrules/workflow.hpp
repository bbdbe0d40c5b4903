#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "boolrules/dataset.hpp"
#include "boolrules/ideal.hpp"
#include "boolrules/rules.hpp"

namespace boolrules {

enum class Phase { AwaitingInsights, AwaitingExceptions, Terminated };

std::string_view to_string(Phase phase);

/// A class-containing basis element of the empty-criteria ideal, its
/// remainder modulo the insight ideal, and the rules that remainder carries
/// on the active records.
struct InsightCandidate {
  BoolPoly source;
  BoolPoly remainder;
  std::vector<Rule> rules;

  std::size_t max_support() const noexcept;
  int min_variables() const noexcept;
};

/// An active pattern and the remainder of its indicator modulo the
/// empty-criteria ideal.
struct ExceptionCandidate {
  std::uint64_t bits = 0;
  std::string key;
  BoolPoly remainder;
  std::vector<std::string> record_ids;

  std::size_t multiplicity() const noexcept { return record_ids.size(); }
};

/// Accept a pattern as an exception. An empty `key` is resolved from the
/// record ids; empty `record_ids` means every active record of the pattern.
struct ExceptionDecision {
  std::string key;
  std::vector<std::string> record_ids;
};

struct TraceCycle {
  int cycle = 1;
  /// One entry per inner round that accepted something.
  std::vector<std::vector<BoolPoly>> insight_rounds;
  std::vector<ExceptionDecision> exceptions;
};

struct DecisionTrace {
  std::vector<TraceCycle> cycles;
};

/// Workflow snapshot. Transitions return new values; ideals share
/// structure with the previous snapshot.
struct SessionState {
  int cycle = 1;
  int round = 1;
  Phase phase = Phase::AwaitingInsights;
  PatternTable all_patterns;
  PatternTable active_patterns;
  std::set<std::string> excised_records;
  Ideal empty_ideal;   // criteria selecting no active record
  Ideal insight_ideal; // accepted insights
  std::vector<InsightCandidate> insights;
  std::vector<ExceptionCandidate> exceptions;
  DecisionTrace trace;

  const VariableTable &vars() const noexcept { return all_patterns.vars(); }
  const MonomialOrder &order() const noexcept { return empty_ideal.order(); }
};

SessionState start_session(const PatternTable &patterns, const MonomialOrder &order);

const std::vector<InsightCandidate> &insight_candidates(const SessionState &state);
const std::vector<ExceptionCandidate> &exception_candidates(const SessionState &state);

/// Adds accepted polynomials (candidate sources or their remainders) to the
/// insight ideal. Accepting nothing ends the inner loop.
SessionState decide_insights(const SessionState &state, const std::vector<BoolPoly> &accepted);

/// Turns accepted patterns into non-observations. Accepting nothing ends
/// the run.
SessionState decide_exceptions(const SessionState &state, const std::vector<ExceptionDecision> &accepted);

struct RelevancePolicy {
  std::size_t min_support = 20;
  int max_variables = 5;
};

struct ExceptionPolicy {
  std::size_t max_monomials = 2;
  std::size_t max_multiplicity = 2;
  std::optional<int> max_variables;
};

/// Supplies the expert's choices at each phase.
class DecisionProvider {
public:
  virtual ~DecisionProvider() = default;
  virtual std::vector<BoolPoly> choose_insights(const SessionState &state) = 0;
  virtual std::vector<ExceptionDecision> choose_exceptions(const SessionState &state) = 0;
};

class PolicyProvider : public DecisionProvider {
public:
  PolicyProvider(RelevancePolicy relevance, ExceptionPolicy exceptions)
      : relevance_(relevance), exceptions_(exceptions) {}

  std::vector<BoolPoly> choose_insights(const SessionState &state) override;
  std::vector<ExceptionDecision> choose_exceptions(const SessionState &state) override;

  bool relevant(const InsightCandidate &c) const;
  bool exceptional(const ExceptionCandidate &c, const VariableTable &vars) const;

private:
  RelevancePolicy relevance_;
  ExceptionPolicy exceptions_;
};

class TraceProvider : public DecisionProvider {
public:
  explicit TraceProvider(DecisionTrace trace) : trace_(std::move(trace)) {}

  std::vector<BoolPoly> choose_insights(const SessionState &state) override;
  std::vector<ExceptionDecision> choose_exceptions(const SessionState &state) override;

  /// Throws TraceMismatch when cycles were left unused.
  void finish(const SessionState &state) const;

private:
  const TraceCycle *cycle_entry(int cycle) const;
  DecisionTrace trace_;
};

/// Drives the session to termination.
SessionState run(SessionState state, DecisionProvider &provider);

struct PolicyRun {
  SessionState state;
  DecisionTrace trace;
};

PolicyRun run_policy(const SessionState &state, const RelevancePolicy &relevance,
                     const ExceptionPolicy &exceptions);

/// Re-applies recorded decisions; throws TraceMismatch naming cycle and
/// phase when a decision was not among the presented candidates.
SessionState replay(const SessionState &state, const DecisionTrace &trace);

struct ReportSummary {
  std::size_t records = 0;
  std::size_t positives = 0;
  std::size_t patterns = 0;
  std::uint64_t unobserved_exponent = 0;
};

/// Provenance recorded alongside the rules.
struct ReportContext {
  std::string decision_source; // e.g. "policy min_support=20 ..." or "trace"
  std::optional<Thresholds> thresholds;
};

struct Report {
  VariableTable vars;
  MonomialOrder order;
  ReportSummary summary;
  int cycles = 0;
  std::vector<std::string> excised_records;
  std::vector<BoolPoly> insight_basis;
  std::vector<Rule> rules;
  std::vector<Rule> generalizations;
  DecisionTrace trace;
  ReportContext context;
  std::vector<std::string> notes;
};

/// Rules of the final insight basis, counted on all records (so excised
/// records show up as exceptions), plus their generalizations.
Report final_report(const SessionState &state, ReportContext context = {});

struct VerificationResult {
  std::size_t rules_checked = 0;
  std::vector<std::string> mismatches;

  bool ok() const noexcept { return mismatches.empty(); }
};

/// Recounts every rule by evaluating its criterion on freshly binarized
/// records, bypassing pattern tables and ideals.
VerificationResult verify_rules(const Report &report, const RecordTable &records, const Thresholds &cuts);

/// One-line dataset summary, e.g. "390 records, 137 positive, 194 patterns,
/// 2^830 empty criteria".
std::string summary_line(const PatternTable &patterns);

} // namespace boolrules
