#pragma once

#include <optional>
#include <string>
#include <vector>

#include "boolrules/dataset.hpp"
#include "boolrules/poly.hpp"

namespace boolrules {

enum class Polarity { Positive, Negative };

std::string_view to_string(Polarity p);
Polarity parse_polarity(std::string_view text);

/// p = with_class * s + without_class, neither part mentioning s.
struct ClassSplit {
  BoolPoly with_class;
  BoolPoly without_class;
};

ClassSplit split_on_class(const BoolPoly &p, std::size_t class_index);

/// Records selected by a class-free criterion.
struct Selection {
  std::size_t support = 0;
  std::size_t class_positive = 0;
  std::vector<std::string> record_ids;          // sorted
  std::vector<std::string> positive_record_ids; // sorted
};

Selection count_selection(const BoolPoly &criterion, const PatternTable &patterns);
/// Pattern-by-pattern loop, the reference for count_selection.
Selection count_selection_reference(const BoolPoly &criterion, const PatternTable &patterns);

struct RuleProvenance {
  BoolPoly source;
  int cycle = 0;
  std::optional<BoolPoly> parent; // set on generalizations
};

/// "Records selected by `criterion` are class-positive" (Positive) or
/// "... are class-negative" (Negative), with the records that violate it.
struct Rule {
  Polarity polarity = Polarity::Positive;
  BoolPoly criterion;
  std::vector<BoolPoly> factors; // disjoint supports, product == criterion
  std::size_t support = 0;
  std::size_t agree = 0;
  std::vector<std::string> exception_ids;
  RuleProvenance provenance;

  std::size_t class_positive() const noexcept {
    return polarity == Polarity::Positive ? agree : exception_ids.size();
  }
  /// Distinct variables of the criterion.
  int variable_count() const noexcept;
};

/// Builds a rule and fills in support, agreement and exceptions.
Rule make_rule(Polarity polarity, const BoolPoly &criterion, const PatternTable &patterns,
               RuleProvenance provenance = {});

/// Rules carried by a class-containing polynomial: the positive criterion
/// B and the negative criterion A(1 + B) for p = A s + B, each kept only if
/// it selects at least one record.
std::vector<Rule> extract_rules(const BoolPoly &p, const PatternTable &patterns, int cycle = 0);

inline constexpr int kMaxFactorVariables = 16;

/// Finest factorization into factors with pairwise disjoint supports.
/// Polynomials over more than kMaxFactorVariables variables are returned
/// whole. Factors come in display order.
std::vector<BoolPoly> factor_disjoint(const BoolPoly &p, const VariableTable &vars);

/// Sub-products of a rule's factors, each recounted; equal criteria are
/// reported once.
std::vector<Rule> generalize(const Rule &rule, const PatternTable &patterns);

/// "T (y + 1) (L + M)": factors separated by spaces, multi-term factors
/// parenthesized unless alone, terms inside a factor in lex order.
std::string format_factored(const std::vector<BoolPoly> &factors, const VariableTable &vars);
/// "neg 45(1) T (y + 1) (L + M)".
std::string format_rule(const Rule &rule, const VariableTable &vars);

} // namespace boolrules
