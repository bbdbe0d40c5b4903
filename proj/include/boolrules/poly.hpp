#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boolrules/monomial.hpp"

namespace boolrules {

class VariableTable;

/// Element of the Boolean ring GF(2)[v_1..v_n]/(v_i^2 + v_i): a set of
/// distinct squarefree monomials (coefficient 1 means present).
///
/// Monomials are kept sorted by raw bits, which makes sums a linear
/// symmetric-difference merge and equality a vector compare. Monomial
/// orders only matter for leading terms and rendering.
class BoolPoly {
public:
  BoolPoly() = default;

  static BoolPoly zero() { return {}; }
  static BoolPoly one() { return BoolPoly(Monomial::one()); }
  static BoolPoly variable(std::size_t index) { return BoolPoly(Monomial::variable(index)); }
  explicit BoolPoly(Monomial m) : terms_{m} {}

  /// Sums the given monomials mod 2; repeated monomials cancel in pairs.
  static BoolPoly from_terms(std::vector<Monomial> terms);
  /// Adopts terms already sorted ascending and duplicate-free.
  static BoolPoly from_sorted_unique(std::vector<Monomial> terms);

  const std::vector<Monomial> &terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_one() const noexcept { return terms_.size() == 1 && terms_.front().is_one(); }
  bool contains(Monomial m) const;

  /// Union of the variables of all terms.
  std::uint64_t support() const noexcept;
  bool involves(std::size_t index) const noexcept { return (support() >> index) & 1U; }
  int degree() const noexcept;

  bool evaluate(std::uint64_t assignment) const noexcept;

  BoolPoly &operator+=(const BoolPoly &other);
  friend BoolPoly operator+(const BoolPoly &a, const BoolPoly &b);
  friend BoolPoly operator*(const BoolPoly &a, const BoolPoly &b);
  friend BoolPoly operator*(const BoolPoly &a, Monomial m);
  friend bool operator==(const BoolPoly &, const BoolPoly &) = default;
  friend auto operator<=>(const BoolPoly &a, const BoolPoly &b) { return a.terms_ <=> b.terms_; }

private:
  std::vector<Monomial> terms_;
};

BoolPoly poly_add(const BoolPoly &p, const BoolPoly &q);
BoolPoly poly_mul(const BoolPoly &p, const BoolPoly &q);

/// Evaluates with every variable defined.
bool poly_eval(const BoolPoly &p, std::uint64_t assignment);
/// Evaluates a partial assignment; throws InputError when `p` uses a
/// variable outside `defined`.
bool poly_eval(const BoolPoly &p, std::uint64_t values, std::uint64_t defined);

Monomial leading_monomial(const BoolPoly &p, const MonomialOrder &order);

/// Truth table over variables 0..n-1 (entry a is p evaluated at bits of a).
std::vector<std::uint8_t> truth_table(const BoolPoly &p, int n);
/// Moebius transform of a truth table with 2^n entries, n <= 20.
BoolPoly anf_from_truth_table(std::span<const std::uint8_t> table, int n);

inline constexpr int kMaxTruthTableVariables = 20;

/// Textual syntax: variables by code letter, juxtaposition or `*` for the
/// product, `+` for the sum, parentheses, and the constants 0 and 1.
BoolPoly parse_poly(std::string_view text, const VariableTable &vars);

/// Canonical rendering: terms in descending `order`, variables inside a
/// term in table order, " + " between terms, "0" for zero.
std::string format_poly(const BoolPoly &p, const VariableTable &vars, const MonomialOrder &order);
/// Canonical rendering under the standard degree-lex order.
std::string format_poly(const BoolPoly &p, const VariableTable &vars);
std::string format_monomial(Monomial m, const VariableTable &vars, std::string_view sep = "");

/// Terms sorted descending under `order`.
std::vector<Monomial> sorted_terms(const BoolPoly &p, const MonomialOrder &order);

} // namespace boolrules
