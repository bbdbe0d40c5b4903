#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace boolrules {

class VariableTable;

/// Squarefree monomial: the set of variables it contains, one bit per
/// VariableTable position. The empty set is the monomial 1.
class Monomial {
public:
  constexpr Monomial() = default;
  constexpr explicit Monomial(std::uint64_t bits) : bits_(bits) {}

  static constexpr Monomial one() { return Monomial{}; }
  static constexpr Monomial variable(std::size_t index) { return Monomial{std::uint64_t{1} << index}; }

  constexpr std::uint64_t bits() const noexcept { return bits_; }
  constexpr int degree() const noexcept { return std::popcount(bits_); }
  constexpr bool is_one() const noexcept { return bits_ == 0; }
  constexpr bool contains(std::size_t index) const noexcept { return (bits_ >> index) & 1U; }

  /// True when this monomial divides `other` (subset test).
  constexpr bool divides(Monomial other) const noexcept { return (bits_ & ~other.bits_) == 0; }

  /// Evaluates to 1 under `assignment` (bit i = value of variable i).
  constexpr bool satisfied_by(std::uint64_t assignment) const noexcept {
    return (bits_ & ~assignment) == 0;
  }

  friend constexpr bool operator==(Monomial, Monomial) = default;
  /// Raw bit order; storage order only, not a monomial order.
  friend constexpr auto operator<=>(Monomial a, Monomial b) { return a.bits_ <=> b.bits_; }

private:
  std::uint64_t bits_ = 0;
};

/// Idempotent product: union of the variable sets.
constexpr Monomial mono_mul(Monomial a, Monomial b) { return Monomial{a.bits() | b.bits()}; }
/// Least common multiple, identical to the product in a Boolean ring.
constexpr Monomial mono_lcm(Monomial a, Monomial b) { return mono_mul(a, b); }
/// `a / b` for `b | a`: the variables of a not in b.
constexpr Monomial mono_quotient(Monomial a, Monomial b) { return Monomial{a.bits() & ~b.bits()}; }

enum class OrderKind { DegLex, DegRevLex, Lex };

std::string_view to_string(OrderKind kind);
OrderKind parse_order_kind(std::string_view text);

/// A monomial order over a fixed variable precedence.
///
/// Internally monomials are remapped into "rank space", where the highest
/// precedence variable occupies the most significant used bit. In rank space
/// lex is plain integer comparison, so every order reduces to a popcount and
/// one or two word comparisons.
class MonomialOrder {
public:
  MonomialOrder() = default;

  /// `precedence` lists variable indices from highest to lowest.
  MonomialOrder(OrderKind kind, std::vector<std::size_t> precedence);

  /// Table order with the class variable last (it already is last in a
  /// VariableTable).
  static MonomialOrder standard(const VariableTable &vars, OrderKind kind = OrderKind::DegLex);

  OrderKind kind() const noexcept { return kind_; }
  const std::vector<std::size_t> &precedence() const noexcept { return precedence_; }
  std::size_t variable_count() const noexcept { return precedence_.size(); }

  /// Three-way comparison of monomials under this order.
  std::strong_ordering compare(Monomial a, Monomial b) const {
    return compare_ranked(to_rank(a), to_rank(b));
  }
  bool less(Monomial a, Monomial b) const { return compare(a, b) < 0; }

  std::uint64_t to_rank(Monomial m) const noexcept;
  Monomial from_rank(std::uint64_t ranked) const noexcept;

  std::strong_ordering compare_ranked(std::uint64_t a, std::uint64_t b) const noexcept {
    if (kind_ == OrderKind::Lex)
      return a <=> b;
    int da = std::popcount(a), db = std::popcount(b);
    if (da != db)
      return da <=> db;
    if (kind_ == OrderKind::DegLex)
      return a <=> b;
    // Reverse lex on equal degree: at the lowest-precedence differing
    // variable, the monomial that lacks it is larger.
    std::uint64_t diff = a ^ b;
    if (diff == 0)
      return std::strong_ordering::equal;
    std::uint64_t lowest = diff & (~diff + 1);
    return (a & lowest) ? std::strong_ordering::less : std::strong_ordering::greater;
  }

  /// e.g. "deglex:EFGLMyPxTs" given the table, for documents.
  std::string describe(const VariableTable &vars) const;
  static MonomialOrder parse(std::string_view descriptor, const VariableTable &vars);

  friend bool operator==(const MonomialOrder &a, const MonomialOrder &b) {
    return a.kind_ == b.kind_ && a.precedence_ == b.precedence_;
  }

private:
  OrderKind kind_ = OrderKind::DegLex;
  std::vector<std::size_t> precedence_;
  // rank_of_var_[v] is the bit position of variable v in rank space.
  std::vector<int> rank_of_var_;
};

} // namespace boolrules
