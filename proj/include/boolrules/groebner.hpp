#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "boolrules/monomial.hpp"
#include "boolrules/poly.hpp"

namespace boolrules {

struct BuchbergerStats {
  std::size_t ordinary_pairs = 0;
  std::size_t field_pairs = 0;
  std::size_t coprime_skipped = 0;
  std::size_t zero_reductions = 0;
  std::size_t elements_before_interreduction = 0;
  /// Set when the basis came from the zero set rather than from pairs.
  bool from_points = false;
  std::size_t points = 0;
};

struct BuchbergerOptions {
  /// Skip ordinary pairs with coprime leading monomials. Never applied to
  /// field-relation pairs.
  bool product_criterion = true;
};

/// Gröbner basis of an ideal of the Boolean ring for a fixed order.
/// Elements are sorted ascending by leading monomial.
struct GroebnerBasis {
  std::vector<BoolPoly> elements;
  MonomialOrder order;
  bool reduced = false;
  BuchbergerStats stats;

  bool empty() const noexcept { return elements.empty(); }
  std::size_t size() const noexcept { return elements.size(); }
  bool is_unit() const noexcept { return elements.size() == 1 && elements.front().is_one(); }
  std::vector<Monomial> leading_monomials() const;
};

/// Remainder of multivariate division in the Boolean ring: no term of the
/// result is divisible by a leading monomial of `basis`, and p minus the
/// result lies in the ideal generated by `basis`.
BoolPoly normal_form(const BoolPoly &p, std::span<const BoolPoly> basis, const MonomialOrder &order);
BoolPoly normal_form(const BoolPoly &p, const GroebnerBasis &basis);

/// (lcm/lm f) f + (lcm/lm g) g with idempotent cofactor products.
BoolPoly s_polynomial(const BoolPoly &f, const BoolPoly &g, const MonomialOrder &order);

/// Buchberger's algorithm in the quotient ring. Besides ordinary
/// S-polynomials, every element g and every variable v of lm(g) contributes
/// the obligation v*g -> 0, which stands in for the field relations
/// v^2 + v. The result is interreduced, hence the unique reduced basis.
GroebnerBasis buchberger(std::span<const BoolPoly> generators, const MonomialOrder &order,
                         const BuchbergerOptions &options = {});

/// Reduced basis of the ideal of all polynomials vanishing on `points`
/// (assignments as bitmasks), by incremental linear algebra over GF(2) on
/// evaluation vectors: monomials are visited in increasing order and each
/// one either joins the standard monomials or closes a basis element.
GroebnerBasis vanishing_basis(std::span<const std::uint64_t> points, const MonomialOrder &order);

/// Assignments where every generator vanishes (n <= kMaxTruthTableVariables).
std::vector<std::uint64_t> common_zeros(std::span<const BoolPoly> generators, std::size_t n);

inline constexpr std::size_t kMaxPointsForVanishingBasis = 4096;

/// Reduced basis by whichever route is cheaper: through the common zero set
/// when the ring is small enough to enumerate it, otherwise Buchberger. Both
/// give the same (unique) reduced basis.
GroebnerBasis groebner_basis(std::span<const BoolPoly> generators, const MonomialOrder &order);

/// Normal forms of many polynomials against one basis (OpenMP over inputs).
std::vector<BoolPoly> normal_forms(std::span<const BoolPoly> polys, const GroebnerBasis &basis);

namespace serial {
std::vector<BoolPoly> normal_forms(std::span<const BoolPoly> polys, const GroebnerBasis &basis);
}

} // namespace boolrules
