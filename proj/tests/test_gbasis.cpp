#include <doctest.h>

#include <algorithm>
#include <random>

#include "boolrules/groebner.hpp"
#include "boolrules/variables.hpp"
#include "support/oracle.hpp"

using namespace boolrules;

namespace {

BoolPoly from_oracle(const oracle::Terms &t) {
  std::vector<Monomial> ms;
  for (auto m : t)
    ms.emplace_back(m);
  return BoolPoly::from_terms(ms);
}

// The polynomial vanishing exactly on `points`, built from its truth table.
BoolPoly vanishing_generator(const std::vector<std::uint64_t> &points, int n) {
  oracle::Table t(std::size_t{1} << n, 1);
  for (auto x : points)
    t[x] = 0;
  return from_oracle(oracle::anf_of(t, n));
}

MonomialOrder order_for(int n, OrderKind kind = OrderKind::DegLex) {
  std::vector<std::size_t> prec(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    prec[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
  return MonomialOrder(kind, prec);
}

std::size_t standard_monomials(const GroebnerBasis &g, int n) {
  auto lms = g.leading_monomials();
  std::size_t count = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
    if (std::none_of(lms.begin(), lms.end(), [&](Monomial l) { return l.divides(Monomial{m}); }))
      ++count;
  return count;
}

void check_reduced(const GroebnerBasis &g) {
  auto lms = g.leading_monomials();
  for (std::size_t i = 0; i < g.size(); ++i)
    for (Monomial t : g.elements[i].terms())
      for (std::size_t j = 0; j < g.size(); ++j)
        if (i != j)
          REQUIRE_FALSE(lms[j].divides(t));
}

} // namespace

TEST_CASE("normal form is zero exactly on polynomials vanishing on the points") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3 + trial % 5;
    auto pts = oracle::random_points(rng, n, 1 + rng() % ((1u << n) - 1));
    GroebnerBasis g = buchberger(std::vector{vanishing_generator(pts, n)}, order_for(n));
    CHECK(g.reduced);
    check_reduced(g);
    // The quotient ring has one dimension per point.
    CHECK(standard_monomials(g, n) == pts.size());
    for (int k = 0; k < 60; ++k) {
      auto t = oracle::random_terms(rng, n, 10);
      bool member = normal_form(from_oracle(t), g).is_zero();
      REQUIRE(member == oracle::vanishes_on(t, pts));
    }
  }
}

TEST_CASE("every pair reduces to zero, field pairs included") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 5;
    std::vector<BoolPoly> gens;
    for (int k = 0; k < 3; ++k)
      gens.push_back(from_oracle(oracle::random_terms(rng, n, 6)));
    for (OrderKind kind : {OrderKind::DegLex, OrderKind::DegRevLex, OrderKind::Lex}) {
      MonomialOrder o = order_for(n, kind);
      GroebnerBasis g = buchberger(gens, o);
      for (const BoolPoly &f : gens)
        REQUIRE(normal_form(f, g).is_zero());
      for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j)
          REQUIRE(normal_form(s_polynomial(g.elements[i], g.elements[j], o), g).is_zero());
        for (int v = 0; v < n; ++v)
          if (leading_monomial(g.elements[i], o).contains(static_cast<std::size_t>(v)))
            REQUIRE(normal_form(g.elements[i] * Monomial::variable(static_cast<std::size_t>(v)), g).is_zero());
      }
    }
  }
}

TEST_CASE("reduced basis does not depend on generator order or the product criterion") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 6;
    std::vector<BoolPoly> gens;
    for (int k = 0; k < 4; ++k)
      gens.push_back(from_oracle(oracle::random_terms(rng, n, 8)));
    MonomialOrder o = order_for(n, trial % 2 ? OrderKind::DegRevLex : OrderKind::DegLex);
    GroebnerBasis a = buchberger(gens, o);
    std::reverse(gens.begin(), gens.end());
    GroebnerBasis b = buchberger(gens, o, {.product_criterion = false});
    CHECK(a.elements == b.elements);
  }
}

TEST_CASE("trivial ideals") {
  MonomialOrder o = order_for(3);
  CHECK(buchberger(std::vector<BoolPoly>{}, o).empty());
  CHECK(buchberger(std::vector<BoolPoly>{BoolPoly{}}, o).empty());
  // x0 x1 + x2 and x0 x1 + x2 + 1 share no zero.
  BoolPoly h = BoolPoly::variable(0) * BoolPoly::variable(1) + BoolPoly::variable(2);
  GroebnerBasis unit = buchberger(std::vector{h, h + BoolPoly::one()}, o);
  CHECK(unit.is_unit());
  BoolPoly x = BoolPoly::variable(2);
  CHECK(normal_form(x, GroebnerBasis{}) == x);
}

TEST_CASE("s-polynomial of two binomials") {
  // x0x1 + x2 and x0x2 + x1: lcm x0x1x2, S = x2 + x1 by idempotence.
  MonomialOrder o = order_for(3);
  BoolPoly f = BoolPoly::variable(0) * BoolPoly::variable(1) + BoolPoly::variable(2);
  BoolPoly g = BoolPoly::variable(0) * BoolPoly::variable(2) + BoolPoly::variable(1);
  CHECK(s_polynomial(f, g, o) == BoolPoly::variable(1) + BoolPoly::variable(2));
  CHECK_THROWS(s_polynomial(BoolPoly{}, g, o));
}

TEST_CASE("parallel normal forms match the serial reference") {
  std::mt19937_64 rng(77);
  int n = 8;
  auto pts = oracle::random_points(rng, n, 90);
  GroebnerBasis g = buchberger(std::vector{vanishing_generator(pts, n)}, order_for(n));
  std::vector<BoolPoly> polys;
  for (int i = 0; i < 300; ++i)
    polys.push_back(from_oracle(oracle::random_terms(rng, n, 20)));
  CHECK(normal_forms(polys, g) == serial::normal_forms(polys, g));
}

TEST_CASE("the point route and Buchberger give the same reduced basis") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 3 + trial % 5;
    MonomialOrder o = order_for(n, static_cast<OrderKind>(trial % 3));
    std::vector<BoolPoly> gens;
    for (int k = 0; k < 1 + trial % 3; ++k)
      gens.push_back(from_oracle(oracle::random_terms(rng, n, 8)));
    GroebnerBasis b = buchberger(gens, o);
    GroebnerBasis p = groebner_basis(gens, o);
    CHECK(p.stats.from_points);
    REQUIRE(p.elements == b.elements);
    auto zeros = common_zeros(gens, static_cast<std::size_t>(n));
    for (std::uint64_t x = 0; x < (1u << n); ++x) {
      bool all_zero = std::none_of(gens.begin(), gens.end(), [&](const BoolPoly &g) { return g.evaluate(x); });
      REQUIRE(all_zero == std::binary_search(zeros.begin(), zeros.end(), x));
    }
  }
  CHECK(vanishing_basis(std::vector<std::uint64_t>{}, order_for(3)).is_unit());
  CHECK(vanishing_basis(std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6, 7}, order_for(3)).empty());
}
