#include <doctest.h>

#include <random>

#include "boolrules/kernels.hpp"
#include "boolrules/poly.hpp"

using namespace boolrules;

namespace {

std::vector<Monomial> random_sorted(std::mt19937_64 &rng, int n, std::size_t count) {
  std::vector<Monomial> ms;
  for (std::size_t i = 0; i < count; ++i)
    ms.emplace_back(rng() & ((std::uint64_t{1} << n) - 1));
  kernels::xor_canonicalize(ms);
  return ms;
}

} // namespace

TEST_CASE("parallel product matches the serial reference") {
  std::mt19937_64 rng(99);
  for (auto [n, size] : {std::pair{8, 10}, std::pair{16, 300}, std::pair{20, 900}, std::pair{40, 700}}) {
    auto a = random_sorted(rng, n, size), b = random_sorted(rng, n, size);
    CHECK(kernels::omp::product_terms(a, b) == kernels::serial::product_terms(a, b));
  }
}

TEST_CASE("parallel evaluation matches the serial reference") {
  std::mt19937_64 rng(3);
  auto terms = random_sorted(rng, 12, 200);
  std::vector<std::uint64_t> xs(20000);
  for (auto &x : xs)
    x = rng() & 4095;
  auto par = kernels::omp::evaluate_many(terms, xs);
  CHECK(par == kernels::serial::evaluate_many(terms, xs));
  BoolPoly p = BoolPoly::from_sorted_unique(terms);
  for (std::size_t i = 0; i < 200; ++i)
    REQUIRE((par[i] != 0) == p.evaluate(xs[i]));
}

TEST_CASE("parallel Moebius transform matches the serial reference and is an involution") {
  std::mt19937_64 rng(17);
  for (int n : {3, 10, 18}) {
    std::vector<std::uint8_t> t(std::size_t{1} << n);
    for (auto &v : t)
      v = rng() & 1;
    auto a = t, b = t;
    kernels::serial::moebius(a, n);
    kernels::omp::moebius(b, n);
    CHECK(a == b);
    kernels::omp::moebius(b, n);
    CHECK(b == t);
  }
}

TEST_CASE("xor helpers cancel pairs") {
  std::vector<Monomial> v{Monomial{3}, Monomial{1}, Monomial{3}, Monomial{3}, Monomial{0}};
  kernels::xor_canonicalize(v);
  CHECK(v == std::vector<Monomial>{Monomial{0}, Monomial{1}, Monomial{3}});
  std::vector<Monomial> w{Monomial{1}, Monomial{4}};
  CHECK(kernels::xor_merge(v, w) == std::vector<Monomial>{Monomial{0}, Monomial{3}, Monomial{4}});
}
