// Serial references against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "boolrules/groebner.hpp"
#include "boolrules/kernels.hpp"

using namespace boolrules;

namespace {

std::vector<Monomial> random_monomials(std::size_t count, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Monomial> out;
  for (std::size_t i = 0; i < count; ++i)
    out.emplace_back(rng() & ((std::uint64_t{1} << n) - 1));
  kernels::xor_canonicalize(out);
  return out;
}

std::vector<std::uint64_t> random_assignments(std::size_t count, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> out(count);
  for (auto &x : out)
    x = rng() & ((std::uint64_t{1} << n) - 1);
  return out;
}

template <auto Fn> void product_terms(benchmark::State &state) {
  auto a = random_monomials(static_cast<std::size_t>(state.range(0)), 24, 1);
  auto b = random_monomials(static_cast<std::size_t>(state.range(0)), 24, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(Fn(a, b));
}

template <auto Fn> void evaluate_many(benchmark::State &state) {
  auto terms = random_monomials(512, 20, 3);
  auto pts = random_assignments(static_cast<std::size_t>(state.range(0)), 20, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(Fn(terms, pts));
}

template <auto Fn> void moebius(benchmark::State &state) {
  int n = static_cast<int>(state.range(0));
  std::vector<std::uint8_t> table(std::size_t{1} << n);
  std::mt19937_64 rng(5);
  for (auto &v : table)
    v = rng() & 1;
  for (auto _ : state) {
    Fn(table, n);
    benchmark::ClobberMemory();
  }
}

// Normal forms of random polynomials modulo the vanishing ideal of 100 points.
template <bool Parallel> void normal_forms(benchmark::State &state) {
  const int n = 10;
  std::vector<std::size_t> prec(n);
  for (int i = 0; i < n; ++i)
    prec[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
  MonomialOrder order(OrderKind::DegLex, prec);
  GroebnerBasis g = vanishing_basis(random_assignments(100, n, 6), order);
  std::vector<BoolPoly> polys;
  for (int i = 0; i < state.range(0); ++i)
    polys.push_back(BoolPoly::from_terms(random_monomials(24, n, 100 + static_cast<std::uint64_t>(i))));
  for (auto _ : state) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(boolrules::normal_forms(polys, g));
    else
      benchmark::DoNotOptimize(boolrules::serial::normal_forms(polys, g));
  }
}

} // namespace

BENCHMARK(product_terms<kernels::serial::product_terms>)->Name("product_terms/serial")->Arg(256)->Arg(1024);
BENCHMARK(product_terms<kernels::omp::product_terms>)->Name("product_terms/omp")->Arg(256)->Arg(1024);
BENCHMARK(evaluate_many<kernels::serial::evaluate_many>)->Name("evaluate_many/serial")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(evaluate_many<kernels::omp::evaluate_many>)->Name("evaluate_many/omp")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(moebius<kernels::serial::moebius>)->Name("moebius/serial")->Arg(16)->Arg(20);
BENCHMARK(moebius<kernels::omp::moebius>)->Name("moebius/omp")->Arg(16)->Arg(20);
BENCHMARK(normal_forms<false>)->Name("normal_forms/serial")->Arg(16)->Arg(128);
BENCHMARK(normal_forms<true>)->Name("normal_forms/omp")->Arg(16)->Arg(128);

BENCHMARK_MAIN();
