#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference in
// `serial` and an OpenMP version in `omp`; library code calls the OpenMP
// versions, tests and bench_kernels compare the two.

#include <cstdint>
#include <span>
#include <vector>

#include "boolrules/monomial.hpp"

namespace boolrules::kernels {

namespace serial {

/// XOR-accumulated pairwise products, sorted ascending by raw bits.
std::vector<Monomial> product_terms(std::span<const Monomial> a, std::span<const Monomial> b);

/// out[i] = value of the polynomial with `terms` at assignments[i].
std::vector<std::uint8_t> evaluate_many(std::span<const Monomial> terms,
                                        std::span<const std::uint64_t> assignments);

/// In-place binary Moebius transform over 2^n entries (truth table <-> ANF).
void moebius(std::span<std::uint8_t> table, int n);

} // namespace serial

namespace omp {

std::vector<Monomial> product_terms(std::span<const Monomial> a, std::span<const Monomial> b);
std::vector<std::uint8_t> evaluate_many(std::span<const Monomial> terms,
                                        std::span<const std::uint64_t> assignments);
void moebius(std::span<std::uint8_t> table, int n);

} // namespace omp

/// Sorts and cancels equal monomials in pairs.
void xor_canonicalize(std::vector<Monomial> &terms);

/// Symmetric difference of two ascending, duplicate-free term lists.
std::vector<Monomial> xor_merge(std::span<const Monomial> a, std::span<const Monomial> b);

} // namespace boolrules::kernels
