#include "boolrules/kernels.hpp"

#include <algorithm>
#include <cstddef>

#include <omp.h>

namespace boolrules::kernels {

void xor_canonicalize(std::vector<Monomial> &terms) {
  std::sort(terms.begin(), terms.end());
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i;
    while (j < terms.size() && terms[j] == terms[i])
      ++j;
    if ((j - i) & 1U)
      terms[out++] = terms[i];
    i = j;
  }
  terms.resize(out);
}

std::vector<Monomial> xor_merge(std::span<const Monomial> a, std::span<const Monomial> b) {
  std::vector<Monomial> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

namespace serial {

std::vector<Monomial> product_terms(std::span<const Monomial> a, std::span<const Monomial> b) {
  std::vector<Monomial> out;
  out.reserve(a.size() * b.size());
  for (Monomial x : a)
    for (Monomial y : b)
      out.push_back(mono_mul(x, y));
  xor_canonicalize(out);
  return out;
}

std::vector<std::uint8_t> evaluate_many(std::span<const Monomial> terms,
                                        std::span<const std::uint64_t> assignments) {
  std::vector<std::uint8_t> out(assignments.size());
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    unsigned parity = 0;
    for (Monomial m : terms)
      parity ^= m.satisfied_by(assignments[i]) ? 1U : 0U;
    out[i] = static_cast<std::uint8_t>(parity);
  }
  return out;
}

void moebius(std::span<std::uint8_t> table, int n) {
  const std::size_t size = std::size_t{1} << n;
  for (std::size_t step = 1; step < size; step <<= 1)
    for (std::size_t i = 0; i < size; ++i)
      if (i & step)
        table[i] ^= table[i ^ step];
}

} // namespace serial

namespace omp {

namespace {
constexpr std::size_t kMinParallelWork = 1 << 12;
}

std::vector<Monomial> product_terms(std::span<const Monomial> a, std::span<const Monomial> b) {
  if (a.size() * b.size() < kMinParallelWork)
    return serial::product_terms(a, b);

  // Each thread canonicalizes the products of a slice of `a`, then the
  // per-thread partial sums are merged in thread order.
  const int threads = omp_get_max_threads();
  std::vector<std::vector<Monomial>> partial(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
  {
    auto &local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(a.size()); ++i)
      for (Monomial y : b)
        local.push_back(mono_mul(a[static_cast<std::size_t>(i)], y));
    xor_canonicalize(local);
  }
  std::vector<Monomial> acc;
  for (auto &p : partial)
    acc = xor_merge(acc, p);
  return acc;
}

std::vector<std::uint8_t> evaluate_many(std::span<const Monomial> terms,
                                        std::span<const std::uint64_t> assignments) {
  if (terms.size() * assignments.size() < kMinParallelWork)
    return serial::evaluate_many(terms, assignments);
  std::vector<std::uint8_t> out(assignments.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(assignments.size()); ++i) {
    const std::uint64_t a = assignments[static_cast<std::size_t>(i)];
    unsigned parity = 0;
    for (Monomial m : terms)
      parity ^= m.satisfied_by(a) ? 1U : 0U;
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(parity);
  }
  return out;
}

void moebius(std::span<std::uint8_t> table, int n) {
  const std::size_t size = std::size_t{1} << n;
  if (size < kMinParallelWork) {
    serial::moebius(table, n);
    return;
  }
  for (std::size_t step = 1; step < size; step <<= 1) {
    // Butterflies within one stage touch disjoint pairs.
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(size); ++i) {
      const auto u = static_cast<std::size_t>(i);
      if (u & step)
        table[u] ^= table[u ^ step];
    }
  }
}

} // namespace omp

} // namespace boolrules::kernels
