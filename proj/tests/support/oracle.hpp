#pragma once

// Brute-force references. Nothing here calls into the library's arithmetic:
// polynomials are plain lists of bitmask monomials and functions are truth
// tables indexed by assignment.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using Table = std::vector<std::uint8_t>;
using Terms = std::set<std::uint64_t>; // ANF: set of monomials, coefficient 1

inline bool subset(std::uint64_t a, std::uint64_t b) { return (a & ~b) == 0; }

inline bool eval(const Terms &p, std::uint64_t x) {
  bool v = false;
  for (std::uint64_t m : p)
    if (subset(m, x))
      v = !v;
  return v;
}

inline Table table_of(const Terms &p, int n) {
  Table t(std::size_t{1} << n);
  for (std::uint64_t x = 0; x < t.size(); ++x)
    t[x] = eval(p, x);
  return t;
}

// Coefficient of m is the XOR of f over all sub-assignments of m (O(3^n)).
inline Terms anf_of(const Table &f, int n) {
  Terms out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    bool c = false;
    for (std::uint64_t x = m;; x = (x - 1) & m) {
      c ^= f[x] != 0;
      if (x == 0)
        break;
    }
    if (c)
      out.insert(m);
  }
  return out;
}

inline Table add(const Table &a, const Table &b) {
  Table t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    t[i] = a[i] ^ b[i];
  return t;
}

inline Table mul(const Table &a, const Table &b) {
  Table t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    t[i] = a[i] & b[i];
  return t;
}

inline Terms random_terms(std::mt19937_64 &rng, int n, int max_terms) {
  std::uniform_int_distribution<int> count(0, max_terms);
  std::uniform_int_distribution<std::uint64_t> mono(0, (std::uint64_t{1} << n) - 1);
  Terms out;
  for (int k = count(rng); k > 0; --k) {
    std::uint64_t m = mono(rng);
    if (!out.erase(m))
      out.insert(m);
  }
  return out;
}

/// Distinct random assignments of n variables.
inline std::vector<std::uint64_t> random_points(std::mt19937_64 &rng, int n, std::size_t count) {
  std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << n) - 1);
  std::set<std::uint64_t> pts;
  while (pts.size() < count)
    pts.insert(pick(rng));
  return {pts.begin(), pts.end()};
}

inline bool vanishes_on(const Terms &p, const std::vector<std::uint64_t> &points) {
  for (std::uint64_t x : points)
    if (eval(p, x))
      return false;
  return true;
}

/// Number of assignments selected by a criterion among weighted points.
inline std::size_t count_selected(const Terms &p, const std::vector<std::pair<std::uint64_t, std::size_t>> &pts) {
  std::size_t n = 0;
  for (auto [x, w] : pts)
    if (eval(p, x))
      n += w;
  return n;
}

} // namespace oracle
