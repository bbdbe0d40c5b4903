#include "boolrules/groebner.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <unordered_set>

#include "boolrules/error.hpp"

namespace boolrules {

namespace {

// Polynomial in rank space (see MonomialOrder), terms strictly descending.
using RankTerms = std::vector<std::uint64_t>;

constexpr std::size_t kDenseLimit = 22;

RankTerms to_rank_terms(const BoolPoly &p, const MonomialOrder &order) {
  RankTerms out;
  out.reserve(p.size());
  for (Monomial m : p.terms())
    out.push_back(order.to_rank(m));
  std::sort(out.begin(), out.end(),
            [&](std::uint64_t a, std::uint64_t b) { return order.compare_ranked(a, b) > 0; });
  return out;
}

BoolPoly from_rank_terms(const RankTerms &terms, const MonomialOrder &order) {
  std::vector<Monomial> out;
  out.reserve(terms.size());
  for (std::uint64_t r : terms)
    out.push_back(order.from_rank(r));
  std::sort(out.begin(), out.end());
  return BoolPoly::from_sorted_unique(std::move(out));
}

// Accumulator for one division: a presence set plus a max-heap of terms
// (with lazy deletion), so each reduction step costs O(|g| log) instead of
// rewriting the whole dividend.
class Workspace {
  struct Less {
    const MonomialOrder *order;
    bool operator()(std::uint64_t a, std::uint64_t b) const { return order->compare_ranked(a, b) < 0; }
  };
  Less cmp() const { return Less{order_}; }

public:
  void reset(const MonomialOrder &order) {
    order_ = &order;
    dense_ = order.variable_count() <= kDenseLimit;
    if (dense_) {
      const std::size_t size = std::size_t{1} << order.variable_count();
      if (flags_.size() != size)
        flags_.assign(size, 0);
      for (std::uint64_t t : touched_)
        flags_[t] = 0;
      touched_.clear();
    } else {
      sparse_.clear();
    }
    heap_.clear();
  }

  void toggle(std::uint64_t t) {
    if (present(t)) {
      erase(t);
    } else {
      insert(t);
      heap_.push_back(t);
      std::push_heap(heap_.begin(), heap_.end(), cmp());
    }
  }

  /// Removes and returns the largest present term.
  std::optional<std::uint64_t> pop_leading() {
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), cmp());
      std::uint64_t top = heap_.back();
      heap_.pop_back();
      if (present(top)) {
        erase(top);
        return top;
      }
    }
    return std::nullopt;
  }

private:
  bool present(std::uint64_t t) const { return dense_ ? flags_[t] != 0 : sparse_.contains(t); }
  void insert(std::uint64_t t) {
    if (dense_) {
      flags_[t] = 1;
      touched_.push_back(t);
    } else {
      sparse_.insert(t);
    }
  }
  void erase(std::uint64_t t) {
    if (dense_)
      flags_[t] = 0;
    else
      sparse_.erase(t);
  }

  const MonomialOrder *order_ = nullptr;
  bool dense_ = true;
  std::vector<std::uint8_t> flags_;
  std::vector<std::uint64_t> touched_;
  std::unordered_set<std::uint64_t> sparse_;
  std::vector<std::uint64_t> heap_;
};

Workspace &thread_workspace() {
  thread_local Workspace ws;
  return ws;
}

// Full reduction of `input` modulo `basis` (parallel arrays of elements and
// their leading terms). `skip` excludes one element, used by interreduction.
RankTerms reduce(const RankTerms &input, std::span<const RankTerms> basis,
                 std::span<const std::uint64_t> lms, const MonomialOrder &order, int skip = -1) {
  Workspace &ws = thread_workspace();
  ws.reset(order);
  for (std::uint64_t t : input)
    ws.toggle(t);
  RankTerms rem;
  while (auto lt = ws.pop_leading()) {
    int d = -1;
    for (std::size_t i = 0; i < lms.size(); ++i) {
      if (static_cast<int>(i) != skip && (lms[i] & ~*lt) == 0) {
        d = static_cast<int>(i);
        break;
      }
    }
    if (d < 0) {
      rem.push_back(*lt);
      continue;
    }
    // lt was already removed; adding cofactor * g cancels it and toggles
    // the rest of the product.
    const std::uint64_t cofactor = *lt & ~lms[static_cast<std::size_t>(d)];
    const RankTerms &g = basis[static_cast<std::size_t>(d)];
    for (std::size_t k = 1; k < g.size(); ++k)
      ws.toggle(g[k] | cofactor);
  }
  return rem;
}

struct PreparedBasis {
  std::vector<RankTerms> elements;
  std::vector<std::uint64_t> lms;
};

PreparedBasis prepare(std::span<const BoolPoly> basis, const MonomialOrder &order) {
  PreparedBasis out;
  for (const BoolPoly &g : basis) {
    if (g.is_zero())
      throw InputError("division by the zero polynomial");
    out.elements.push_back(to_rank_terms(g, order));
    out.lms.push_back(out.elements.back().front());
  }
  return out;
}

} // namespace

std::vector<Monomial> GroebnerBasis::leading_monomials() const {
  std::vector<Monomial> out;
  for (const BoolPoly &g : elements)
    out.push_back(leading_monomial(g, order));
  return out;
}

BoolPoly normal_form(const BoolPoly &p, std::span<const BoolPoly> basis, const MonomialOrder &order) {
  if (basis.empty())
    return p;
  PreparedBasis prep = prepare(basis, order);
  return from_rank_terms(reduce(to_rank_terms(p, order), prep.elements, prep.lms, order), order);
}

BoolPoly normal_form(const BoolPoly &p, const GroebnerBasis &basis) {
  return normal_form(p, basis.elements, basis.order);
}

BoolPoly s_polynomial(const BoolPoly &f, const BoolPoly &g, const MonomialOrder &order) {
  if (f.is_zero() || g.is_zero())
    throw InputError("S-polynomial of the zero polynomial");
  Monomial lf = leading_monomial(f, order);
  Monomial lg = leading_monomial(g, order);
  Monomial lcm = mono_lcm(lf, lg);
  return f * mono_quotient(lcm, lf) + g * mono_quotient(lcm, lg);
}

namespace {

struct Pair {
  std::uint64_t lcm;
  std::uint32_t i;
  // Index of the partner element, or -(v + 1) for the field-relation pair
  // of element i with rank-space variable v.
  std::int32_t j;
};

} // namespace

GroebnerBasis buchberger(std::span<const BoolPoly> generators, const MonomialOrder &order,
                         const BuchbergerOptions &options) {
  GroebnerBasis result;
  result.order = order;
  BuchbergerStats &stats = result.stats;

  std::vector<RankTerms> g;
  std::vector<std::uint64_t> lms;

  auto pair_less = [&order](const Pair &a, const Pair &b) {
    auto c = order.compare_ranked(a.lcm, b.lcm);
    if (c != 0)
      return c < 0;
    if (a.i != b.i)
      return a.i < b.i;
    return a.j < b.j;
  };
  std::set<Pair, decltype(pair_less)> queue(pair_less);

  auto add_element = [&](RankTerms h) {
    const auto idx = static_cast<std::uint32_t>(g.size());
    const std::uint64_t lm = h.front();
    for (std::uint32_t i = 0; i < idx; ++i) {
      if (options.product_criterion && (lms[i] & lm) == 0) {
        ++stats.coprime_skipped;
        continue;
      }
      queue.insert(Pair{lms[i] | lm, i, static_cast<std::int32_t>(idx)});
    }
    for (std::uint64_t b = lm; b; b &= b - 1)
      queue.insert(Pair{lm, idx, -(std::countr_zero(b) + 1)});
    g.push_back(std::move(h));
    lms.push_back(lm);
  };

  for (const BoolPoly &f : generators) {
    if (f.is_zero())
      continue;
    RankTerms h = reduce(to_rank_terms(f, order), g, lms, order);
    if (!h.empty())
      add_element(std::move(h));
  }

  while (!queue.empty()) {
    Pair pr = *queue.begin();
    queue.erase(queue.begin());
    const RankTerms &f = g[pr.i];
    RankTerms spoly;
    if (pr.j < 0) {
      ++stats.field_pairs;
      const std::uint64_t v = std::uint64_t{1} << (-pr.j - 1);
      // v * f where v divides lm(f); collisions cancel mod 2.
      for (std::uint64_t t : f)
        spoly.push_back(t | v);
    } else {
      ++stats.ordinary_pairs;
      const RankTerms &h = g[static_cast<std::size_t>(pr.j)];
      const std::uint64_t cf = pr.lcm & ~lms[pr.i];
      const std::uint64_t ch = pr.lcm & ~lms[static_cast<std::size_t>(pr.j)];
      for (std::uint64_t t : f)
        spoly.push_back(t | cf);
      for (std::uint64_t t : h)
        spoly.push_back(t | ch);
    }
    // Cancel duplicates pairwise before reduction.
    std::sort(spoly.begin(), spoly.end());
    RankTerms canon;
    for (std::size_t a = 0; a < spoly.size();) {
      std::size_t b = a;
      while (b < spoly.size() && spoly[b] == spoly[a])
        ++b;
      if ((b - a) & 1U)
        canon.push_back(spoly[a]);
      a = b;
    }
    std::sort(canon.begin(), canon.end(),
              [&](std::uint64_t a, std::uint64_t b) { return order.compare_ranked(a, b) > 0; });
    RankTerms r = reduce(canon, g, lms, order);
    if (r.empty()) {
      ++stats.zero_reductions;
      continue;
    }
    add_element(std::move(r));
  }
  stats.elements_before_interreduction = g.size();

  // Minimalize: drop elements whose leading term is divisible by another's.
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
      if (i == j || (lms[j] & ~lms[i]) != 0)
        continue;
      // Equal leading terms cannot occur (each new element is reduced).
      redundant = lms[j] != lms[i] || j < i;
    }
    if (!redundant)
      keep.push_back(i);
  }
  std::vector<RankTerms> minimal;
  std::vector<std::uint64_t> minimal_lms;
  for (std::size_t i : keep) {
    minimal.push_back(g[i]);
    minimal_lms.push_back(lms[i]);
  }
  // Tail reduction: leading terms are fixed, so one pass suffices.
  for (std::size_t i = 0; i < minimal.size(); ++i)
    minimal[i] = reduce(minimal[i], minimal, minimal_lms, order, static_cast<int>(i));

  std::vector<std::size_t> idx(minimal.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return order.compare_ranked(minimal_lms[a], minimal_lms[b]) < 0;
  });
  for (std::size_t i : idx)
    result.elements.push_back(from_rank_terms(minimal[i], order));
  result.reduced = true;
  return result;
}

namespace {

// Bit vector over points or over standard-monomial indices.
class Bits {
public:
  explicit Bits(std::size_t size) : words_((size + 63) / 64, 0) {}
  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  Bits &operator^=(const Bits &o) {
    for (std::size_t w = 0; w < words_.size(); ++w)
      words_[w] ^= o.words_[w];
    return *this;
  }
  /// Index of the lowest set bit at or after `from`, or npos.
  std::size_t next(std::size_t from) const {
    for (std::size_t w = from / 64; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      if (w == from / 64)
        word &= ~std::uint64_t{0} << (from % 64);
      if (word)
        return w * 64 + static_cast<std::size_t>(std::countr_zero(word));
    }
    return npos;
  }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
  std::vector<std::uint64_t> words_;
};

} // namespace

GroebnerBasis vanishing_basis(std::span<const std::uint64_t> points, const MonomialOrder &order) {
  GroebnerBasis result;
  result.order = order;
  result.reduced = true;
  result.stats.from_points = true;
  result.stats.points = points.size();
  if (points.empty()) {
    result.elements.push_back(BoolPoly::one());
    return result;
  }
  const std::size_t n = order.variable_count();
  const std::size_t npts = points.size();

  // Echelon rows: evaluation vector, pivot = its lowest set bit, and the
  // combination of standard monomials it stands for.
  struct Row {
    Bits values;
    Bits combination;
  };
  std::vector<Row> rows;
  std::vector<std::int32_t> pivot_row(npts, -1);
  std::vector<std::uint64_t> standard; // rank space
  std::vector<std::uint64_t> leading;  // rank space
  std::vector<RankTerms> elements;

  auto cmp = [&order](std::uint64_t a, std::uint64_t b) { return order.compare_ranked(a, b) < 0; };
  std::set<std::uint64_t, decltype(cmp)> frontier(cmp);
  frontier.insert(0);
  std::vector<std::uint64_t> rank_points(npts);
  for (std::size_t j = 0; j < npts; ++j)
    rank_points[j] = order.to_rank(Monomial{points[j]});

  while (!frontier.empty()) {
    const std::uint64_t m = *frontier.begin();
    frontier.erase(frontier.begin());
    if (std::any_of(leading.begin(), leading.end(), [m](std::uint64_t l) { return (l & ~m) == 0; }))
      continue;
    Bits values(npts);
    for (std::size_t j = 0; j < npts; ++j)
      if ((m & ~rank_points[j]) == 0)
        values.flip(j);
    Bits combination(npts);
    std::size_t bit = values.next(0);
    while (bit != Bits::npos && pivot_row[bit] >= 0) {
      const Row &r = rows[static_cast<std::size_t>(pivot_row[bit])];
      values ^= r.values;
      combination ^= r.combination;
      bit = values.next(bit);
    }
    if (bit == Bits::npos) {
      // m + (smaller standard monomials) vanishes on every point.
      RankTerms g{m};
      for (std::size_t k = combination.next(0); k != Bits::npos; k = combination.next(k + 1))
        g.push_back(standard[k]);
      std::sort(g.begin(), g.end(), [&](std::uint64_t a, std::uint64_t b) { return cmp(b, a); });
      elements.push_back(std::move(g));
      leading.push_back(m);
      continue;
    }
    const std::size_t index = standard.size();
    standard.push_back(m);
    combination.flip(index);
    pivot_row[bit] = static_cast<std::int32_t>(rows.size());
    rows.push_back({std::move(values), std::move(combination)});
    for (std::size_t v = 0; v < n; ++v)
      if (!((m >> v) & 1U))
        frontier.insert(m | (std::uint64_t{1} << v));
  }
  // Visited in increasing order, so elements already sort by leading term.
  for (const RankTerms &g : elements)
    result.elements.push_back(from_rank_terms(g, order));
  return result;
}

std::vector<std::uint64_t> common_zeros(std::span<const BoolPoly> generators, std::size_t n) {
  if (n > static_cast<std::size_t>(kMaxTruthTableVariables))
    throw InputError("too many variables to enumerate the zero set");
  std::vector<std::uint8_t> nonzero(std::size_t{1} << n, 0);
  for (const BoolPoly &g : generators) {
    auto t = truth_table(g, static_cast<int>(n));
    for (std::size_t x = 0; x < t.size(); ++x)
      nonzero[x] |= t[x];
  }
  std::vector<std::uint64_t> out;
  for (std::size_t x = 0; x < nonzero.size(); ++x)
    if (!nonzero[x])
      out.push_back(x);
  return out;
}

GroebnerBasis groebner_basis(std::span<const BoolPoly> generators, const MonomialOrder &order) {
  const std::size_t n = order.variable_count();
  if (n <= static_cast<std::size_t>(kMaxTruthTableVariables)) {
    auto zeros = common_zeros(generators, n);
    if (zeros.size() <= kMaxPointsForVanishingBasis)
      return vanishing_basis(zeros, order);
  }
  return buchberger(generators, order);
}

namespace serial {

std::vector<BoolPoly> normal_forms(std::span<const BoolPoly> polys, const GroebnerBasis &basis) {
  std::vector<BoolPoly> out;
  out.reserve(polys.size());
  for (const BoolPoly &p : polys)
    out.push_back(normal_form(p, basis));
  return out;
}

} // namespace serial

std::vector<BoolPoly> normal_forms(std::span<const BoolPoly> polys, const GroebnerBasis &basis) {
  std::vector<BoolPoly> out(polys.size());
  if (basis.empty()) {
    std::copy(polys.begin(), polys.end(), out.begin());
    return out;
  }
  const MonomialOrder &order = basis.order;
  PreparedBasis prep = prepare(basis.elements, order);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(polys.size()); ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = from_rank_terms(reduce(to_rank_terms(polys[k], order), prep.elements, prep.lms, order),
                             order);
  }
  return out;
}

} // namespace boolrules
