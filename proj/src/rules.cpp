#include "boolrules/rules.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "boolrules/error.hpp"
#include "boolrules/kernels.hpp"

namespace boolrules {

std::string_view to_string(Polarity p) { return p == Polarity::Positive ? "pos" : "neg"; }

Polarity parse_polarity(std::string_view text) {
  if (text == "pos")
    return Polarity::Positive;
  if (text == "neg")
    return Polarity::Negative;
  throw InputError("unknown rule polarity '" + std::string(text) + "'");
}

ClassSplit split_on_class(const BoolPoly &p, std::size_t class_index) {
  const std::uint64_t s = std::uint64_t{1} << class_index;
  std::vector<Monomial> with, without;
  for (Monomial m : p.terms()) {
    if (m.bits() & s)
      with.emplace_back(m.bits() & ~s);
    else
      without.push_back(m);
  }
  // Removing s may reorder terms but cannot merge them: m and m + s are
  // never both in `with`.
  std::sort(with.begin(), with.end());
  return {BoolPoly::from_sorted_unique(std::move(with)), BoolPoly::from_sorted_unique(std::move(without))};
}

namespace {

void require_class_free(const BoolPoly &criterion, const PatternTable &patterns) {
  if (criterion.involves(patterns.vars().class_index()))
    throw InputError("selection criterion must not contain the class variable");
}

Selection tally(const PatternTable &patterns, const std::vector<std::uint8_t> &selected) {
  Selection sel;
  const std::uint64_t cls = patterns.vars().class_bit();
  const auto &pats = patterns.patterns();
  for (std::size_t i = 0; i < pats.size(); ++i) {
    if (!selected[i])
      continue;
    sel.support += pats[i].multiplicity();
    sel.record_ids.insert(sel.record_ids.end(), pats[i].record_ids.begin(), pats[i].record_ids.end());
    if (pats[i].bits & cls) {
      sel.class_positive += pats[i].multiplicity();
      sel.positive_record_ids.insert(sel.positive_record_ids.end(), pats[i].record_ids.begin(),
                                     pats[i].record_ids.end());
    }
  }
  std::sort(sel.record_ids.begin(), sel.record_ids.end());
  std::sort(sel.positive_record_ids.begin(), sel.positive_record_ids.end());
  return sel;
}

} // namespace

Selection count_selection(const BoolPoly &criterion, const PatternTable &patterns) {
  require_class_free(criterion, patterns);
  std::vector<std::uint64_t> points;
  points.reserve(patterns.observed_count());
  for (const Pattern &p : patterns.patterns())
    points.push_back(p.bits);
  return tally(patterns, kernels::omp::evaluate_many(criterion.terms(), points));
}

Selection count_selection_reference(const BoolPoly &criterion, const PatternTable &patterns) {
  require_class_free(criterion, patterns);
  std::vector<std::uint8_t> selected;
  for (const Pattern &p : patterns.patterns())
    selected.push_back(criterion.evaluate(p.bits) ? 1 : 0);
  return tally(patterns, selected);
}

int Rule::variable_count() const noexcept { return std::popcount(criterion.support()); }

Rule make_rule(Polarity polarity, const BoolPoly &criterion, const PatternTable &patterns,
               RuleProvenance provenance) {
  Selection sel = count_selection(criterion, patterns);
  Rule rule;
  rule.polarity = polarity;
  rule.criterion = criterion;
  rule.factors = criterion.is_zero() ? std::vector<BoolPoly>{} : factor_disjoint(criterion, patterns.vars());
  rule.support = sel.support;
  if (polarity == Polarity::Positive) {
    rule.agree = sel.class_positive;
    std::set_difference(sel.record_ids.begin(), sel.record_ids.end(), sel.positive_record_ids.begin(),
                        sel.positive_record_ids.end(), std::back_inserter(rule.exception_ids));
  } else {
    rule.agree = sel.support - sel.class_positive;
    rule.exception_ids = sel.positive_record_ids;
  }
  rule.provenance = std::move(provenance);
  return rule;
}

std::vector<Rule> extract_rules(const BoolPoly &p, const PatternTable &patterns, int cycle) {
  const std::size_t s = patterns.vars().class_index();
  if (!p.involves(s))
    throw InputError("polynomial does not contain the class variable");
  auto [a, b] = split_on_class(p, s);
  std::vector<Rule> out;
  if (!b.is_zero()) {
    Rule pos = make_rule(Polarity::Positive, b, patterns, {p, cycle, std::nullopt});
    if (pos.support > 0)
      out.push_back(std::move(pos));
  }
  BoolPoly neg_criterion = a * (BoolPoly::one() + b);
  if (!neg_criterion.is_zero()) {
    Rule neg = make_rule(Polarity::Negative, neg_criterion, patterns, {p, cycle, std::nullopt});
    if (neg.support > 0)
      out.push_back(std::move(neg));
  }
  return out;
}

namespace {

// Splits p as f(X) * g(rest) if possible. Terms are distinct, so p factors
// over the bipartition exactly when it is the full Cartesian product of its
// X-parts and rest-parts.
std::optional<std::pair<BoolPoly, BoolPoly>> split_over(const BoolPoly &p, std::uint64_t x) {
  std::vector<Monomial> xs, ys;
  for (Monomial m : p.terms()) {
    xs.emplace_back(m.bits() & x);
    ys.emplace_back(m.bits() & ~x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  if (xs.size() * ys.size() != p.size())
    return std::nullopt;
  return std::make_pair(BoolPoly::from_sorted_unique(std::move(xs)),
                        BoolPoly::from_sorted_unique(std::move(ys)));
}

void factor_into(const BoolPoly &p, std::vector<BoolPoly> &out) {
  const std::uint64_t support = p.support();
  const int k = std::popcount(support);
  if (k <= 1 || k > kMaxFactorVariables) {
    out.push_back(p);
    return;
  }
  std::vector<std::uint64_t> vars;
  for (std::uint64_t b = support; b; b &= b - 1)
    vars.push_back(b & (~b + 1));
  // The smallest block containing vars[0] is an irreducible factor.
  const int rest = k - 1;
  for (int size = 0; size < rest; ++size) {
    for (std::uint64_t choose = 0; choose < (std::uint64_t{1} << rest); ++choose) {
      if (std::popcount(choose) != size)
        continue;
      std::uint64_t x = vars[0];
      for (int i = 0; i < rest; ++i)
        if ((choose >> i) & 1U)
          x |= vars[static_cast<std::size_t>(i + 1)];
      if (auto parts = split_over(p, x)) {
        out.push_back(std::move(parts->first));
        factor_into(parts->second, out);
        return;
      }
    }
  }
  out.push_back(p);
}

} // namespace

std::vector<BoolPoly> factor_disjoint(const BoolPoly &p, const VariableTable &vars) {
  if (p.is_zero())
    throw InputError("cannot factor the zero polynomial");
  std::vector<BoolPoly> factors;
  factor_into(p, factors);
  const MonomialOrder order = MonomialOrder::standard(vars);
  // Single variables first in table order, then by term count, then by
  // leading monomial ascending.
  std::sort(factors.begin(), factors.end(), [&](const BoolPoly &a, const BoolPoly &b) {
    const bool va = a.size() == 1, vb = b.size() == 1;
    if (va != vb)
      return va;
    if (va)
      return a.terms().front().bits() < b.terms().front().bits();
    if (a.size() != b.size())
      return a.size() < b.size();
    return order.less(leading_monomial(a, order), leading_monomial(b, order));
  });
  return factors;
}

std::vector<Rule> generalize(const Rule &rule, const PatternTable &patterns) {
  const std::size_t k = rule.factors.size();
  std::vector<Rule> out;
  if (k < 2)
    return out;
  if (k > 20)
    throw InputError("too many factors to generalize");
  std::set<BoolPoly> seen{rule.criterion};
  // Larger sub-products first.
  for (std::size_t keep = k - 1; keep >= 1; --keep) {
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << k); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != keep)
        continue;
      BoolPoly criterion = BoolPoly::one();
      for (std::size_t i = 0; i < k; ++i)
        if ((mask >> i) & 1U)
          criterion = criterion * rule.factors[i];
      if (!seen.insert(criterion).second)
        continue;
      out.push_back(make_rule(rule.polarity, criterion, patterns,
                              {rule.provenance.source, rule.provenance.cycle, rule.criterion}));
    }
  }
  return out;
}

std::string format_factored(const std::vector<BoolPoly> &factors, const VariableTable &vars) {
  if (factors.empty())
    return "0";
  const MonomialOrder lex = MonomialOrder::standard(vars, OrderKind::Lex);
  std::string out;
  for (const BoolPoly &f : factors) {
    if (!out.empty())
      out += ' ';
    if (f.size() == 1) {
      out += format_monomial(f.terms().front(), vars, " ");
      continue;
    }
    const bool wrap = factors.size() > 1;
    if (wrap)
      out += '(';
    bool first = true;
    for (Monomial m : sorted_terms(f, lex)) {
      if (!first)
        out += " + ";
      first = false;
      out += format_monomial(m, vars, " ");
    }
    if (wrap)
      out += ')';
  }
  return out;
}

std::string format_rule(const Rule &rule, const VariableTable &vars) {
  return std::string(to_string(rule.polarity)) + " " + std::to_string(rule.support) + "(" +
         std::to_string(rule.class_positive()) + ") " + format_factored(rule.factors, vars);
}

} // namespace boolrules
