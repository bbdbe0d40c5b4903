#include "boolrules/poly.hpp"

#include <algorithm>
#include <cctype>

#include "boolrules/error.hpp"
#include "boolrules/kernels.hpp"
#include "boolrules/variables.hpp"

namespace boolrules {

BoolPoly BoolPoly::from_terms(std::vector<Monomial> terms) {
  kernels::xor_canonicalize(terms);
  return from_sorted_unique(std::move(terms));
}

BoolPoly BoolPoly::from_sorted_unique(std::vector<Monomial> terms) {
  BoolPoly p;
  p.terms_ = std::move(terms);
  return p;
}

bool BoolPoly::contains(Monomial m) const {
  return std::binary_search(terms_.begin(), terms_.end(), m);
}

std::uint64_t BoolPoly::support() const noexcept {
  std::uint64_t s = 0;
  for (Monomial m : terms_)
    s |= m.bits();
  return s;
}

int BoolPoly::degree() const noexcept {
  int d = 0;
  for (Monomial m : terms_)
    d = std::max(d, m.degree());
  return terms_.empty() ? -1 : d;
}

bool BoolPoly::evaluate(std::uint64_t assignment) const noexcept {
  unsigned parity = 0;
  for (Monomial m : terms_)
    parity ^= m.satisfied_by(assignment) ? 1U : 0U;
  return parity != 0;
}

BoolPoly &BoolPoly::operator+=(const BoolPoly &other) {
  terms_ = kernels::xor_merge(terms_, other.terms_);
  return *this;
}

BoolPoly operator+(const BoolPoly &a, const BoolPoly &b) {
  return BoolPoly::from_sorted_unique(kernels::xor_merge(a.terms_, b.terms_));
}

BoolPoly operator*(const BoolPoly &a, const BoolPoly &b) {
  return BoolPoly::from_sorted_unique(kernels::omp::product_terms(a.terms_, b.terms_));
}

BoolPoly operator*(const BoolPoly &a, Monomial m) {
  std::vector<Monomial> out;
  out.reserve(a.terms_.size());
  for (Monomial t : a.terms_)
    out.push_back(mono_mul(t, m));
  return BoolPoly::from_terms(std::move(out));
}

BoolPoly poly_add(const BoolPoly &p, const BoolPoly &q) { return p + q; }
BoolPoly poly_mul(const BoolPoly &p, const BoolPoly &q) { return p * q; }

bool poly_eval(const BoolPoly &p, std::uint64_t assignment) { return p.evaluate(assignment); }

bool poly_eval(const BoolPoly &p, std::uint64_t values, std::uint64_t defined) {
  std::uint64_t missing = p.support() & ~defined;
  if (missing != 0)
    throw InputError("assignment leaves variable #" + std::to_string(std::countr_zero(missing)) +
                     " undefined");
  return p.evaluate(values & defined);
}

Monomial leading_monomial(const BoolPoly &p, const MonomialOrder &order) {
  if (p.is_zero())
    throw InputError("leading monomial of the zero polynomial");
  Monomial best = p.terms().front();
  for (Monomial m : p.terms())
    if (order.less(best, m))
      best = m;
  return best;
}

std::vector<std::uint8_t> truth_table(const BoolPoly &p, int n) {
  if (n < 0 || n > kMaxTruthTableVariables)
    throw InputError("truth tables are limited to " + std::to_string(kMaxTruthTableVariables) +
                     " variables");
  std::vector<std::uint64_t> points(std::size_t{1} << n);
  for (std::size_t a = 0; a < points.size(); ++a)
    points[a] = a;
  return kernels::omp::evaluate_many(p.terms(), points);
}

BoolPoly anf_from_truth_table(std::span<const std::uint8_t> table, int n) {
  if (n < 0 || n > kMaxTruthTableVariables)
    throw InputError("truth tables are limited to " + std::to_string(kMaxTruthTableVariables) +
                     " variables");
  if (table.size() != (std::size_t{1} << n))
    throw InputError("truth table size does not match 2^n");
  std::vector<std::uint8_t> coeff(table.begin(), table.end());
  for (auto &c : coeff)
    c &= 1U;
  kernels::omp::moebius(coeff, n);
  std::vector<Monomial> terms;
  for (std::size_t m = 0; m < coeff.size(); ++m)
    if (coeff[m])
      terms.emplace_back(m);
  return BoolPoly::from_sorted_unique(std::move(terms));
}

namespace {

class Parser {
public:
  Parser(std::string_view text, const VariableTable &vars) : text_(text), vars_(vars) {}

  BoolPoly parse() {
    BoolPoly p = expr();
    skip_space();
    if (pos_ != text_.size())
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

private:
  BoolPoly expr() {
    BoolPoly acc = term();
    while (peek() == '+') {
      ++pos_;
      acc += term();
    }
    return acc;
  }

  BoolPoly term() {
    BoolPoly acc = factor();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        acc = acc * factor();
      } else if (c == '(' || c == '0' || c == '1' || std::isalpha(static_cast<unsigned char>(c))) {
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  BoolPoly factor() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      BoolPoly inner = expr();
      if (peek() != ')')
        fail("missing ')'");
      ++pos_;
      return inner;
    }
    if (c == '0') {
      ++pos_;
      return BoolPoly::zero();
    }
    if (c == '1') {
      ++pos_;
      return BoolPoly::one();
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      auto idx = vars_.index_of_code(c);
      if (!idx)
        fail(std::string("unknown variable '") + c + "'");
      ++pos_;
      return BoolPoly::variable(*idx);
    }
    fail(c == '\0' ? "unexpected end of input" : "unexpected '" + std::string(1, c) + "'");
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string &what) const {
    throw InputError("polynomial '" + std::string(text_) + "' at offset " + std::to_string(pos_) +
                     ": " + what);
  }

  std::string_view text_;
  const VariableTable &vars_;
  std::size_t pos_ = 0;
};

} // namespace

BoolPoly parse_poly(std::string_view text, const VariableTable &vars) {
  return Parser(text, vars).parse();
}

std::vector<Monomial> sorted_terms(const BoolPoly &p, const MonomialOrder &order) {
  std::vector<Monomial> terms = p.terms();
  std::sort(terms.begin(), terms.end(),
            [&](Monomial a, Monomial b) { return order.less(b, a); });
  return terms;
}

std::string format_monomial(Monomial m, const VariableTable &vars, std::string_view sep) {
  if (m.is_one())
    return "1";
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!m.contains(i))
      continue;
    if (!out.empty())
      out.append(sep);
    out.push_back(vars[i].code);
  }
  return out;
}

std::string format_poly(const BoolPoly &p, const VariableTable &vars, const MonomialOrder &order) {
  if (p.is_zero())
    return "0";
  std::string out;
  for (Monomial m : sorted_terms(p, order)) {
    if (!out.empty())
      out += " + ";
    out += format_monomial(m, vars);
  }
  return out;
}

std::string format_poly(const BoolPoly &p, const VariableTable &vars) {
  return format_poly(p, vars, MonomialOrder::standard(vars));
}

} // namespace boolrules
