#include "boolrules/monomial.hpp"

#include <algorithm>

#include "boolrules/error.hpp"
#include "boolrules/variables.hpp"

namespace boolrules {

std::string_view to_string(OrderKind kind) {
  switch (kind) {
  case OrderKind::DegLex:
    return "deglex";
  case OrderKind::DegRevLex:
    return "degrevlex";
  case OrderKind::Lex:
    return "lex";
  }
  return "?";
}

OrderKind parse_order_kind(std::string_view text) {
  if (text == "deglex")
    return OrderKind::DegLex;
  if (text == "degrevlex")
    return OrderKind::DegRevLex;
  if (text == "lex")
    return OrderKind::Lex;
  throw InputError("unknown monomial order '" + std::string(text) + "'");
}

MonomialOrder::MonomialOrder(OrderKind kind, std::vector<std::size_t> precedence)
    : kind_(kind), precedence_(std::move(precedence)) {
  const std::size_t n = precedence_.size();
  if (n > kMaxVariables)
    throw InputError("monomial order over too many variables");
  rank_of_var_.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t v = precedence_[i];
    if (v >= n || rank_of_var_[v] != -1)
      throw InputError("monomial order precedence must be a permutation of the variables");
    rank_of_var_[v] = static_cast<int>(n - 1 - i);
  }
}

MonomialOrder MonomialOrder::standard(const VariableTable &vars, OrderKind kind) {
  std::vector<std::size_t> prec;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (i != vars.class_index())
      prec.push_back(i);
  prec.push_back(vars.class_index());
  return MonomialOrder(kind, std::move(prec));
}

std::uint64_t MonomialOrder::to_rank(Monomial m) const noexcept {
  std::uint64_t out = 0;
  for (std::uint64_t b = m.bits(); b; b &= b - 1)
    out |= std::uint64_t{1} << rank_of_var_[std::countr_zero(b)];
  return out;
}

Monomial MonomialOrder::from_rank(std::uint64_t ranked) const noexcept {
  const std::size_t n = precedence_.size();
  std::uint64_t out = 0;
  for (std::uint64_t b = ranked; b; b &= b - 1) {
    int r = std::countr_zero(b);
    out |= std::uint64_t{1} << precedence_[n - 1 - static_cast<std::size_t>(r)];
  }
  return Monomial{out};
}

std::string MonomialOrder::describe(const VariableTable &vars) const {
  std::string out(to_string(kind_));
  out.push_back(':');
  for (std::size_t v : precedence_)
    out.push_back(vars[v].code);
  return out;
}

MonomialOrder MonomialOrder::parse(std::string_view descriptor, const VariableTable &vars) {
  auto colon = descriptor.find(':');
  OrderKind kind = parse_order_kind(descriptor.substr(0, colon));
  if (colon == std::string_view::npos)
    return standard(vars, kind);
  std::vector<std::size_t> prec;
  for (char c : descriptor.substr(colon + 1)) {
    auto idx = vars.index_of_code(c);
    if (!idx)
      throw InputError(std::string("unknown variable '") + c + "' in order descriptor");
    prec.push_back(*idx);
  }
  if (prec.size() != vars.size())
    throw InputError("order descriptor must list every variable exactly once");
  return MonomialOrder(kind, std::move(prec));
}

} // namespace boolrules
