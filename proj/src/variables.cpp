#include "boolrules/variables.hpp"

#include <cctype>
#include <cstdint>

#include "boolrules/error.hpp"

namespace boolrules {

namespace {

void validate_code(char code) {
  if (!std::isalpha(static_cast<unsigned char>(code)))
    throw InputError(std::string("variable code must be a letter, got '") + code + "'");
}

} // namespace

VariableTable::VariableTable(std::vector<Variable> features, Variable class_variable)
    : vars_(std::move(features)) {
  vars_.push_back(std::move(class_variable));
  class_index_ = vars_.size() - 1;
  if (vars_.size() > kMaxVariables)
    throw InputError("at most " + std::to_string(kMaxVariables) + " variables are supported, got " +
                     std::to_string(vars_.size()));
  bool seen[256] = {};
  for (const auto &v : vars_) {
    validate_code(v.code);
    auto &slot = seen[static_cast<unsigned char>(v.code)];
    if (slot)
      throw InputError(std::string("duplicate variable code '") + v.code + "'");
    slot = true;
  }
}

VariableTable VariableTable::from_codes(const std::string &codes, char class_code) {
  std::vector<Variable> features;
  std::optional<Variable> cls;
  for (char c : codes) {
    Variable v{std::string(1, c), c};
    if (c == class_code) {
      if (cls)
        throw InputError(std::string("class code '") + c + "' appears twice");
      cls = v;
    } else {
      features.push_back(v);
    }
  }
  if (!cls)
    throw InputError(std::string("class code '") + class_code + "' missing from '" + codes + "'");
  return VariableTable(std::move(features), *cls);
}

std::optional<std::size_t> VariableTable::index_of_code(char code) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].code == code)
      return i;
  return std::nullopt;
}

std::optional<std::size_t> VariableTable::index_of_name(const std::string &name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name)
      return i;
  return std::nullopt;
}

std::string VariableTable::codes() const {
  std::string out;
  for (const auto &v : vars_)
    out.push_back(v.code);
  return out;
}

std::uint64_t VariableTable::full_mask() const noexcept {
  return vars_.size() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << vars_.size()) - 1;
}

std::uint64_t VariableTable::feature_mask() const noexcept { return full_mask() & ~class_bit(); }

bool operator==(const Variable &a, const Variable &b) { return a.name == b.name && a.code == b.code; }

bool operator==(const VariableTable &a, const VariableTable &b) {
  return a.class_index_ == b.class_index_ && a.vars_ == b.vars_;
}

} // namespace boolrules
