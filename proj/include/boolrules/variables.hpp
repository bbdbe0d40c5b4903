#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace boolrules {

inline constexpr std::size_t kMaxVariables = 63;

struct Variable {
  std::string name;
  char code = '?';
};

/// Ordered variables of a Boolean ring. Position in the table is the bit
/// index used by monomials and assignments; exactly one entry is the class
/// variable (the label being explained).
class VariableTable {
public:
  VariableTable() = default;

  /// Features in the given order followed by the class variable.
  VariableTable(std::vector<Variable> features, Variable class_variable);

  /// Convenience: one letter per variable, the class variable is the
  /// character `class_code` and must occur in `codes`.
  static VariableTable from_codes(const std::string &codes, char class_code);

  std::size_t size() const noexcept { return vars_.size(); }
  std::size_t feature_count() const noexcept { return vars_.empty() ? 0 : vars_.size() - 1; }
  std::size_t class_index() const noexcept { return class_index_; }
  const Variable &operator[](std::size_t i) const { return vars_.at(i); }
  const std::vector<Variable> &variables() const noexcept { return vars_; }

  std::optional<std::size_t> index_of_code(char code) const;
  std::optional<std::size_t> index_of_name(const std::string &name) const;

  /// Codes in table order, e.g. "EFGLMyPxTs".
  std::string codes() const;

  /// Mask with every feature bit set (class bit clear).
  std::uint64_t feature_mask() const noexcept;
  std::uint64_t class_bit() const noexcept { return std::uint64_t{1} << class_index_; }
  std::uint64_t full_mask() const noexcept;

  friend bool operator==(const VariableTable &, const VariableTable &);

private:
  std::vector<Variable> vars_;
  std::size_t class_index_ = 0;
};

bool operator==(const Variable &a, const Variable &b);

} // namespace boolrules
