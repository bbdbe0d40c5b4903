#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "boolrules/dataset.hpp"
#include "boolrules/groebner.hpp"

namespace boolrules {

/// Persistent ideal value: generators plus a lazily computed reduced
/// Gröbner basis. Copies share the generator list and the basis; extend()
/// returns a new value and leaves this one untouched.
class Ideal {
public:
  Ideal() : Ideal("", MonomialOrder{}) {}
  Ideal(std::string label, MonomialOrder order, std::vector<BoolPoly> generators = {});

  const std::string &label() const noexcept { return label_; }
  const MonomialOrder &order() const noexcept { return state_->order; }
  const std::vector<BoolPoly> &generators() const noexcept { return state_->generators; }

  /// Computed on first use; concurrent callers wait for one computation.
  const GroebnerBasis &basis() const;
  bool basis_ready() const noexcept;

  Ideal extend(std::span<const BoolPoly> polys) const;

private:
  struct State {
    std::vector<BoolPoly> generators;
    MonomialOrder order;
    mutable std::once_flag once;
    mutable std::shared_ptr<const GroebnerBasis> basis;
  };

  std::string label_;
  std::shared_ptr<State> state_;
};

/// Process-wide memo of reduced bases keyed by (generator multiset, order).
class BasisCache {
public:
  static BasisCache &global();

  std::shared_ptr<const GroebnerBasis> get_or_compute(const std::vector<BoolPoly> &generators,
                                                      const MonomialOrder &order);
  std::size_t hits() const;
  std::size_t misses() const;
  /// Drops every entry and resets the counters.
  void clear();

private:
  struct Entry {
    std::vector<BoolPoly> key;
    MonomialOrder order;
    std::shared_ptr<const GroebnerBasis> basis;
  };
  static constexpr std::size_t kCapacity = 32;

  mutable std::mutex mutex_;
  std::vector<Entry> entries_; // most recent last
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

/// Ideal of all criteria that select no observed pattern, generated by
/// build_sigma(patterns).
Ideal ideal_from_patterns(const PatternTable &patterns, const MonomialOrder &order,
                          std::string label = "I");

bool membership(const BoolPoly &p, const Ideal &ideal);

/// Normal forms of `source` modulo the ideal, order preserved, zeros kept.
std::vector<BoolPoly> remainders_mod(std::span<const BoolPoly> source, const Ideal &ideal);

} // namespace boolrules
