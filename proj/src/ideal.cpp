#include "boolrules/ideal.hpp"

#include <algorithm>

namespace boolrules {

Ideal::Ideal(std::string label, MonomialOrder order, std::vector<BoolPoly> generators)
    : label_(std::move(label)), state_(std::make_shared<State>()) {
  state_->order = std::move(order);
  for (auto &g : generators)
    if (!g.is_zero())
      state_->generators.push_back(std::move(g));
}

const GroebnerBasis &Ideal::basis() const {
  std::call_once(state_->once, [this] {
    state_->basis = BasisCache::global().get_or_compute(state_->generators, state_->order);
  });
  return *state_->basis;
}

bool Ideal::basis_ready() const noexcept { return state_->basis != nullptr; }

Ideal Ideal::extend(std::span<const BoolPoly> polys) const {
  std::vector<BoolPoly> gens = state_->generators;
  gens.insert(gens.end(), polys.begin(), polys.end());
  return Ideal(label_, state_->order, std::move(gens));
}

BasisCache &BasisCache::global() {
  static BasisCache cache;
  return cache;
}

std::shared_ptr<const GroebnerBasis> BasisCache::get_or_compute(const std::vector<BoolPoly> &generators,
                                                                const MonomialOrder &order) {
  std::vector<BoolPoly> key = generators;
  std::sort(key.begin(), key.end());
  {
    std::lock_guard lock(mutex_);
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      if (it->order == order && it->key == key) {
        ++hits_;
        Entry e = std::move(*it);
        entries_.erase(it);
        entries_.push_back(std::move(e));
        return entries_.back().basis;
      }
    }
    ++misses_;
  }
  auto basis = std::make_shared<const GroebnerBasis>(groebner_basis(generators, order));
  std::lock_guard lock(mutex_);
  entries_.push_back({std::move(key), order, basis});
  if (entries_.size() > kCapacity)
    entries_.erase(entries_.begin());
  return basis;
}

std::size_t BasisCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t BasisCache::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

void BasisCache::clear() {
  std::lock_guard lock(mutex_);
  entries_.clear();
  hits_ = 0;
  misses_ = 0;
}

Ideal ideal_from_patterns(const PatternTable &patterns, const MonomialOrder &order, std::string label) {
  return Ideal(std::move(label), order, {build_sigma(patterns)});
}

bool membership(const BoolPoly &p, const Ideal &ideal) {
  return normal_form(p, ideal.basis()).is_zero();
}

std::vector<BoolPoly> remainders_mod(std::span<const BoolPoly> source, const Ideal &ideal) {
  return normal_forms(source, ideal.basis());
}

} // namespace boolrules
