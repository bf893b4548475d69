#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "lfi/formula.hpp"

namespace lfi {

// Value order 1 < 1/2 < 0 drives enumeration.
enum class TruthValue : std::uint8_t { One = 0, Half = 1, Zero = 2 };

inline constexpr std::array<TruthValue, 3> kTruthValues = {TruthValue::One, TruthValue::Half, TruthValue::Zero};

inline bool designated(TruthValue v) { return v != TruthValue::Zero; }

inline std::string to_string(TruthValue v) {
  switch (v) {
    case TruthValue::One: return "1";
    case TruthValue::Half: return "1/2";
    case TruthValue::Zero: return "0";
  }
  return "?";
}

// Bitmask over TruthValue.
class ValueSet {
 public:
  constexpr ValueSet() = default;
  constexpr ValueSet(std::initializer_list<TruthValue> vs) {
    for (TruthValue v : vs) bits_ |= bit(v);
  }
  constexpr bool contains(TruthValue v) const { return (bits_ & bit(v)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return (bits_ & 1) + ((bits_ >> 1) & 1) + ((bits_ >> 2) & 1); }
  constexpr std::uint8_t bits() const { return bits_; }
  friend constexpr bool operator==(ValueSet, ValueSet) = default;

 private:
  static constexpr std::uint8_t bit(TruthValue v) { return static_cast<std::uint8_t>(1u << static_cast<int>(v)); }
  std::uint8_t bits_ = 0;
};

inline constexpr ValueSet kDesignated{TruthValue::One, TruthValue::Half};
inline constexpr ValueSet kFalse{TruthValue::Zero};

class Nmatrix {
 public:
  static const Nmatrix& cbr() {
    static const Nmatrix m = [] {
      Nmatrix n;
      n.name_ = "Cbr";
      n.circ_ = {kDesignated, kFalse, kDesignated};
      return n;
    }();
    return m;
  }
  static const Nmatrix& cie() {
    static const Nmatrix m = [] {
      Nmatrix n;
      n.name_ = "Cie";
      n.circ_ = {ValueSet{TruthValue::One}, kFalse, ValueSet{TruthValue::One}};
      return n;
    }();
    return m;
  }

  const std::string& name() const { return name_; }

  ValueSet unary(Connective c, TruthValue a) const {
    const auto i = static_cast<std::size_t>(a);
    if (c == Connective::Neg) return neg_[i];
    if (c == Connective::Circ) return circ_[i];
    throw std::invalid_argument("not a unary connective");
  }

  ValueSet binary(Connective c, TruthValue a, TruthValue b) const {
    switch (c) {
      case Connective::And: return designated(a) && designated(b) ? kDesignated : kFalse;
      case Connective::Or: return designated(a) || designated(b) ? kDesignated : kFalse;
      case Connective::Imp: return designated(a) && !designated(b) ? kFalse : kDesignated;
      default: throw std::invalid_argument("not a binary connective");
    }
  }

 private:
  Nmatrix() = default;
  std::string name_;
  std::array<ValueSet, 3> neg_ = {kFalse, ValueSet{TruthValue::Half}, ValueSet{TruthValue::One}};
  std::array<ValueSet, 3> circ_{};
};

inline ValueSet legal_values(const Nmatrix& m, Connective c, const std::vector<TruthValue>& children) {
  if (is_unary(c)) {
    if (children.size() != 1) throw std::invalid_argument("arity mismatch");
    return m.unary(c, children[0]);
  }
  if (is_binary(c)) {
    if (children.size() != 2) throw std::invalid_argument("arity mismatch");
    return m.binary(c, children[0], children[1]);
  }
  throw std::invalid_argument("atoms have no table");
}

class Valuation {
 public:
  Valuation(std::vector<Formula> formulas, std::vector<TruthValue> values)
      : formulas_(std::move(formulas)), values_(std::move(values)) {}

  std::size_t size() const { return formulas_.size(); }
  const Formula& formula(std::size_t i) const { return formulas_[i]; }
  TruthValue value(std::size_t i) const { return values_[i]; }
  const std::vector<TruthValue>& values() const { return values_; }

  std::optional<TruthValue> value_of(const Formula& f) const {
    for (std::size_t i = 0; i < formulas_.size(); ++i)
      if (formulas_[i] == f) return values_[i];
    return std::nullopt;
  }

  friend bool operator==(const Valuation&, const Valuation&) = default;

 private:
  std::vector<Formula> formulas_;
  std::vector<TruthValue> values_;
};

struct Limits {
  std::size_t max_subformulas = 18;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Verdict {
  bool valid = true;
  std::optional<Valuation> countermodel;
};

namespace detail {

// Depth-first search over legal valuations of an index. Atoms are assigned
// first, then compounds in index order, values tried in the order 1, 1/2, 0.
//
// With `collapse` set, a node whose value is only ever read through its
// designation (no ¬ or ∘ parent in the index) tries 1 in place of the choice
// {1, 1/2}, and atoms of that kind try {1, 0}. Every designation pattern is
// still reached.
class ValuationSearch {
 public:
  ValuationSearch(const Nmatrix& m, const SubformulaIndex& index, bool collapse)
      : m_(m), index_(index), exact_(index.size(), !collapse), values_(index.size(), TruthValue::One) {
    for (std::size_t i = 0; i < index.size(); ++i)
      if (index[i].is_atom()) order_.push_back(i);
    for (std::size_t i = 0; i < index.size(); ++i)
      if (!index[i].is_atom()) order_.push_back(i);
    if (collapse) {
      for (std::size_t i = 0; i < index.size(); ++i)
        if (is_unary(index[i].kind())) exact_[index.left(i)] = true;
    }
  }

  // reject(node, value) prunes a branch; visit(values) returns false to stop.
  template <class Reject, class Visit>
  void run(Reject&& reject, Visit&& visit) {
    stop_ = false;
    dfs(0, reject, visit);
  }

  const std::vector<TruthValue>& values() const { return values_; }

 private:
  ValueSet candidates(std::size_t i) const {
    const Formula& f = index_[i];
    ValueSet cell;
    if (f.is_atom()) {
      cell = ValueSet{TruthValue::One, TruthValue::Half, TruthValue::Zero};
    } else if (is_unary(f.kind())) {
      cell = m_.unary(f.kind(), values_[index_.left(i)]);
    } else {
      cell = m_.binary(f.kind(), values_[index_.left(i)], values_[index_.right(i)]);
    }
    if (!exact_[i] && cell.contains(TruthValue::One) && cell.contains(TruthValue::Half)) {
      ValueSet reduced{TruthValue::One};
      if (cell.contains(TruthValue::Zero)) reduced = ValueSet{TruthValue::One, TruthValue::Zero};
      return reduced;
    }
    return cell;
  }

  template <class Reject, class Visit>
  void dfs(std::size_t depth, Reject& reject, Visit& visit) {
    if (depth == order_.size()) {
      if (!visit(values_)) stop_ = true;
      return;
    }
    const std::size_t i = order_[depth];
    const ValueSet cell = candidates(i);
    for (TruthValue v : kTruthValues) {
      if (!cell.contains(v)) continue;
      if (reject(i, v)) continue;
      values_[i] = v;
      dfs(depth + 1, reject, visit);
      if (stop_) return;
    }
  }

  const Nmatrix& m_;
  const SubformulaIndex& index_;
  std::vector<std::size_t> order_;
  std::vector<bool> exact_;
  std::vector<TruthValue> values_;
  bool stop_ = false;
};

inline void check_budget(const SubformulaIndex& index, const Limits& limits) {
  if (index.size() > limits.max_subformulas)
    throw BudgetExceeded("instance has " + std::to_string(index.size()) + " distinct subformulas, limit is " +
                         std::to_string(limits.max_subformulas));
}

}  // namespace detail

// Calls fn on every legal valuation of the index in enumeration order;
// fn returns false to stop early.
template <class Fn>
void for_each_valuation(const Nmatrix& m, const SubformulaIndex& index, Fn&& fn) {
  detail::ValuationSearch search(m, index, false);
  search.run([](std::size_t, TruthValue) { return false; },
             [&](const std::vector<TruthValue>& vs) { return static_cast<bool>(fn(Valuation(index.entries(), vs))); });
}

inline std::vector<Valuation> valuations(const Nmatrix& m, const SubformulaIndex& index) {
  std::vector<Valuation> out;
  for_each_valuation(m, index, [&](Valuation v) {
    out.push_back(std::move(v));
    return true;
  });
  return out;
}

// Finds the first legal valuation designating every premise and not the
// conclusion. The reported countermodel is the one full enumeration meets
// first.
inline Verdict holds(const Nmatrix& m, const std::vector<Formula>& premises, const Formula& conclusion,
                     const Limits& limits = {}) {
  std::vector<Formula> all = premises;
  all.push_back(conclusion);
  SubformulaIndex index(all);
  detail::check_budget(index, limits);

  std::vector<int> role(index.size(), 0);  // 1 premise, 2 conclusion, 3 both
  for (const Formula& p : premises) role[*index.find(p)] |= 1;
  role[*index.find(conclusion)] |= 2;
  if (role[*index.find(conclusion)] == 3) return {};

  auto reject = [&](std::size_t i, TruthValue v) {
    if ((role[i] & 1) && !designated(v)) return true;
    if ((role[i] & 2) && designated(v)) return true;
    return false;
  };

  // Swapping 1/2 for 1 at a collapsed node keeps a countermodel and makes it
  // lexicographically smaller, so the globally first one is in the collapsed space.
  detail::ValuationSearch search(m, index, true);
  std::optional<Valuation> witness;
  search.run(reject, [&](const std::vector<TruthValue>& vs) {
    witness = Valuation(index.entries(), vs);
    return false;
  });
  if (!witness) return {};
  return Verdict{false, std::move(witness)};
}

inline Verdict is_theorem(const Nmatrix& m, const Formula& f, const Limits& limits = {}) {
  return holds(m, {}, f, limits);
}

inline Verdict equivalent(const Nmatrix& m, const Formula& a, const Formula& b, const Limits& limits = {}) {
  return holds(m, {}, Formula::iff(a, b), limits);
}

// Distinct designation patterns (bit i set iff index[i] is designated) over
// all legal valuations, sorted.
inline std::vector<boost::dynamic_bitset<>> designation_patterns(const Nmatrix& m, const SubformulaIndex& index) {
  std::vector<boost::dynamic_bitset<>> out;
  detail::ValuationSearch search(m, index, true);
  search.run([](std::size_t, TruthValue) { return false; },
             [&](const std::vector<TruthValue>& vs) {
               boost::dynamic_bitset<> bits(vs.size());
               for (std::size_t i = 0; i < vs.size(); ++i) bits[i] = designated(vs[i]);
               out.push_back(std::move(bits));
               return true;
             });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace lfi
