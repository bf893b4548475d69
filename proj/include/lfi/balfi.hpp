#pragma once

#include <bit>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lfi/formula.hpp"
#include "lfi/interval_set.hpp"

namespace lfi {

enum class BalfiClass { RmbC, RmbCciw, RCbr, RCie };

inline std::string to_string(BalfiClass c) {
  switch (c) {
    case BalfiClass::RmbC: return "RmbC";
    case BalfiClass::RmbCciw: return "RmbCciw";
    case BalfiClass::RCbr: return "RCbr";
    case BalfiClass::RCie: return "RCie";
  }
  return "?";
}

// A Boolean algebra with the two LFI operators.
template <class A>
concept LfiAlgebra = requires(const A& a, const typename A::element_type& x) {
  { a.top() } -> std::convertible_to<typename A::element_type>;
  { a.bottom() } -> std::convertible_to<typename A::element_type>;
  { a.meet(x, x) } -> std::convertible_to<typename A::element_type>;
  { a.join(x, x) } -> std::convertible_to<typename A::element_type>;
  { a.complement(x) } -> std::convertible_to<typename A::element_type>;
  { a.neg(x) } -> std::convertible_to<typename A::element_type>;
  { a.circ(x) } -> std::convertible_to<typename A::element_type>;
} && std::equality_comparable<typename A::element_type>;

template <LfiAlgebra A>
typename A::element_type implies(const A& a, const typename A::element_type& x, const typename A::element_type& y) {
  return a.join(a.complement(x), y);
}

class UnassignedAtom : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

template <LfiAlgebra A>
using Assignment = std::map<std::string, typename A::element_type>;

// The homomorphic extension of an atom assignment.
template <LfiAlgebra A>
typename A::element_type evaluate(const A& a, const Assignment<A>& h, const Formula& f) {
  switch (f.kind()) {
    case Connective::Atom: {
      auto it = h.find(f.name());
      if (it == h.end()) throw UnassignedAtom("atom '" + f.name() + "' is not assigned");
      return it->second;
    }
    case Connective::Neg: return a.neg(evaluate(a, h, f.operand()));
    case Connective::Circ: return a.circ(evaluate(a, h, f.operand()));
    case Connective::And: return a.meet(evaluate(a, h, f.lhs()), evaluate(a, h, f.rhs()));
    case Connective::Or: return a.join(evaluate(a, h, f.lhs()), evaluate(a, h, f.rhs()));
    case Connective::Imp: return implies(a, evaluate(a, h, f.lhs()), evaluate(a, h, f.rhs()));
  }
  throw std::logic_error("unreachable");
}

struct EquationViolation {
  std::string equation;
  std::string witness;
};

// Class equations of cls checked at each of the given elements.
template <LfiAlgebra A, class Range, class Show>
std::vector<EquationViolation> class_violations(const A& a, BalfiClass cls, const Range& elements, Show&& show) {
  std::vector<EquationViolation> out;
  for (const auto& x : elements) {
    const auto nx = a.neg(x);
    const auto cx = a.circ(x);
    const auto clash = a.meet(x, nx);
    auto check = [&](bool ok, const char* eq) {
      if (!ok) out.push_back({eq, show(x)});
    };
    check(a.join(x, nx) == a.top(), "x ⊔ ¬x = 1");
    check(a.meet(clash, cx) == a.bottom(), "x ⊓ ¬x ⊓ ∘x = 0");
    if (cls == BalfiClass::RmbCciw || cls == BalfiClass::RCbr)
      check(cx == a.complement(clash), "∘x = −(x ⊓ ¬x)");
    if (cls == BalfiClass::RCbr || cls == BalfiClass::RCie) check(a.neg(nx) == x, "¬¬x = x");
    if (cls == BalfiClass::RCie) check(a.neg(cx) == clash, "¬∘x = x ⊓ ¬x");
  }
  return out;
}

// ------------------------------------------------------------ finite BALFIs

// Carrier: subsets of {0..atoms-1} encoded as bitmasks.
class FiniteBalfi {
 public:
  using element_type = std::uint32_t;

  FiniteBalfi(int atoms, std::vector<element_type> neg, std::vector<element_type> circ, BalfiClass cls)
      : atoms_(atoms), neg_(std::move(neg)), circ_(std::move(circ)), cls_(cls) {
    if (atoms < 0 || atoms > 4) throw std::invalid_argument("carrier limited to 4 atoms");
    if (neg_.size() != size() || circ_.size() != size()) throw std::invalid_argument("operator tables not total");
    for (std::size_t i = 0; i < size(); ++i)
      if (neg_[i] > top() || circ_[i] > top()) throw std::invalid_argument("table value outside the carrier");
  }

  // ¬ = complement, ∘ = 1.
  static FiniteBalfi boolean(int atoms, BalfiClass cls) {
    const std::size_t n = std::size_t{1} << atoms;
    std::vector<element_type> neg(n), circ(n, static_cast<element_type>(n - 1));
    for (std::size_t x = 0; x < n; ++x) neg[x] = static_cast<element_type>((n - 1) ^ x);
    return FiniteBalfi(atoms, std::move(neg), std::move(circ), cls);
  }

  int atoms() const { return atoms_; }
  std::size_t size() const { return std::size_t{1} << atoms_; }
  BalfiClass cls() const { return cls_; }
  const std::vector<element_type>& neg_table() const { return neg_; }
  const std::vector<element_type>& circ_table() const { return circ_; }

  std::vector<element_type> elements() const {
    std::vector<element_type> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = static_cast<element_type>(i);
    return out;
  }

  element_type top() const { return static_cast<element_type>(size() - 1); }
  element_type bottom() const { return 0; }
  element_type meet(element_type a, element_type b) const { return a & b; }
  element_type join(element_type a, element_type b) const { return a | b; }
  element_type complement(element_type a) const { return top() ^ a; }
  element_type neg(element_type a) const { return neg_[a]; }
  element_type circ(element_type a) const { return circ_[a]; }

  std::string show(element_type x) const {
    std::string s = "{";
    for (int i = 0; i < atoms_; ++i)
      if (x >> i & 1u) s += (s.size() > 1 ? "," : "") + std::string("a") + std::to_string(i);
    return s + "}";
  }

  friend bool operator==(const FiniteBalfi&, const FiniteBalfi&) = default;

 private:
  int atoms_;
  std::vector<element_type> neg_;
  std::vector<element_type> circ_;
  BalfiClass cls_;
};

inline std::vector<EquationViolation> check_balfi(const FiniteBalfi& b) {
  return class_violations(b, b.cls(), b.elements(), [&](FiniteBalfi::element_type x) { return b.show(x); });
}

namespace detail {

inline std::vector<std::uint32_t> submasks(std::uint32_t m) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0;; s = (s - m) & m) {
    out.push_back(s);
    if (s == m) break;
  }
  return out;
}

// Calls fn on every choice vector; fn returns false to stop. Returns false if stopped.
template <class Fn>
bool for_each_product(const std::vector<std::vector<std::uint32_t>>& choices, Fn&& fn) {
  for (const auto& c : choices)
    if (c.empty()) return true;
  std::vector<std::size_t> pick(choices.size(), 0);
  std::vector<std::uint32_t> cur(choices.size());
  while (true) {
    for (std::size_t i = 0; i < choices.size(); ++i) cur[i] = choices[i][pick[i]];
    if (!fn(cur)) return false;
    std::size_t i = choices.size();
    while (i > 0) {
      --i;
      if (++pick[i] < choices[i].size()) break;
      pick[i] = 0;
      if (i == 0) return true;
    }
    if (choices.empty()) return true;
  }
}

// Involutions ¬ with x ⊔ ¬x = 1, found left to right over the carrier.
template <class Fn>
bool for_each_involution(std::uint32_t top, std::vector<std::uint32_t>& neg, std::vector<bool>& set, std::uint32_t x,
                         Fn& fn) {
  const std::uint32_t n = top + 1;
  while (x < n && set[x]) ++x;
  if (x == n) return fn(neg);
  for (std::uint32_t y : submasks(top)) {
    if ((x | y) != top) continue;
    if (y != x && set[y]) continue;
    neg[x] = y;
    neg[y] = x;
    set[x] = set[y] = true;
    const bool go_on = for_each_involution(top, neg, set, x + 1, fn);
    set[x] = set[y] = false;
    if (!go_on) return false;
  }
  return true;
}

}  // namespace detail

// Every structure of the class on 2^n elements, in a fixed order: ¬ tables
// first, then ∘ tables, each lexicographic by element. fn returns false to stop.
template <class Fn>
void for_each_balfi(int n, BalfiClass cls, Fn&& fn) {
  if (n < 0 || n > 4) throw std::invalid_argument("enumeration limited to 4 atoms (16 elements)");
  const std::uint32_t top = (1u << n) - 1;
  const std::size_t size = std::size_t{1} << n;

  auto with_circ = [&](const std::vector<std::uint32_t>& neg) {
    std::vector<std::vector<std::uint32_t>> circ_choices(size);
    for (std::uint32_t x = 0; x < size; ++x) {
      const std::uint32_t free = top ^ (x & neg[x]);
      if (cls == BalfiClass::RmbCciw || cls == BalfiClass::RCbr) {
        circ_choices[x] = {free};
      } else {
        for (std::uint32_t c : detail::submasks(free))
          if (cls != BalfiClass::RCie || neg[c] == (x & neg[x])) circ_choices[x].push_back(c);
      }
    }
    return detail::for_each_product(circ_choices, [&](const std::vector<std::uint32_t>& circ) {
      return static_cast<bool>(fn(FiniteBalfi(n, neg, circ, cls)));
    });
  };

  if (cls == BalfiClass::RCbr || cls == BalfiClass::RCie) {
    std::vector<std::uint32_t> neg(size, 0);
    std::vector<bool> set(size, false);
    detail::for_each_involution(top, neg, set, 0, with_circ);
  } else {
    std::vector<std::vector<std::uint32_t>> neg_choices(size);
    for (std::uint32_t x = 0; x < size; ++x)
      for (std::uint32_t extra : detail::submasks(x)) neg_choices[x].push_back((top ^ x) | extra);
    detail::for_each_product(neg_choices, with_circ);
  }
}

inline std::vector<FiniteBalfi> enumerate_balfis(int n, BalfiClass cls, std::size_t cap = 1'000'000) {
  std::vector<FiniteBalfi> out;
  for_each_balfi(n, cls, [&](const FiniteBalfi& b) {
    if (out.size() == cap) throw std::length_error("more than " + std::to_string(cap) + " structures");
    out.push_back(b);
    return true;
  });
  return out;
}

// Facts about injectivity and consistent elements that hold in any structure
// with an involutive ¬ and x ⊔ ¬x = 1. Returns the names of failed checks.
inline std::vector<std::string> lemma_violations(const FiniteBalfi& b) {
  std::vector<std::string> out;
  const auto elems = b.elements();
  auto consistent = [&](std::uint32_t x) { return b.meet(x, b.neg(x)) == 0; };
  for (auto x : elems)
    for (auto y : elems)
      if (x != y && b.neg(x) == b.neg(y)) {
        out.push_back("¬ injective at " + b.show(x) + ", " + b.show(y));
      }
  for (auto x : elems) {
    const auto c = b.complement(x);
    auto check = [&](bool ok, const std::string& what) {
      if (!ok) out.push_back(what + " at " + b.show(x));
    };
    check(consistent(x) == (b.neg(x) == c), "x∈C iff ¬x = −x");
    check(consistent(x) == (x == b.neg(c)), "(1) x∈C iff x = ¬−x");
    check(consistent(x) == (x == b.complement(b.neg(x))), "(2) x∈C iff x = −¬x");
    check(consistent(x) == consistent(c), "(3) x∈C iff −x∈C");
    check(consistent(x) == consistent(b.neg(x)), "(4) x∈C iff ¬x∈C");
    check(!consistent(x) == !consistent(c), "(5) x∈I iff −x∈I");
    check(!consistent(x) == !consistent(b.neg(x)), "(6) x∈I iff ¬x∈I");
  }
  return out;
}

// ---------------------------------------------------------- consequence

enum class ModelStatus { Holds, Fails, Unknown };

template <class E>
struct ModelVerdict {
  ModelStatus status = ModelStatus::Holds;
  std::map<std::string, E> witness;  // set when Fails
  std::optional<E> value;            // value of the tested formula under witness
};

// (γ1 ∧ … ∧ γn) → goal, the strongest of the subset implications; valid for
// some premise subset iff valid for the full set.
inline Formula consequence_formula(const std::vector<Formula>& premises, const Formula& goal) {
  if (premises.empty()) return goal;
  Formula acc = premises.back();
  for (std::size_t i = premises.size() - 1; i-- > 0;) acc = Formula::conj(premises[i], acc);
  return Formula::imp(acc, goal);
}

// Tries every assignment of goal/premise atoms (sorted by name) drawn from
// candidates, in lexicographic order. `exhaustive` says whether the
// candidates are the whole carrier, which makes Holds a proof.
template <LfiAlgebra A>
ModelVerdict<typename A::element_type> consequence_over(const A& a, const std::vector<Formula>& premises,
                                                        const Formula& goal,
                                                        const std::vector<typename A::element_type>& candidates,
                                                        bool exhaustive) {
  using E = typename A::element_type;
  const Formula f = consequence_formula(premises, goal);
  const auto names = atoms_of(f);
  const std::vector<std::string> atoms(names.begin(), names.end());
  ModelVerdict<E> verdict;
  verdict.status = exhaustive ? ModelStatus::Holds : ModelStatus::Unknown;
  if (candidates.empty()) return verdict;
  std::vector<std::size_t> pick(atoms.size(), 0);
  while (true) {
    Assignment<A> h;
    for (std::size_t i = 0; i < atoms.size(); ++i) h.emplace(atoms[i], candidates[pick[i]]);
    E v = evaluate(a, h, f);
    if (!(v == a.top())) {
      verdict.status = ModelStatus::Fails;
      verdict.witness = std::move(h);
      verdict.value = std::move(v);
      return verdict;
    }
    std::size_t i = atoms.size();
    while (i > 0) {
      --i;
      if (++pick[i] < candidates.size()) break;
      pick[i] = 0;
      if (i == 0) return verdict;
    }
    if (atoms.empty()) return verdict;
  }
}

inline ModelVerdict<FiniteBalfi::element_type> consequence_in(const FiniteBalfi& b, const std::vector<Formula>& premises,
                                                              const Formula& goal) {
  return consequence_over(b, premises, goal, b.elements(), true);
}

// Failure certificates only: Holds is never returned for the infinite model.
inline ModelVerdict<IntervalSet> consequence_in(const IntervalModel& m, const std::vector<Formula>& premises,
                                                const Formula& goal, const std::vector<IntervalSet>& pool) {
  if (pool.empty()) throw std::invalid_argument("the interval model needs a candidate pool");
  return consequence_over(m, premises, goal, pool, false);
}

struct Refutation {
  FiniteBalfi algebra;
  std::map<std::string, FiniteBalfi::element_type> assignment;
};

// First finite structure of the class, by size then enumeration order, in
// which goal is not valid. nullopt is not a validity proof.
inline std::optional<Refutation> refute(BalfiClass cls, int max_atoms, const Formula& goal) {
  if (max_atoms > 4) throw std::invalid_argument("max_atoms must be at most 4");
  std::optional<Refutation> found;
  for (int n = 1; n <= max_atoms && !found; ++n) {
    for_each_balfi(n, cls, [&](const FiniteBalfi& b) {
      auto v = consequence_in(b, {}, goal);
      if (v.status == ModelStatus::Fails) {
        found = Refutation{b, std::move(v.witness)};
        return false;
      }
      return true;
    });
  }
  return found;
}

// ------------------------------------------------------- interval table

struct IntervalRow {
  enum class Kind { LowerRay, UpperRay, Consistent };
  Kind kind;
  std::int64_t n = 0;  // for the rays
  IntervalSet x, neg, clash, circ, neg_neg, circ_neg, neg_circ;
  bool matches_expected = false;
};

inline IntervalRow interval_row(const IntervalSet& x) {
  const IntervalModel m;
  IntervalRow r{IntervalRow::Kind::Consistent, 0, x, m.neg(x), x & m.neg(x), m.circ(x), m.neg(m.neg(x)),
                m.circ(m.neg(x)), m.neg(m.circ(x))};
  const auto lower = x.as_lower_ray();
  const auto upper = x.as_upper_ray();
  if (lower || upper) {
    r.kind = lower ? IntervalRow::Kind::LowerRay : IntervalRow::Kind::UpperRay;
    r.n = lower ? *lower : *upper;
    const IntervalSet pt = IntervalSet::singleton(r.n);
    const IntervalSet other = lower ? IntervalSet::at_least(r.n) : IntervalSet::at_most(r.n);
    r.matches_expected = r.neg == other && r.clash == pt && r.circ == ~pt && r.neg_neg == x && r.circ_neg == ~pt &&
                         r.neg_circ == pt;
  } else {
    r.matches_expected = r.neg == ~x && r.clash.is_empty() && r.circ.is_all() && r.neg_neg == x &&
                         r.circ_neg.is_all() && r.neg_circ.is_empty();
  }
  return r;
}

// Rows for (-inf,n] and [n,inf) over the range, then the consistent samples.
inline std::vector<IntervalRow> interval_table_report(std::int64_t n_min, std::int64_t n_max,
                                                      const std::vector<IntervalSet>& consistent_samples) {
  std::vector<IntervalRow> rows;
  for (std::int64_t n = n_min; n <= n_max; ++n) rows.push_back(interval_row(IntervalSet::at_most(n)));
  for (std::int64_t n = n_min; n <= n_max; ++n) rows.push_back(interval_row(IntervalSet::at_least(n)));
  for (const IntervalSet& x : consistent_samples) rows.push_back(interval_row(x));
  return rows;
}

struct IntervalCertificate {
  std::vector<Formula> premises;
  Formula goal;
  ModelVerdict<IntervalSet> verdict;
};

// {p,¬p} ⊭ q, {p,∘p} ⊭ q and {∘p,¬p} ⊭ q in the interval model.
inline std::vector<IntervalCertificate> interval_certificates() {
  const std::vector<IntervalSet> pool = {IntervalSet::empty(), IntervalSet::all(), IntervalSet::at_most(0),
                                         IntervalSet::at_least(0)};
  std::vector<IntervalCertificate> out;
  for (const auto& [a, b] : std::vector<std::pair<const char*, const char*>>{{"p", "!p"}, {"p", "@p"}, {"@p", "!p"}}) {
    std::vector<Formula> premises{parse(a), parse(b)};
    const Formula goal = parse("q");
    auto v = consequence_in(IntervalModel{}, premises, goal, pool);
    out.push_back({std::move(premises), goal, std::move(v)});
  }
  return out;
}

inline std::vector<IntervalSet> default_consistent_samples() {
  return {IntervalSet::empty(), IntervalSet::all(), IntervalSet::range(1, 2), IntervalSet::singleton(0),
          IntervalSet::at_most(-1) | IntervalSet::at_least(1), IntervalSet::range(-2, 0) | IntervalSet::at_least(4)};
}

}  // namespace lfi
