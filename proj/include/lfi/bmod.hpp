#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lfi/balfi.hpp"
#include "lfi/periodic_set.hpp"

namespace lfi {

// ------------------------------------------------------------------- CRT

struct Congruence {
  std::int64_t residue;
  std::uint64_t modulus;
};

// The solution class of x ≡ a_i (mod n_i) for pairwise coprime n_i.
inline Congruence crt_solve(const std::vector<Congruence>& system) {
  if (system.empty()) throw std::invalid_argument("empty congruence system");
  __int128 a = 0, m = 1;
  for (const auto& [r, n] : system) {
    if (n < 1) throw std::invalid_argument("modulus must be positive");
    if (r < 0 || static_cast<std::uint64_t>(r) >= n) throw std::invalid_argument("residue out of range");
    if (std::gcd(static_cast<std::uint64_t>(m), n) != 1)
      throw std::invalid_argument("moduli are not pairwise coprime (repeated modulus " + std::to_string(n) + ")");
    // m·t ≡ r − a (mod n): t = (r − a)·m⁻¹ mod n.
    __int128 old_r = static_cast<__int128>(m % n), cur_r = n, old_s = 1, cur_s = 0;
    while (cur_r != 0) {
      const __int128 q = old_r / cur_r;
      std::tie(old_r, cur_r) = std::make_tuple(cur_r, old_r - q * cur_r);
      std::tie(old_s, cur_s) = std::make_tuple(cur_s, old_s - q * cur_s);
    }
    const __int128 nn = n;
    const __int128 inv = ((old_s % nn) + nn) % nn;
    const __int128 t = ((((r - a) % nn) + nn) % nn) * inv % nn;
    a += m * t;
    m *= nn;
    a %= m;
  }
  return {static_cast<std::int64_t>(a), static_cast<std::uint64_t>(m)};
}

inline std::string to_string(const Congruence& c) {
  return std::to_string(c.residue) + " mod " + std::to_string(c.modulus);
}

// ----------------------------------------------------------- family tags

struct FamilyTag {
  enum class Family { Consistent, I1, I2 };
  enum class Branch { Chain, ChainZero };  // A, or A ∪ [0]_{p_{k+1}}
  enum class Base { I, Ic };

  Family family = Family::Consistent;
  int x = 0;              // I1: [x]_2
  Base base = Base::I;    // I2
  Branch branch = Branch::Chain;
  int k = 0;
  bool complemented = false;

  static FamilyTag consistent() { return {}; }
  static FamilyTag i1(int x, Branch b, int k, bool comp = false) {
    return {Family::I1, x, Base::I, b, k, comp};
  }
  static FamilyTag i2(Base base, Branch b, int k, bool comp = false) {
    return {Family::I2, 0, base, b, k, comp};
  }

  // Report order: family, x/base, k, branch, complemented.
  auto key() const {
    return std::make_tuple(family, family == Family::I2 ? static_cast<int>(base) : x, k, branch, complemented);
  }
  friend bool operator==(const FamilyTag& a, const FamilyTag& b) { return a.key() == b.key(); }
  friend bool operator<(const FamilyTag& a, const FamilyTag& b) { return a.key() < b.key(); }

  std::string to_string() const {
    if (family == Family::Consistent) return "Consistent";
    std::string s = family == Family::I1 ? "I1(x=" + std::to_string(x) : std::string("I2(base=") + (base == Base::I ? "I" : "I^c");
    s += branch == Branch::Chain ? ", chain" : ", chain+zero";
    s += ", k=" + std::to_string(k);
    if (complemented) s += ", complemented";
    return s + ")";
  }
};

namespace detail {

inline int min_k(FamilyTag::Family f) { return f == FamilyTag::Family::I1 ? 1 : 2; }

inline void check_tag(const FamilyTag& t) {
  if (t.family == FamilyTag::Family::Consistent) throw std::invalid_argument("consistent tag has no template");
  if (t.k < min_k(t.family)) throw std::invalid_argument("template index k too small: " + t.to_string());
  if (t.k + 1 > static_cast<int>(kPrimes.size())) throw std::invalid_argument("template index k too large");
  if (t.family == FamilyTag::Family::I1 && t.x != 0 && t.x != 1) throw std::invalid_argument("x must be 0 or 1");
}

// The single-set overlaps: ([x]_2)^c = [1-x]_2 and (I^c)^c = I.
inline FamilyTag normalize(FamilyTag t) {
  if (t.complemented && t.branch == FamilyTag::Branch::Chain && t.k == min_k(t.family)) {
    t.complemented = false;
    if (t.family == FamilyTag::Family::I1) t.x = 1 - t.x;
    else t.base = t.base == FamilyTag::Base::I ? FamilyTag::Base::Ic : FamilyTag::Base::I;
  }
  return t;
}

// ∪_{i=from..k} [1]^c_{p_i}
inline PeriodicSet ones_complement_chain(int from, int k) {
  PeriodicSet s;
  for (int i = from; i <= k; ++i) s = s | ~PeriodicSet::residue(1, nth_prime(i));
  return s;
}

inline PeriodicSet build_template(const FamilyTag& t) {
  PeriodicSet s;
  if (t.family == FamilyTag::Family::I1) {
    s = PeriodicSet::residue(t.x, 2) | ones_complement_chain(2, t.k);
  } else {
    const PeriodicSet i = PeriodicSet::residue(1, 2) & PeriodicSet::residue(0, 3);
    s = (t.base == FamilyTag::Base::I ? i : ~i) | ones_complement_chain(3, t.k);
  }
  if (t.branch == FamilyTag::Branch::ChainZero) s = s | PeriodicSet::residue(0, nth_prime(t.k + 1));
  return t.complemented ? ~s : s;
}

}  // namespace detail

// p_1 ⋯ p_k for a chain, p_1 ⋯ p_{k+1} for a chain+zero template.
inline std::uint64_t tag_modulus(const FamilyTag& t) {
  return primorial(t.branch == FamilyTag::Branch::Chain ? t.k : t.k + 1);
}

inline PeriodicSet template_set(const FamilyTag& tag) {
  detail::check_tag(tag);
  static std::mutex mu;
  static std::map<FamilyTag, PeriodicSet> cache;
  const FamilyTag t = detail::normalize(tag);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(t); it != cache.end()) return it->second;
  }
  PeriodicSet s = detail::build_template(t);
  std::lock_guard lock(mu);
  return cache.emplace(t, std::move(s)).first->second;
}

// Every template tag whose symbolic modulus is m, canonical tags only.
inline std::vector<FamilyTag> tags_with_modulus(std::uint64_t m) {
  std::vector<FamilyTag> out;
  int r = 0;
  while (r < static_cast<int>(kPrimes.size()) && primorial(r) < m) ++r;
  if (r == 0 || primorial(r) != m) return out;
  using F = FamilyTag;
  auto push = [&](F t) {
    if (t.k < detail::min_k(t.family) || t.k + 1 > static_cast<int>(kPrimes.size())) return;
    for (bool comp : {false, true}) {
      t.complemented = comp;
      if (detail::normalize(t) == t) out.push_back(t);
    }
  };
  for (int x : {0, 1}) {
    push(F::i1(x, F::Branch::Chain, r));
    push(F::i1(x, F::Branch::ChainZero, r - 1));
  }
  for (auto b : {F::Base::I, F::Base::Ic}) {
    push(F::i2(b, F::Branch::Chain, r));
    push(F::i2(b, F::Branch::ChainZero, r - 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Templates canonicalize to their symbolic (primorial) modulus, so only
// those with X's modulus can match.
inline FamilyTag classify(const PeriodicSet& x) {
  for (const FamilyTag& t : tags_with_modulus(x.modulus()))
    if (template_set(t) == x) return t;
  return FamilyTag::consistent();
}

// ¬̃ at the tag level: the case tables and their inverses.
inline FamilyTag tilde_neg_tag(const FamilyTag& tag) {
  detail::check_tag(tag);
  using F = FamilyTag;
  const F t = detail::normalize(tag);
  const int lo = detail::min_k(t.family);
  F out = t;
  if (!t.complemented && t.branch == F::Branch::Chain && t.k == lo) {
    out.branch = F::Branch::ChainZero;  // base case
    if (t.family == F::Family::I1) out.x = 1 - t.x;
    else out.base = t.base == F::Base::I ? F::Base::Ic : F::Base::I;
  } else if (!t.complemented && t.branch == F::Branch::Chain) {
    out.branch = F::Branch::ChainZero;  // chain, one step down
    out.k = t.k - 1;
    out.complemented = true;
  } else if (!t.complemented) {
    out.branch = F::Branch::Chain;  // chain plus zero class
    out.complemented = true;
  } else if (t.branch == F::Branch::Chain) {
    out.branch = F::Branch::ChainZero;  // inverse of the chain-plus-zero case
    out.complemented = false;
  } else {
    out.branch = F::Branch::Chain;  // inverse of the chain case
    out.k = t.k + 1;
    out.complemented = false;
  }
  return detail::normalize(out);
}

class InconsistentOnly : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline PeriodicSet tilde_neg(const PeriodicSet& x) {
  const FamilyTag t = classify(x);
  if (t.family == FamilyTag::Family::Consistent)
    throw InconsistentOnly("tilde_neg is defined on the inconsistent families only");
  return template_set(tilde_neg_tag(t));
}

inline PeriodicSet hat_neg(const PeriodicSet& x) {
  const FamilyTag t = classify(x);
  if (t.family == FamilyTag::Family::Consistent) return ~x;
  return template_set(tilde_neg_tag(t));
}

inline PeriodicSet hat_circ(const PeriodicSet& x) { return ~(x & hat_neg(x)); }

// The countermodel as an LFI algebra over periodic sets.
struct BmodAlgebra {
  using element_type = PeriodicSet;
  PeriodicSet top() const { return PeriodicSet::all(); }
  PeriodicSet bottom() const { return PeriodicSet::empty(); }
  PeriodicSet meet(const PeriodicSet& a, const PeriodicSet& b) const { return a & b; }
  PeriodicSet join(const PeriodicSet& a, const PeriodicSet& b) const { return a | b; }
  PeriodicSet complement(const PeriodicSet& a) const { return ~a; }
  PeriodicSet neg(const PeriodicSet& a) const { return hat_neg(a); }
  PeriodicSet circ(const PeriodicSet& a) const { return hat_circ(a); }
};

// ---------------------------------------------------------- verification

struct CheckResult {
  CheckResult(std::string i, std::string d) : name(std::move(i)), description(std::move(d)) {}
  std::string name;
  std::string description;
  bool pass = true;
  std::vector<std::string> violations;

  void fail(std::string what) {
    pass = false;
    if (violations.size() < 20) violations.push_back(std::move(what));
  }
};

struct WellDefReport {
  int k_max = 0;
  std::vector<std::pair<FamilyTag, PeriodicSet>> members;
  std::vector<CheckResult> checks;
  std::string overlap_witness;  // [1]_2 ∩ ¬̃[1]_2 via CRT
  std::string clash_witness;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Every canonical template whose primes are at most p_{k_max+1}, in report order.
inline std::vector<std::pair<FamilyTag, PeriodicSet>> family_members(int k_max) {
  using F = FamilyTag;
  std::vector<F> tags;
  for (int x : {0, 1})
    for (int k = 1; k <= k_max + 1; ++k)
      for (bool comp : {false, true}) {
        tags.push_back(F::i1(x, F::Branch::Chain, k, comp));
        if (k <= k_max) tags.push_back(F::i1(x, F::Branch::ChainZero, k, comp));
      }
  for (auto b : {F::Base::I, F::Base::Ic})
    for (int k = 2; k <= k_max + 1; ++k)
      for (bool comp : {false, true}) {
        tags.push_back(F::i2(b, F::Branch::Chain, k, comp));
        if (k <= k_max) tags.push_back(F::i2(b, F::Branch::ChainZero, k, comp));
      }
  std::erase_if(tags, [](const F& t) { return !(detail::normalize(t) == t); });
  std::sort(tags.begin(), tags.end());
  std::vector<std::pair<F, PeriodicSet>> out;
  for (const F& t : tags) out.emplace_back(t, template_set(t));
  return out;
}

namespace detail {

inline std::string witness_of(const PeriodicSet& s) {
  if (auto r = s.least_residue()) return std::to_string(*r) + " mod " + std::to_string(s.modulus());
  return "none";
}

// ¬̃ written out case by case from its defining equations, built from
// residue classes directly; the inverse rule adds every pair reversed.
inline std::vector<std::pair<PeriodicSet, PeriodicSet>> case_table(int k_max) {
  auto cls = [](int r, int k) { return PeriodicSet::residue(r, nth_prime(k)); };
  auto c3 = [&](int k) {
    PeriodicSet s;
    for (int i = 2; i <= k; ++i) s = s | ~cls(1, i);
    return s;
  };
  auto c5 = [&](int k) {
    PeriodicSet s;
    for (int i = 3; i <= k; ++i) s = s | ~cls(1, i);
    return s;
  };
  std::vector<std::pair<PeriodicSet, PeriodicSet>> pairs;
  for (int x : {0, 1}) {
    const PeriodicSet ex = PeriodicSet::residue(x, 2);
    pairs.emplace_back(ex, PeriodicSet::residue(1 - x, 2) | cls(0, 2));
    for (int k = 2; k <= k_max + 1; ++k) pairs.emplace_back(ex | c3(k), ~(ex | c3(k - 1) | cls(0, k)));
    for (int k = 1; k <= k_max + 1; ++k) pairs.emplace_back(ex | c3(k) | cls(0, k + 1), ~(ex | c3(k)));
  }
  const PeriodicSet i = PeriodicSet::residue(1, 2) & PeriodicSet::residue(0, 3);
  for (const PeriodicSet& b : {i, ~i}) {
    pairs.emplace_back(b, ~b | cls(0, 3));
    for (int k = 3; k <= k_max + 1; ++k) pairs.emplace_back(b | c5(k), ~(b | c5(k - 1) | cls(0, k)));
    for (int k = 2; k <= k_max + 1; ++k) pairs.emplace_back(b | c5(k) | cls(0, k + 1), ~(b | c5(k)));
  }
  const std::size_t n = pairs.size();
  for (std::size_t j = 0; j < n; ++j) pairs.emplace_back(pairs[j].second, pairs[j].first);
  return pairs;
}

}  // namespace detail

// Exhaustive check of the well-definedness items over the bounded families,
// plus the RCbr equations of the expanded algebra on the same sets and on
// the given consistent samples.
inline WellDefReport verify_welldef(int k_max, const std::vector<PeriodicSet>& consistent_samples = {}) {
  if (k_max < 3) throw std::invalid_argument("k_max must be at least 3");
  if (k_max + 2 > static_cast<int>(kPrimes.size())) throw std::invalid_argument("k_max too large");
  WellDefReport rep;
  rep.k_max = k_max;
  rep.members = family_members(k_max);
  const auto& members = rep.members;
  using F = FamilyTag;

  CheckResult shape{"templates", "each template canonicalizes to its primorial modulus and classifies to its own tag"};
  for (const auto& [t, s] : members) {
    if (s.modulus() != tag_modulus(t)) shape.fail(t.to_string() + ": modulus " + std::to_string(s.modulus()));
    if (!(classify(s) == t)) shape.fail(t.to_string() + ": classified as " + classify(s).to_string());
  }

  CheckResult disjoint{"disjoint", "I1 ∩ I2 = ∅ and distinct tags denote distinct sets"};
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b)
      if (members[a].second == members[b].second) {
        const bool cross = members[a].first.family != members[b].first.family;
        disjoint.fail((cross ? "shared by I1 and I2: " : "duplicate: ") + members[a].first.to_string() + " = " +
                      members[b].first.to_string());
      }

  CheckResult welldef{"single-valued", "¬̃ from the case equations and their inverses is single-valued, total, and matches the pairing"};
  std::map<PeriodicSet, PeriodicSet> table;
  for (const auto& [x, y] : detail::case_table(k_max)) {
    auto [it, fresh] = table.emplace(x, y);
    if (!fresh && !(it->second == y)) welldef.fail("two values for " + x.to_string());
  }
  for (const auto& [t, s] : members) {
    auto it = table.find(s);
    if (it == table.end()) {
      welldef.fail("no case defines ¬̃ on " + t.to_string());
    } else if (!(it->second == tilde_neg(s))) {
      welldef.fail("case table and pairing disagree on " + t.to_string());
    }
  }

  CheckResult cover{"cover", "X ∪ ¬̃X = ℤ"};
  CheckResult overlap{"overlap", "X ∩ ¬̃X ≠ ∅"};
  CheckResult closed{"closed", "X ∈ I iff ¬̃X ∈ I iff X^c ∈ I"};
  CheckResult involution{"involution", "¬̃¬̃X = X"};
  for (const auto& [t, s] : members) {
    const PeriodicSet n = tilde_neg(s);
    if (!(s | n).is_all()) cover.fail(t.to_string());
    if ((s & n).is_empty()) overlap.fail(t.to_string());
    if (classify(n).family == F::Family::Consistent) closed.fail("¬̃ leaves I at " + t.to_string());
    if (classify(~s).family == F::Family::Consistent) closed.fail("complement leaves I at " + t.to_string());
    if (!(tilde_neg(n) == s)) involution.fail(t.to_string());
  }
  for (const PeriodicSet& c : consistent_samples) {
    if (classify(c).family != F::Family::Consistent) continue;
    if (classify(~c).family != F::Family::Consistent) closed.fail("complement of consistent " + c.to_string());
  }
  const PeriodicSet x0 = PeriodicSet::residue(1, 2);
  const Congruence w = crt_solve({{1, 2}, {0, 3}});
  const PeriodicSet wclass = PeriodicSet::residue(w.residue, w.modulus);
  if (!wclass.is_subset_of(x0 & tilde_neg(x0))) overlap.fail("CRT witness for [1]_2 not in X ∩ ¬̃X");
  rep.overlap_witness = to_string(w);

  CheckResult clash{"clash-in-I", "some X ∈ I has X ∩ ¬̃X ∈ I"};
  const PeriodicSet meet = x0 & tilde_neg(x0);
  const F mt = classify(meet);
  if (mt.family == F::Family::Consistent) clash.fail("[1]_2 ∩ ¬̃[1]_2 is consistent");
  rep.clash_witness = "X = [1]_2, X ∩ ¬̃X = " + meet.to_string() + " : " + mt.to_string();

  CheckResult eqs{"RCbr", "x ∪ ¬x = ℤ, x ∩ ¬x ∩ ∘x = ∅, ∘x = (x ∩ ¬x)^c, ¬¬x = x"};
  std::vector<PeriodicSet> sample;
  for (const auto& m : members) sample.push_back(m.second);
  sample.insert(sample.end(), consistent_samples.begin(), consistent_samples.end());
  for (const auto& v : class_violations(BmodAlgebra{}, BalfiClass::RCbr, sample,
                                        [](const PeriodicSet& s) { return s.to_string(); }))
    eqs.fail(v.equation + " at " + v.witness);

  rep.checks = {shape, disjoint, welldef, cover, overlap, closed, involution, clash, eqs};
  return rep;
}

struct CountermodelReport {
  struct Equality {
    std::string name;
    PeriodicSet computed;
    PeriodicSet expected;
    bool holds() const { return computed == expected; }
  };
  struct Witness {
    std::string name;
    Congruence solution;
    bool in_source = false;     // class ⊆ (X ∩ ∘X) or (¬X ∩ ∘X)
    bool outside_target = false;  // class ∩ ∘∘X = ∅
    bool member_checked = false;  // the residue itself, by membership
  };
  struct SchemaValue {
    std::string name;
    Formula formula;
    PeriodicSet value;
    bool refuted() const { return !value.is_all(); }
  };
  std::vector<Equality> equalities;
  std::vector<Witness> witnesses;
  std::vector<SchemaValue> schemas;
  bool all_pass() const {
    for (const auto& e : equalities)
      if (!e.holds()) return false;
    for (const auto& w : witnesses)
      if (!w.in_source || !w.outside_target || !w.member_checked) return false;
    for (const auto& s : schemas)
      if (!s.refuted()) return false;
    return true;
  }
};

// X = [1]_2 against ∘∘p and its weakenings.
inline CountermodelReport countermodel_report() {
  const BmodAlgebra b;
  auto cls = [](int r, std::uint64_t m) { return PeriodicSet::residue(r, m); };
  const PeriodicSet x = cls(1, 2);
  const PeriodicSet i = cls(1, 2) & cls(0, 3);
  const PeriodicSet nx = b.neg(x);
  const PeriodicSet cx = b.circ(x);
  const PeriodicSet ccx = b.circ(cx);

  CountermodelReport rep;
  rep.equalities = {
      {"¬X = [0]_2 ∪ [0]_3", nx, cls(0, 2) | cls(0, 3)},
      {"X ∩ ¬X = I", x & nx, i},
      {"∘X = [0]_2 ∪ [0]_3^c", cx, cls(0, 2) | ~cls(0, 3)},
      {"¬∘X = I ∪ [0]_5", b.neg(cx), i | cls(0, 5)},
      {"∘∘X = I ∪ [0]_5^c", ccx, i | ~cls(0, 5)},
      {"X ∩ ∘X = [1]_2 ∩ [0]_3^c", x & cx, cls(1, 2) & ~cls(0, 3)},
      {"¬X ∩ ∘X = [0]_2", nx & cx, cls(0, 2)},
  };

  auto witness = [&](std::string name, const std::vector<Congruence>& system, const PeriodicSet& source) {
    CountermodelReport::Witness w{std::move(name), crt_solve(system)};
    const PeriodicSet c = cls(w.solution.residue, w.solution.modulus);
    w.in_source = c.is_subset_of(source);
    w.outside_target = (c & ccx).is_empty();
    w.member_checked = source.contains(w.solution.residue) && !ccx.contains(w.solution.residue);
    return w;
  };
  rep.witnesses.push_back(witness("x ∈ (X ∩ ∘X) \\ ∘∘X", {{1, 2}, {1, 3}, {0, 5}}, x & cx));
  rep.witnesses.push_back(witness("y ∈ (¬X ∩ ∘X) \\ ∘∘X", {{0, 2}, {0, 5}}, nx & cx));

  const std::map<std::string, PeriodicSet> h{{"p", x}};
  for (const auto& [name, text] : std::vector<std::pair<std::string, std::string>>{
           {"cp1", "@@p"}, {"cp2", "@p -> @@p"}, {"cp3", "p & @p -> @@p"}, {"cp4", "!p & @p -> @@p"}}) {
    const Formula f = parse(text);
    rep.schemas.push_back({name, f, evaluate(b, h, f)});
  }
  return rep;
}

}  // namespace lfi
