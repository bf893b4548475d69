#pragma once

#include <algorithm>
#include <climits>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <boost/functional/hash.hpp>

#include "lfi/formula.hpp"
#include "lfi/hilbert.hpp"
#include "lfi/nmatrix.hpp"

namespace lfi {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Some formula an operation needs (α∨β, α∧β, ∘α ...) has no equivalent in U.
class UniverseClosureError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

struct BeliefScenario {
  LogicId logic = LogicId::Cbr;
  std::vector<Formula> universe;
  std::vector<Formula> base;
  std::vector<Formula> query;
};

inline std::string oracle_note(LogicId l) {
  return "consequence decided by the " + to_string(l) +
         " Nmatrix; the entrenchment theorem is stated for RCbr, checked here relative to a finite universe";
}

// A scenario with its universe closed under subformulas, and every
// designation pattern of U (a "world") enumerated once. Extensions of U
// members, and of binary combinations of them, are world sets, so Cn within U
// is exact bitset work. Other formulas go to the Nmatrix directly.
class BeliefState {
 public:
  using Set = boost::dynamic_bitset<>;     // over universe indexes
  using Worlds = boost::dynamic_bitset<>;  // over world indexes

  explicit BeliefState(BeliefScenario s) : scenario_(std::move(s)) {
    if (scenario_.logic != LogicId::Cbr && scenario_.logic != LogicId::Cie)
      throw ScenarioError("belief oracle must be cbr or cie");
    matrix_ = scenario_.logic == LogicId::Cbr ? &Nmatrix::cbr() : &Nmatrix::cie();
    for (const Formula& f : scenario_.universe) universe_.add(f);
    for (const Formula& f : scenario_.base) base_.push_back(universe_.add(f));
    for (const Formula& f : scenario_.query) query_.push_back(universe_.add(f));

    const auto patterns = designation_patterns(*matrix_, universe_);
    const std::size_t n = universe_.size();
    ext_.assign(n, Worlds(patterns.size()));
    for (std::size_t w = 0; w < patterns.size(); ++w)
      for (std::size_t i = 0; i < n; ++i)
        if (patterns[w][i]) ext_[i].set(w);

    k_worlds_ = Worlds(patterns.size());
    k_worlds_.set();
    for (std::size_t b : base_) k_worlds_ &= ext_[b];

    k_ = Set(n);
    for (std::size_t i = 0; i < n; ++i) {
      k_[i] = k_worlds_.is_subset_of(ext_[i]);
      rep_.emplace(ext_[i], i);  // keeps the first index
    }
  }

  const BeliefScenario& scenario() const { return scenario_; }
  LogicId logic() const { return scenario_.logic; }
  const Nmatrix& matrix() const { return *matrix_; }
  const SubformulaIndex& universe() const { return universe_; }
  std::size_t size() const { return universe_.size(); }
  const Formula& operator[](std::size_t i) const { return universe_[i]; }
  const std::vector<std::size_t>& base() const { return base_; }
  const std::vector<std::size_t>& query() const { return query_; }
  std::size_t world_count() const { return k_worlds_.size(); }
  std::optional<std::size_t> index_of(const Formula& f) const { return universe_.find(f); }

  const Worlds& extension(std::size_t i) const { return ext_[i]; }
  std::optional<Worlds> extension(const Formula& f) const {
    if (auto i = universe_.find(f)) return ext_[*i];
    if (!is_binary(f.kind())) return std::nullopt;
    auto l = extension(f.lhs());
    if (!l) return std::nullopt;
    auto r = extension(f.rhs());
    if (!r) return std::nullopt;
    switch (f.kind()) {
      case Connective::And: return *l & *r;
      case Connective::Or: return *l | *r;
      default: return ~*l | *r;
    }
  }

  Worlds all_worlds() const {
    Worlds w(world_count());
    w.set();
    return w;
  }
  Worlds models(const Set& s) const {
    Worlds w = all_worlds();
    for (auto i = s.find_first(); i != Set::npos; i = s.find_next(i)) w &= ext_[i];
    return w;
  }
  // {φ ∈ U : every world in w designates φ}
  Set closure_of(const Worlds& w) const {
    Set out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = w.is_subset_of(ext_[i]);
    return out;
  }
  Set closure(const Set& s) const { return closure_of(models(s)); }

  bool entails(const Set& premises, const Formula& goal) const {
    if (auto e = extension(goal)) return models(premises).is_subset_of(*e);
    std::vector<Formula> ps;
    for (auto i = premises.find_first(); i != Set::npos; i = premises.find_next(i)) ps.push_back(universe_[i]);
    return oracle(ps, goal);
  }

  const Set& belief_set() const { return k_; }
  bool in_K(std::size_t i) const { return k_[i]; }
  bool in_K(const Formula& f) const {
    if (auto e = extension(f)) return k_worlds_.is_subset_of(*e);
    return oracle(scenario_.base, f);
  }
  // K = K_⊥: no world designates B, so B entails a fresh atom.
  bool is_bottom() const { return k_worlds_.none(); }

  bool theorem(const Formula& f) const {
    if (auto e = extension(f)) return e->all();
    return oracle({}, f);
  }
  bool equivalent(const Formula& a, const Formula& b) const {
    auto ea = extension(a), eb = extension(b);
    if (ea && eb) return *ea == *eb;
    return oracle({}, Formula::iff(a, b));
  }
  // U_K(α): ⊢ α or ∘α ∈ K. Exact even when ∘α is outside U.
  bool unrevocable(const Formula& f) const { return theorem(f) || in_K(Formula::circ(f)); }
  bool unrevocable(std::size_t i) const { return unrevocable(universe_[i]); }

  // First member of U equivalent to f.
  std::optional<std::size_t> representative(const Formula& f) const {
    auto e = extension(f);
    if (!e) return std::nullopt;
    return representative(*e);
  }
  std::optional<std::size_t> representative(const Worlds& e) const {
    auto it = rep_.find(e);
    if (it == rep_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t require_representative(const Formula& f) const {
    if (auto r = representative(f)) return *r;
    throw UniverseClosureError("no member of the universe is equivalent to " + render(f));
  }

  std::vector<Formula> formulas(const Set& s) const {
    std::vector<Formula> out;
    for (auto i = s.find_first(); i != Set::npos; i = s.find_next(i)) out.push_back(universe_[i]);
    return out;
  }

 private:
  bool oracle(const std::vector<Formula>& premises, const Formula& goal) const {
    std::vector<std::string> key;
    for (const Formula& p : premises) key.push_back(render(p));
    std::sort(key.begin(), key.end());
    key.push_back(render(goal));
    {
      std::lock_guard lock(memo_mu_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    const bool v = holds(*matrix_, premises, goal, Limits{64}).valid;
    std::lock_guard lock(memo_mu_);
    memo_.emplace(std::move(key), v);
    return v;
  }

  struct WorldsHash {
    std::size_t operator()(const Worlds& w) const { return boost::hash_value(w); }
  };

  BeliefScenario scenario_;
  const Nmatrix* matrix_ = nullptr;
  SubformulaIndex universe_;
  std::vector<std::size_t> base_, query_;
  std::vector<Worlds> ext_;
  Worlds k_worlds_;
  Set k_;
  std::unordered_map<Worlds, std::size_t, WorldsHash> rep_;
  mutable std::mutex memo_mu_;
  mutable std::map<std::vector<std::string>, bool> memo_;
};

// α∧β, with α∧α taken as α itself. Cbr has no replacement rule, so ∘α does
// not give ∘(α∧α) there; RCbr identifies the two.
inline Formula query_conj(const Formula& a, const Formula& b) { return a == b ? a : Formula::conj(a, b); }
inline Formula query_disj(const Formula& a, const Formula& b) { return a == b ? a : Formula::disj(a, b); }

// Q ∪ {α∧β : α, β ∈ Q}, as formulas, without repeats.
inline std::vector<Formula> query_closure(const BeliefScenario& s) {
  std::vector<Formula> out;
  auto push = [&](const Formula& f) {
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  };
  for (const Formula& a : s.query) push(a);
  for (const Formula& a : s.query)
    for (const Formula& b : s.query) push(query_conj(a, b));
  return out;
}

// Adds α∧β and α∨β for α, β ∈ Q, then α∨β and α→β for α ∈ Q ∪ {α∧β} and
// β ∈ K∩U until each has an equivalent in U. Stops early once U
// exceeds max_size; the caller sees the size.
inline BeliefScenario complete_universe(BeliefScenario s, std::size_t max_size = 40) {
  SubformulaIndex u;
  for (const Formula& f : s.universe) u.add(f);
  for (const Formula& f : s.base) u.add(f);
  for (const Formula& f : s.query) u.add(f);
  for (const Formula& a : s.query)
    for (const Formula& b : s.query) {
      u.add(query_conj(a, b));
      u.add(query_disj(a, b));
    }
  s.universe = u.entries();
  const auto targets = query_closure(s);
  while (s.universe.size() <= max_size) {
    BeliefState state(s);
    SubformulaIndex grown = state.universe();
    std::vector<BeliefState::Worlds> added;
    for (const Formula& a : targets) {
      const auto ea = *state.extension(a);
      for (auto b = state.belief_set().find_first(); b != BeliefState::Set::npos;
           b = state.belief_set().find_next(b)) {
        const auto& eb = state.extension(b);
        const std::pair<Formula, BeliefState::Worlds> wanted[] = {{query_disj(a, state[b]), ea | eb},
                                                                 {Formula::imp(a, state[b]), ~ea | eb}};
        for (const auto& [f, e] : wanted) {
          if (state.representative(e) || std::find(added.begin(), added.end(), e) != added.end()) continue;
          added.push_back(e);
          grown.add(f);
        }
      }
    }
    s.universe = grown.entries();
    if (added.empty()) break;
  }
  return s;
}

// ---------------------------------------------------------------- attitudes

struct Attitudes {
  bool accepted = false;
  bool rejected = false;
  bool indeterminate = false;
  bool overdetermined = false;
  bool consistent = false;
  bool strongly_accepted = false;
  bool strongly_rejected = false;
  bool bottom = false;  // K = K_⊥
};

inline Attitudes attitudes(const BeliefState& s, const Formula& a) {
  for (const Formula& f : {a, Formula::neg(a), Formula::circ(a)})
    if (!s.index_of(f)) throw UniverseClosureError(render(f) + " is not in the universe");
  Attitudes out;
  out.accepted = s.in_K(a);
  out.rejected = s.in_K(Formula::neg(a));
  out.consistent = s.in_K(Formula::circ(a));
  out.indeterminate = !out.accepted && !out.rejected;
  out.overdetermined = out.accepted && out.rejected;
  out.strongly_accepted = out.accepted && out.consistent;
  out.strongly_rejected = out.rejected && out.consistent;
  out.bottom = s.is_bottom();
  return out;
}

inline bool is_unrevocable(const BeliefState& s, const Formula& a) {
  if (!s.index_of(Formula::circ(a))) throw UniverseClosureError(render(Formula::circ(a)) + " is not in the universe");
  return s.unrevocable(a);
}

// ------------------------------------------------------------- entrenchment

// A relation ≤ over the universe indexes of one BeliefState.
class Entrenchment {
 public:
  Entrenchment() = default;
  explicit Entrenchment(std::size_t n) : rows_(n, boost::dynamic_bitset<>(n)) {}

  // i ≤ j iff rank(i) ≤ rank(j).
  static Entrenchment from_ranks(const std::vector<long long>& ranks) {
    Entrenchment e(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i)
      for (std::size_t j = 0; j < ranks.size(); ++j) e.rows_[i][j] = ranks[i] <= ranks[j];
    return e;
  }
  static Entrenchment from_pairs(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    Entrenchment e(n);
    for (auto [i, j] : pairs) e.set(i, j);
    return e;
  }

  std::size_t size() const { return rows_.size(); }
  void set(std::size_t i, std::size_t j, bool v = true) { rows_.at(i).set(j, v); }
  bool leq(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  bool less(std::size_t i, std::size_t j) const { return rows_[i][j] && !rows_[j][i]; }
  const boost::dynamic_bitset<>& row(std::size_t i) const { return rows_[i]; }

  friend bool operator==(const Entrenchment&, const Entrenchment&) = default;

 private:
  std::vector<boost::dynamic_bitset<>> rows_;
};

struct EntrenchmentViolation {
  std::string rule;
  std::vector<Formula> tuple;
  std::string detail;
};

struct EntrenchmentReport {
  static constexpr std::size_t kMaxWitnesses = 20;

  std::vector<EntrenchmentViolation> violations;   // EE1-EE5
  std::vector<EntrenchmentViolation> diagnostics;  // derived properties that failed
  std::map<std::string, std::size_t> violation_counts;
  std::map<std::string, std::size_t> diagnostic_counts;

  bool ok() const { return violation_counts.empty(); }

  void violation(EntrenchmentViolation v) { add(violations, violation_counts, std::move(v)); }
  void diagnostic(EntrenchmentViolation v) { add(diagnostics, diagnostic_counts, std::move(v)); }

 private:
  static void add(std::vector<EntrenchmentViolation>& list, std::map<std::string, std::size_t>& counts,
                  EntrenchmentViolation v) {
    if (counts[v.rule]++ < kMaxWitnesses) list.push_back(std::move(v));
  }
};

inline EntrenchmentReport check_entrenchment(const BeliefState& s, const Entrenchment& e) {
  EntrenchmentReport r;
  const std::size_t n = s.size();
  if (e.size() != n) {
    r.violation({"shape", {}, "relation has " + std::to_string(e.size()) + " rows, universe has " + std::to_string(n)});
    return r;
  }
  auto f = [&](std::size_t i) { return s[i]; };

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!e.leq(a, b)) continue;
      for (std::size_t c = 0; c < n; ++c)
        if (e.leq(b, c) && !e.leq(a, c)) r.violation({"EE1", {f(a), f(b), f(c)}, "a <= b and b <= c but not a <= c"});
    }

  std::vector<char> protected_by_circ(n);
  for (std::size_t b = 0; b < n; ++b) protected_by_circ[b] = s.in_K(Formula::circ(s[b]));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const bool entails = s.extension(a).is_subset_of(s.extension(b));
      if ((entails || protected_by_circ[b]) && !e.leq(a, b))
        r.violation({"EE2", {f(a), f(b)}, entails ? "a entails b but not a <= b" : "circ b in K but not a <= b"});
    }

  for (std::size_t a : s.query())
    for (std::size_t b : s.query()) {
      const Formula ab = query_conj(s[a], s[b]);
      const auto c = s.representative(ab);
      if (!c) {
        r.violation({"EE3", {s[a], s[b]}, "no universe member equivalent to " + render(ab)});
        continue;
      }
      if (!e.leq(a, *c) && !e.leq(b, *c)) r.violation({"EE3", {s[a], s[b]}, "neither a <= a&b nor b <= a&b"});
    }

  auto below_all = [&](std::size_t a) { return e.row(a).all(); };
  auto above_all = [&](std::size_t a) {
    for (std::size_t b = 0; b < n; ++b)
      if (!e.leq(b, a)) return false;
    return true;
  };

  // A fresh atom sits strictly below K when K ≠ K_⊥, so with U ⊆ K no K member is below everything.
  const bool outside = !s.belief_set().all();
  if (!s.is_bottom())
    for (std::size_t a = 0; a < n; ++a) {
      if (!s.in_K(a) && !below_all(a)) r.violation({"EE4", {f(a)}, "a is not in K but not below everything"});
      if (s.in_K(a) && outside && below_all(a)) r.violation({"EE4", {f(a)}, "a is in K but below everything"});
    }

  std::vector<char> unrev(n);
  for (std::size_t a = 0; a < n; ++a) unrev[a] = s.unrevocable(a);
  for (std::size_t a = 0; a < n; ++a)
    if (above_all(a) && !unrev[a]) r.violation({"EE5", {f(a)}, "a is above everything but revocable"});

  // Derived properties; on a valid order none of these fire.
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!e.leq(a, b) && !e.leq(b, a)) r.diagnostic({"connectivity", {f(a), f(b)}, "incomparable"});
      if (a < b && s.extension(a) == s.extension(b)) {
        bool same = e.row(a) == e.row(b);
        for (std::size_t c = 0; same && c < n; ++c) same = e.leq(c, a) == e.leq(c, b);
        if (!same) r.diagnostic({"intersubstitutivity", {f(a), f(b)}, "equivalent formulas ranked differently"});
      }
      if (!e.less(a, b)) continue;
      for (std::size_t c = 0; c < n; ++c)
        if (e.less(b, c) && !e.less(a, c)) r.diagnostic({"quasi-transitivity", {f(a), f(b), f(c)}, "a < b < c but not a < c"});
    }
  for (std::size_t a : s.query())
    for (std::size_t b : s.query()) {
      const auto c = s.representative(query_conj(s[a], s[b]));
      if (!c) continue;
      for (std::size_t d = 0; d < n; ++d)
        if (e.less(d, a) && e.less(d, b) && !e.less(d, *c))
          r.diagnostic({"conjunction-up", {f(d), s[a], s[b]}, "d < a and d < b but not d < a&b"});
    }
  for (std::size_t a = 0; a < n; ++a)
    if (above_all(a) != static_cast<bool>(unrev[a]))
      r.diagnostic({"top-is-unrevocable", {f(a)}, unrev[a] ? "unrevocable but not on top" : "on top but revocable"});
  return r;
}

class InvalidEntrenchment : public std::runtime_error {
 public:
  InvalidEntrenchment(std::string what, EntrenchmentReport report)
      : std::runtime_error(std::move(what)), report_(std::move(report)) {}
  const EntrenchmentReport& report() const { return report_; }

 private:
  EntrenchmentReport report_;
};

// An entrenchment that passed check_entrenchment against one particular state.
class ValidEntrenchment {
 public:
  static ValidEntrenchment validate(const BeliefState& s, Entrenchment e) {
    EntrenchmentReport report = check_entrenchment(s, e);
    if (!report.ok()) {
      const auto& v = report.violations.front();
      throw InvalidEntrenchment("entrenchment violates " + v.rule + ": " + v.detail, std::move(report));
    }
    return ValidEntrenchment(&s, std::move(e));
  }

  const Entrenchment& relation() const { return e_; }
  const BeliefState* state() const { return state_; }

 private:
  ValidEntrenchment(const BeliefState* s, Entrenchment e) : state_(s), e_(std::move(e)) {}
  const BeliefState* state_;
  Entrenchment e_;
};

// K ÷ α within U: β ∈ K∩U survives iff α < α∨β, or everything survives when U_K(α).
inline BeliefState::Set contract(const BeliefState& s, const ValidEntrenchment& ve, const Formula& a) {
  if (ve.state() != &s) throw InvalidEntrenchment("entrenchment was validated against a different state", {});
  if (s.unrevocable(a)) return s.belief_set();
  const std::size_t ra = s.require_representative(a);
  const auto ea = s.extension(ra);
  BeliefState::Set out(s.size());
  const auto& k = s.belief_set();
  for (auto b = k.find_first(); b != BeliefState::Set::npos; b = k.find_next(b)) {
    const auto rab = s.representative(ea | s.extension(b));
    if (!rab) throw UniverseClosureError("no member of the universe is equivalent to " + render(Formula::disj(a, s[b])));
    out[b] = ve.relation().less(ra, *rab);
  }
  return out;
}

// (C≤) on Q × Q: a ≤ b iff a ∉ K÷(a∧b) or U_K(a∧b). Pairs outside Q are left unset.
template <class Contraction>
Entrenchment entrenchment_from_contraction(const BeliefState& s, Contraction&& contraction) {
  Entrenchment e(s.size());
  for (std::size_t a : s.query())
    for (std::size_t b : s.query()) {
      const Formula ab = query_conj(s[a], s[b]);
      const BeliefState::Set out = contraction(ab);
      e.set(a, b, !out.test(a) || s.unrevocable(ab));
    }
  return e;
}

// ---------------------------------------------------------------- postulates

struct PostulateResult {
  std::string name;
  bool pass = true;
  std::size_t checked = 0;
  std::vector<std::string> witnesses;

  void fail(std::string w) {
    pass = false;
    if (witnesses.size() < 10) witnesses.push_back(std::move(w));
  }
};

struct PostulateReport {
  std::string oracle;
  std::vector<PostulateResult> results;

  bool all_pass() const {
    return std::all_of(results.begin(), results.end(), [](const PostulateResult& r) { return r.pass; });
  }
  const PostulateResult& operator[](const std::string& name) const {
    for (const auto& r : results)
      if (r.name == name) return r;
    throw std::out_of_range("no postulate named " + name);
  }
};

inline constexpr const char* kPostulateNames[] = {
    "closure",     "success",  "inclusion", "failure", "relevance", "extensionality", "vacuity", "recovery",
    "weak_conjunctive_overlap", "conjunctive_inclusion", "entrenchment_round_trip"};

inline std::string render_set(const BeliefState& s, const BeliefState::Set& set) {
  std::string out = "{";
  for (const Formula& f : s.formulas(set)) out += (out.size() > 1 ? ", " : "") + render(f);
  return out + "}";
}

// Every postulate for α ranging over Q and the conjunctions of Q, pairs over Q.
inline PostulateReport check_postulates(const BeliefState& s, const ValidEntrenchment& ve) {
  using Set = BeliefState::Set;
  using Worlds = BeliefState::Worlds;
  std::map<std::string, PostulateResult> r;
  for (const char* name : kPostulateNames) r[name].name = name;

  const auto targets = query_closure(s.scenario());
  std::map<Formula, Set> out;
  for (const Formula& a : targets) out.emplace(a, contract(s, ve, a));
  const Set& k = s.belief_set();

  for (const Formula& a : targets) {
    const Set& o = out.at(a);
    const Worlds mo = s.models(o);
    const Worlds ea = *s.extension(a);
    const bool unrev = s.unrevocable(a);
    const std::string tag = "alpha=" + render(a);

    ++r["closure"].checked;
    if (s.closure(o) != o) r["closure"].fail(tag + ": result " + render_set(s, o) + " is not closed in U");

    ++r["success"].checked;
    if (!unrev && mo.is_subset_of(ea)) r["success"].fail(tag + ": revocable but still entailed");

    ++r["inclusion"].checked;
    if (!o.is_subset_of(k)) r["inclusion"].fail(tag + ": result adds " + render_set(s, o - k));

    ++r["failure"].checked;
    if (s.in_K(Formula::circ(a)) && o != k) r["failure"].fail(tag + ": circ alpha in K but K changed");

    ++r["vacuity"].checked;
    if (!s.in_K(a) && o != k) r["vacuity"].fail(tag + ": alpha not in K but K changed");

    ++r["recovery"].checked;
    const Worlds plus = mo & ea;
    for (auto g = k.find_first(); g != Set::npos; g = k.find_next(g))
      if (!plus.is_subset_of(s.extension(g))) r["recovery"].fail(tag + ": lost " + render(s[g]));

    // X from out alone, out plus one K member, or out plus β→α.
    const Set lost = k - o;
    for (auto b = lost.find_first(); b != Set::npos; b = lost.find_next(b)) {
      ++r["relevance"].checked;
      const Worlds eb = s.extension(b);
      auto works = [&](const Worlds& x) {
        if (x.is_subset_of(ea)) return false;
        if (!(x & eb).is_subset_of(ea)) return false;
        return s.closure_of(x).is_subset_of(k);
      };
      bool found = works(mo) || works(mo & (~eb | ea));
      for (auto g = k.find_first(); !found && g != Set::npos; g = k.find_next(g)) found = works(mo & s.extension(g));
      if (!found) r["relevance"].fail(tag + ", beta=" + render(s[b]) + ": no witness X");
    }
  }

  for (const Formula& a : targets)
    for (const Formula& b : targets) {
      if (!(a < b) || !s.equivalent(a, b)) continue;
      ++r["extensionality"].checked;
      if (out.at(a) != out.at(b)) r["extensionality"].fail(render(a) + " and " + render(b) + " contract differently");
    }

  for (std::size_t ia : s.query())
    for (std::size_t ib : s.query()) {
      const Formula& a = s[ia];
      const Formula& b = s[ib];
      const Formula ab = query_conj(a, b);
      const std::string tag = "alpha=" + render(a) + ", beta=" + render(b);
      if (s.theorem(a) || s.theorem(b) || (!s.unrevocable(a) && !s.unrevocable(b))) {
        ++r["weak_conjunctive_overlap"].checked;
        const Set meet = out.at(a) & out.at(b);
        if (!meet.is_subset_of(out.at(ab)))
          r["weak_conjunctive_overlap"].fail(tag + ": " + render_set(s, meet - out.at(ab)) + " missing");
      }
      if (!out.at(ab).test(ia)) {
        ++r["conjunctive_inclusion"].checked;
        if (!out.at(ab).is_subset_of(out.at(a)))
          r["conjunctive_inclusion"].fail(tag + ": " + render_set(s, out.at(ab) - out.at(a)) + " not in K/alpha");
      }
    }

  const Entrenchment derived = entrenchment_from_contraction(s, [&](const Formula& f) { return out.at(f); });
  for (std::size_t a : s.query())
    for (std::size_t b : s.query()) {
      ++r["entrenchment_round_trip"].checked;
      if (derived.leq(a, b) != ve.relation().leq(a, b))
        r["entrenchment_round_trip"].fail(render(s[a]) + " <= " + render(s[b]) + ": derived " +
                                          (derived.leq(a, b) ? "true" : "false") + ", given " +
                                          (ve.relation().leq(a, b) ? "true" : "false"));
    }

  PostulateReport report;
  report.oracle = oracle_note(s.logic());
  for (const char* name : kPostulateNames) report.results.push_back(std::move(r[name]));
  return report;
}

// --------------------------------------------------------------- rank builder

struct RankBuild {
  std::optional<ValidEntrenchment> entrenchment;
  std::vector<long long> ranks;  // after forcing and dominance
  EntrenchmentReport report;
};

inline constexpr long long kBottomRank = LLONG_MIN;
inline constexpr long long kTopRank = LLONG_MAX;

// Non-K to the bottom, unrevocable to the top, rank(β) raised to the highest
// rank of any α ∈ K∩U entailing it; then validated as a total preorder.
inline RankBuild build_rank_entrenchment(const BeliefState& s, std::vector<long long> ranks) {
  if (ranks.size() != s.size()) throw ScenarioError("ranks must cover the universe");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s.in_K(i)) ranks[i] = kBottomRank;
    else if (s.unrevocable(i)) ranks[i] = kTopRank;
  }
  std::vector<long long> closed = ranks;
  for (std::size_t b = 0; b < s.size(); ++b)
    for (std::size_t a = 0; a < s.size(); ++a)
      if (s.in_K(a) && s.extension(a).is_subset_of(s.extension(b))) closed[b] = std::max(closed[b], ranks[a]);

  RankBuild out;
  out.ranks = closed;
  Entrenchment e = Entrenchment::from_ranks(closed);
  out.report = check_entrenchment(s, e);
  if (out.report.ok()) out.entrenchment = ValidEntrenchment::validate(s, std::move(e));
  return out;
}

}  // namespace lfi
