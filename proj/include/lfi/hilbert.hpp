#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lfi/formula.hpp"

namespace lfi {

enum class LogicId { Cbr, Cie, RCbr, RCie };

inline std::string to_string(LogicId l) {
  switch (l) {
    case LogicId::Cbr: return "Cbr";
    case LogicId::Cie: return "Cie";
    case LogicId::RCbr: return "RCbr";
    case LogicId::RCie: return "RCie";
  }
  return "?";
}

inline bool has_axiom(LogicId l, int k) {
  if (k < 1 || k > kAxiomCount) return false;
  const bool cbr_like = l == LogicId::Cbr || l == LogicId::RCbr;
  if (k == 12) return cbr_like;
  if (k == 15) return !cbr_like;
  return true;
}

inline bool has_global_rules(LogicId l) { return l == LogicId::RCbr || l == LogicId::RCie; }

struct Justification {
  enum class Kind { Axiom, MP, ENeg, ECirc, Premise };
  Kind kind = Kind::Axiom;
  int schema = 0;       // Axiom
  Binding binding;      // Axiom; empty means "find it by matching"
  std::size_t first = 0;   // 0-based: MP minor, ENeg/ECirc source, premise number
  std::size_t second = 0;  // 0-based: MP major

  static Justification axiom(int k, Binding b = {}) { return {Kind::Axiom, k, std::move(b), 0, 0}; }
  static Justification mp(std::size_t minor, std::size_t major) { return {Kind::MP, 0, {}, minor, major}; }
  static Justification eneg(std::size_t i) { return {Kind::ENeg, 0, {}, i, 0}; }
  static Justification ecirc(std::size_t i) { return {Kind::ECirc, 0, {}, i, 0}; }
  static Justification premise(std::size_t k) { return {Kind::Premise, 0, {}, k, 0}; }
};

struct ProofLine {
  Formula formula;
  Justification why;
};

struct Proof {
  std::vector<ProofLine> lines;
  const Formula& conclusion() const { return lines.back().formula; }
};

struct ProofError {
  std::size_t line;  // 0-based
  std::string reason;
};

struct CheckOptions {
  bool allow_circ_rule = true;
};

namespace detail {

// a <-> b unfolds to (a -> b) & (b -> a).
inline std::optional<std::pair<Formula, Formula>> as_iff(const Formula& f) {
  if (f.kind() != Connective::And) return std::nullopt;
  const Formula& l = f.lhs();
  const Formula& r = f.rhs();
  if (l.kind() != Connective::Imp || r.kind() != Connective::Imp) return std::nullopt;
  if (l.lhs() != r.rhs() || l.rhs() != r.lhs()) return std::nullopt;
  return std::make_pair(l.lhs(), l.rhs());
}

}  // namespace detail

// First bad line, or nullopt when every line is justified. E¬ and E∘ may
// only cite lines whose derivation uses no premise.
inline std::optional<ProofError> check_proof(LogicId logic, const std::vector<Formula>& premises, const Proof& proof,
                                             const CheckOptions& options = {}) {
  std::vector<bool> uses_premise(proof.lines.size(), false);
  for (std::size_t i = 0; i < proof.lines.size(); ++i) {
    const ProofLine& line = proof.lines[i];
    const Justification& j = line.why;
    auto bad = [&](std::string reason) { return ProofError{i, std::move(reason)}; };
    auto earlier = [&](std::size_t k) { return k < i; };
    switch (j.kind) {
      case Justification::Kind::Axiom: {
        if (!has_axiom(logic, j.schema))
          return bad("Ax" + std::to_string(j.schema) + " is not an axiom of " + to_string(logic));
        const Formula& schema = axiom_schema(j.schema);
        if (j.binding.empty()) {
          if (!match(schema, line.formula)) return bad("not an instance of Ax" + std::to_string(j.schema));
        } else {
          try {
            if (substitute(schema, j.binding) != line.formula)
              return bad("binding does not produce the stated formula");
          } catch (const SubstitutionError& e) {
            return bad(e.what());
          }
        }
        break;
      }
      case Justification::Kind::MP: {
        if (!earlier(j.first) || !earlier(j.second)) return bad("MP cites a line that is not earlier");
        const Formula& major = proof.lines[j.second].formula;
        if (major.kind() != Connective::Imp || major.lhs() != proof.lines[j.first].formula ||
            major.rhs() != line.formula)
          return bad("MP premises do not have the shape phi, phi -> psi");
        uses_premise[i] = uses_premise[j.first] || uses_premise[j.second];
        break;
      }
      case Justification::Kind::ENeg:
      case Justification::Kind::ECirc: {
        const bool circ = j.kind == Justification::Kind::ECirc;
        if (!has_global_rules(logic)) return bad("global rules are not available in " + to_string(logic));
        if (circ && !options.allow_circ_rule) return bad("Ecirc is disabled");
        if (!earlier(j.first)) return bad("rule cites a line that is not earlier");
        if (uses_premise[j.first]) return bad("global rule applied to a premise-dependent line");
        auto sides = detail::as_iff(proof.lines[j.first].formula);
        if (!sides) return bad("cited line is not a biconditional");
        auto wrap = [&](const Formula& f) { return circ ? Formula::circ(f) : Formula::neg(f); };
        if (line.formula != Formula::iff(wrap(sides->first), wrap(sides->second)))
          return bad("conclusion does not match the rule");
        break;
      }
      case Justification::Kind::Premise: {
        if (j.first >= premises.size()) return bad("no such premise");
        if (premises[j.first] != line.formula) return bad("formula differs from the cited premise");
        uses_premise[i] = true;
        break;
      }
    }
  }
  return std::nullopt;
}

struct ProofBudget {
  std::size_t max_lines = 200;
  std::size_t max_formulas = 5000;
};

namespace detail {

// Forward chaining: axiom instances with metavariables bound to subformulas
// of the goal, closed under MP and, for the RL logics, E¬/E∘ on proved
// biconditionals whose conclusion is again a subformula of the goal.
class ForwardSearch {
 public:
  ForwardSearch(LogicId logic, const Formula& goal, const ProofBudget& budget, bool circ_rule)
      : logic_(logic), goal_(goal), budget_(budget), circ_rule_(circ_rule), pool_({goal}) {}

  std::optional<Proof> run() {
    for (int k = 1; k <= kAxiomCount && !done(); ++k)
      if (has_axiom(logic_, k)) instantiate(k);
    while (!queue_.empty() && !done()) {
      const std::size_t id = queue_.front();
      queue_.pop_front();
      expand(id);
    }
    auto it = known_.find(goal_);
    if (it == known_.end()) return std::nullopt;
    return extract(it->second);
  }

 private:
  struct Node {
    Formula formula;
    Justification why;
  };

  bool done() const { return found_ || capped_; }

  void add(const Formula& f, Justification why) {
    if (done() || known_.count(f)) return;
    if (nodes_.size() >= budget_.max_formulas) {
      capped_ = true;
      return;
    }
    const std::size_t id = nodes_.size();
    nodes_.push_back({f, std::move(why)});
    known_.emplace(f, id);
    queue_.push_back(id);
    if (f == goal_) found_ = true;
  }

  void instantiate(int k) {
    const Formula& schema = axiom_schema(k);
    const auto vars = metavariables(schema);
    const std::size_t n = pool_.size();
    std::vector<std::size_t> pick(vars.size(), 0);
    while (!done()) {
      Binding b;
      for (std::size_t v = 0; v < vars.size(); ++v) b.emplace(vars[v], pool_[pick[v]]);
      add(substitute(schema, b), Justification::axiom(k, b));
      std::size_t v = vars.size();
      while (v > 0) {
        --v;
        if (++pick[v] < n) break;
        pick[v] = 0;
        if (v == 0) return;
      }
    }
  }

  void expand(std::size_t id) {
    const Formula f = nodes_[id].formula;
    if (auto it = waiting_.find(f); it != waiting_.end()) {
      const auto majors = std::move(it->second);
      waiting_.erase(it);
      for (std::size_t major : majors) add(nodes_[major].formula.rhs(), Justification::mp(id, major));
    }
    if (f.kind() == Connective::Imp) {
      if (auto it = known_.find(f.lhs()); it != known_.end() && it->second != id) {
        add(f.rhs(), Justification::mp(it->second, id));
      } else if (it == known_.end()) {
        waiting_[f.lhs()].push_back(id);
      }
    }
    if (has_global_rules(logic_)) {
      if (auto sides = as_iff(f)) {
        const Formula n = Formula::iff(Formula::neg(sides->first), Formula::neg(sides->second));
        if (pool_.contains(n)) add(n, Justification::eneg(id));
        if (circ_rule_) {
          const Formula c = Formula::iff(Formula::circ(sides->first), Formula::circ(sides->second));
          if (pool_.contains(c)) add(c, Justification::ecirc(id));
        }
      }
    }
  }

  std::optional<Proof> extract(std::size_t target) const {
    std::vector<bool> needed(nodes_.size(), false);
    std::vector<std::size_t> stack{target};
    while (!stack.empty()) {
      const std::size_t id = stack.back();
      stack.pop_back();
      if (needed[id]) continue;
      needed[id] = true;
      const Justification& j = nodes_[id].why;
      if (j.kind == Justification::Kind::MP) {
        stack.push_back(j.first);
        stack.push_back(j.second);
      } else if (j.kind == Justification::Kind::ENeg || j.kind == Justification::Kind::ECirc) {
        stack.push_back(j.first);
      }
    }
    std::vector<std::size_t> renumber(nodes_.size(), 0);
    Proof proof;
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
      if (!needed[id]) continue;
      renumber[id] = proof.lines.size();
      Justification j = nodes_[id].why;
      j.first = renumber[j.first];
      j.second = renumber[j.second];
      proof.lines.push_back({nodes_[id].formula, std::move(j)});
    }
    if (proof.lines.size() > budget_.max_lines) return std::nullopt;
    return proof;
  }

  LogicId logic_;
  Formula goal_;
  ProofBudget budget_;
  bool circ_rule_;
  SubformulaIndex pool_;
  std::vector<Node> nodes_;
  FormulaMap<std::size_t> known_;
  FormulaMap<std::vector<std::size_t>> waiting_;
  std::deque<std::size_t> queue_;
  bool found_ = false;
  bool capped_ = false;
};

inline void check_budget(const ProofBudget& budget) {
  if (budget.max_lines == 0 || budget.max_formulas == 0) throw std::invalid_argument("budget must be positive");
}

}  // namespace detail

// A premise-free proof of goal, or nullopt ("unknown", never a refutation).
inline std::optional<Proof> bounded_prove(LogicId logic, const Formula& goal, const ProofBudget& budget = {},
                                          const CheckOptions& options = {}) {
  detail::check_budget(budget);
  return detail::ForwardSearch(logic, goal, budget, options.allow_circ_rule).run();
}

struct Derivation {
  Proof proof;                         // derives goal from the premises
  std::vector<std::size_t> premises_used;  // 0-based, ascending
};

inline Formula right_conjunction(const std::vector<Formula>& fs) {
  Formula acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = Formula::conj(fs[i], acc);
  return acc;
}

// Γ ⊢ goal: a premise-free proof of goal, or of (γ1 ∧ (γ2 ∧ …)) → goal for a
// premise subset tried in size order. The returned proof then discharges the
// conjunction from the premises, so check_proof accepts it against Γ.
inline std::optional<Derivation> rl_derives(LogicId logic, const std::vector<Formula>& premises, const Formula& goal,
                                            const ProofBudget& budget = {}, const CheckOptions& options = {}) {
  detail::check_budget(budget);
  if (auto p = bounded_prove(logic, goal, budget, options)) return Derivation{std::move(*p), {}};
  const std::size_t n = premises.size();
  if (n > 16) throw std::invalid_argument("too many premises for subset search");
  for (std::size_t size = 1; size <= n; ++size) {
    std::vector<std::size_t> pick(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      std::vector<Formula> gammas;
      for (std::size_t i : pick) gammas.push_back(premises[i]);
      const Formula conj = right_conjunction(gammas);
      if (auto p = bounded_prove(logic, Formula::imp(conj, goal), budget, options)) {
        Proof proof = std::move(*p);
        const std::size_t implication = proof.lines.size() - 1;
        auto push = [&](Formula f, Justification j) {
          proof.lines.push_back({std::move(f), std::move(j)});
          return proof.lines.size() - 1;
        };
        std::size_t acc = push(gammas.back(), Justification::premise(pick.back()));
        Formula acc_f = gammas.back();
        for (std::size_t i = size - 1; i-- > 0;) {
          const Formula& g = gammas[i];
          const Formula next = Formula::conj(g, acc_f);
          const std::size_t prem = push(g, Justification::premise(pick[i]));
          const std::size_t ax = push(Formula::imp(g, Formula::imp(acc_f, next)),
                                      Justification::axiom(3, {{"alpha", g}, {"beta", acc_f}}));
          const std::size_t step = push(Formula::imp(acc_f, next), Justification::mp(prem, ax));
          acc = push(next, Justification::mp(acc, step));
          acc_f = next;
        }
        push(goal, Justification::mp(acc, implication));
        return Derivation{std::move(proof), pick};
      }
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == n - size + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t k = i; k < size; ++k) pick[k] = pick[k - 1] + 1;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- text I/O

class ProofFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_justification(const Justification& j) {
  switch (j.kind) {
    case Justification::Kind::Axiom: {
      std::string s = "Ax" + std::to_string(j.schema);
      if (!j.binding.empty()) {
        s += '[';
        bool first = true;
        for (const auto& [var, f] : j.binding) {
          s += (first ? "" : ", ") + var + ":=" + render(f);
          first = false;
        }
        s += ']';
      }
      return s;
    }
    case Justification::Kind::MP: return "MP " + std::to_string(j.first + 1) + " " + std::to_string(j.second + 1);
    case Justification::Kind::ENeg: return "Eneg " + std::to_string(j.first + 1);
    case Justification::Kind::ECirc: return "Ecirc " + std::to_string(j.first + 1);
    case Justification::Kind::Premise: return "Prem " + std::to_string(j.first + 1);
  }
  return "";
}

inline std::string format_proof(const Proof& proof) {
  std::string out;
  for (std::size_t i = 0; i < proof.lines.size(); ++i)
    out += std::to_string(i + 1) + ". " + render(proof.lines[i].formula) + " ; " +
           format_justification(proof.lines[i].why) + "\n";
  return out;
}

inline Proof parse_proof(const std::string& text) {
  static const std::regex line_re(R"(^\s*(\d+)\.\s*([^;]*?)\s*;\s*(.*?)\s*$)");
  static const std::regex ax_re(R"(^Ax(\d+)(?:\[(.*)\])?$)");
  static const std::regex ref1_re(R"(^(Eneg|Ecirc|Prem)\s+(\d+)$)");
  static const std::regex mp_re(R"(^MP\s+(\d+)\s+(\d+)$)");
  Proof proof;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  auto index = [&](const std::string& s) {
    const std::size_t k = std::stoul(s);
    if (k == 0) throw ProofFormatError("line " + std::to_string(lineno) + ": references are 1-based");
    return k - 1;
  };
  while (std::getline(in, raw)) {
    ++lineno;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::smatch m;
    if (!std::regex_match(raw, m, line_re)) throw ProofFormatError("line " + std::to_string(lineno) + ": malformed");
    if (std::stoul(m[1]) != proof.lines.size() + 1)
      throw ProofFormatError("line " + std::to_string(lineno) + ": expected number " +
                             std::to_string(proof.lines.size() + 1));
    Formula f = parse(m[2].str());
    const std::string why = m[3];
    std::smatch w;
    Justification j;
    if (std::regex_match(why, w, ax_re)) {
      Binding b;
      if (w[2].matched) {
        std::istringstream items(w[2].str());
        std::string item;
        while (std::getline(items, item, ',')) {
          const auto eq = item.find(":=");
          if (eq == std::string::npos)
            throw ProofFormatError("line " + std::to_string(lineno) + ": binding needs ':='");
          std::string var = item.substr(0, eq);
          var.erase(0, var.find_first_not_of(' '));
          var.erase(var.find_last_not_of(' ') + 1);
          b.emplace(var, parse(item.substr(eq + 2)));
        }
      }
      j = Justification::axiom(std::stoi(w[1]), std::move(b));
    } else if (std::regex_match(why, w, mp_re)) {
      j = Justification::mp(index(w[1]), index(w[2]));
    } else if (std::regex_match(why, w, ref1_re)) {
      const std::size_t k = index(w[2]);
      if (w[1] == "Eneg") j = Justification::eneg(k);
      else if (w[1] == "Ecirc") j = Justification::ecirc(k);
      else j = Justification::premise(k);
    } else {
      throw ProofFormatError("line " + std::to_string(lineno) + ": unknown justification '" + why + "'");
    }
    proof.lines.push_back({std::move(f), std::move(j)});
  }
  if (proof.lines.empty()) throw ProofFormatError("empty proof");
  return proof;
}

}  // namespace lfi
