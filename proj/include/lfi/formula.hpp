#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lfi {

enum class Connective : std::uint8_t { Atom, Neg, Circ, And, Or, Imp };

inline bool is_unary(Connective c) { return c == Connective::Neg || c == Connective::Circ; }
inline bool is_binary(Connective c) {
  return c == Connective::And || c == Connective::Or || c == Connective::Imp;
}

// Immutable formula tree with shared subterms. Equality is structural.
class Formula {
 public:
  static Formula atom(std::string name) {
    return Formula(std::make_shared<const Node>(Connective::Atom, std::move(name), nullptr, nullptr));
  }
  static Formula neg(Formula a) { return unary(Connective::Neg, std::move(a)); }
  static Formula circ(Formula a) { return unary(Connective::Circ, std::move(a)); }
  static Formula conj(Formula a, Formula b) { return binary(Connective::And, std::move(a), std::move(b)); }
  static Formula disj(Formula a, Formula b) { return binary(Connective::Or, std::move(a), std::move(b)); }
  static Formula imp(Formula a, Formula b) { return binary(Connective::Imp, std::move(a), std::move(b)); }
  static Formula iff(const Formula& a, const Formula& b) { return conj(imp(a, b), imp(b, a)); }
  // ~a, the classical negation definable from ¬ and ∘.
  static Formula strong_neg(const Formula& a) { return conj(neg(a), circ(a)); }

  Connective kind() const { return node_->kind; }
  bool is_atom() const { return node_->kind == Connective::Atom; }
  const std::string& name() const { return node_->name; }
  const Formula& operand() const { return *node_->lhs; }
  const Formula& lhs() const { return *node_->lhs; }
  const Formula& rhs() const { return *node_->rhs; }
  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }
  std::size_t depth() const { return node_->depth; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind ||
        a.node_->size != b.node_->size)
      return false;
    if (a.is_atom()) return a.name() == b.name();
    if (a.lhs() != b.lhs()) return false;
    return is_unary(a.kind()) || a.rhs() == b.rhs();
  }

  // Deterministic structural order: smaller trees first, then kind, name, children.
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    if (a.is_atom()) return a.name().compare(b.name()) <=> 0;
    if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
    if (is_unary(a.kind())) return std::strong_ordering::equal;
    return a.rhs() <=> b.rhs();
  }

 private:
  struct Node {
    Node(Connective k, std::string n, std::unique_ptr<Formula> l, std::unique_ptr<Formula> r)
        : kind(k), name(std::move(n)), lhs(std::move(l)), rhs(std::move(r)) {
      std::size_t h = std::hash<std::string>{}(name) ^ (static_cast<std::size_t>(kind) * 0x9e3779b97f4a7c15ULL);
      size = 1;
      depth = 0;
      for (const auto* c : {lhs.get(), rhs.get()}) {
        if (!c) continue;
        h = (h ^ c->hash()) * 0x100000001b3ULL + (h << 6) + (h >> 2);
        size += c->size();
        depth = std::max(depth, c->depth() + 1);
      }
      hash = h;
    }
    Connective kind;
    std::string name;
    std::unique_ptr<Formula> lhs;
    std::unique_ptr<Formula> rhs;
    std::size_t hash = 0;
    std::size_t size = 1;
    std::size_t depth = 0;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula unary(Connective k, Formula a) {
    return Formula(std::make_shared<const Node>(k, std::string{}, std::make_unique<Formula>(std::move(a)), nullptr));
  }
  static Formula binary(Connective k, Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(k, std::string{}, std::make_unique<Formula>(std::move(a)),
                                                std::make_unique<Formula>(std::move(b))));
  }

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

template <class V>
using FormulaMap = std::unordered_map<Formula, V, FormulaHash>;

// ---------------------------------------------------------------- rendering

namespace detail {

inline int precedence(Connective c) {
  switch (c) {
    case Connective::Imp: return 1;
    case Connective::Or: return 2;
    case Connective::And: return 3;
    case Connective::Neg:
    case Connective::Circ: return 4;
    case Connective::Atom: return 5;
  }
  return 0;
}

inline void render_into(const Formula& f, std::string& out, int min_prec) {
  const int prec = precedence(f.kind());
  const bool paren = prec < min_prec;
  if (paren) out += '(';
  switch (f.kind()) {
    case Connective::Atom: out += f.name(); break;
    case Connective::Neg:
      out += '!';
      render_into(f.operand(), out, 4);
      break;
    case Connective::Circ:
      out += '@';
      render_into(f.operand(), out, 4);
      break;
    case Connective::And:
      render_into(f.lhs(), out, 3);
      out += " & ";
      render_into(f.rhs(), out, 4);
      break;
    case Connective::Or:
      render_into(f.lhs(), out, 2);
      out += " | ";
      render_into(f.rhs(), out, 3);
      break;
    case Connective::Imp:
      render_into(f.lhs(), out, 2);
      out += " -> ";
      render_into(f.rhs(), out, 1);
      break;
  }
  if (paren) out += ')';
}

}  // namespace detail

inline std::string render(const Formula& f) {
  std::string out;
  detail::render_into(f, out, 0);
  return out;
}

// ------------------------------------------------------------------ parsing

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found)
      : std::runtime_error(compose(line, column, expected, found)),
        line_(line),
        column_(column),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  static std::string compose(std::size_t line, std::size_t column, const std::vector<std::string>& expected,
                             const std::string& found) {
    std::string msg = "syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                      ": expected one of {";
    for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? ", " : "") + expected[i];
    return msg + "}, found " + found;
  }

  std::size_t line_, column_;
  std::vector<std::string> expected_;
  std::string found_;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { advance(); }

  Formula parse_all() {
    Formula f = parse_iff();
    if (tok_ != Tok::End) fail({"'->'", "'<->'", "'|'", "'&'", "end of input"});
    return f;
  }

 private:
  enum class Tok { Ident, Not, Circ, Tilde, And, Or, Imp, Iff, LParen, RParen, End, Bad };

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++col_;
      } else {
        break;
      }
      ++pos_;
    }
  }

  void take(Tok t, std::size_t len) {
    tok_ = t;
    lexeme_ = std::string(text_.substr(pos_, len));
    pos_ += len;
    col_ += len;
  }

  void advance() {
    skip_space();
    tok_line_ = line_;
    tok_col_ = col_;
    if (pos_ >= text_.size()) {
      tok_ = Tok::End;
      lexeme_.clear();
      return;
    }
    const char c = text_[pos_];
    const auto rest = text_.substr(pos_);
    if (c >= 'a' && c <= 'z') {
      std::size_t n = 1;
      while (n < rest.size()) {
        char d = rest[n];
        if ((d >= 'a' && d <= 'z') || (d >= 'A' && d <= 'Z') || (d >= '0' && d <= '9') || d == '_')
          ++n;
        else
          break;
      }
      take(Tok::Ident, n);
    } else if (rest.starts_with("<->")) {
      take(Tok::Iff, 3);
    } else if (rest.starts_with("->")) {
      take(Tok::Imp, 2);
    } else {
      switch (c) {
        case '!': take(Tok::Not, 1); break;
        case '@': take(Tok::Circ, 1); break;
        case '~': take(Tok::Tilde, 1); break;
        case '&': take(Tok::And, 1); break;
        case '|': take(Tok::Or, 1); break;
        case '(': take(Tok::LParen, 1); break;
        case ')': take(Tok::RParen, 1); break;
        default: take(Tok::Bad, 1); break;
      }
    }
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string found = tok_ == Tok::End ? "end of input" : "'" + lexeme_ + "'";
    throw ParseError(tok_line_, tok_col_, std::move(expected), std::move(found));
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (tok_ == Tok::Iff) {
      advance();
      f = Formula::iff(f, parse_imp());
    }
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (tok_ == Tok::Imp) {
      advance();
      return Formula::imp(std::move(f), parse_imp());
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (tok_ == Tok::Or) {
      advance();
      f = Formula::disj(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (tok_ == Tok::And) {
      advance();
      f = Formula::conj(std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    switch (tok_) {
      case Tok::Not: advance(); return Formula::neg(parse_unary());
      case Tok::Circ: advance(); return Formula::circ(parse_unary());
      case Tok::Tilde: advance(); return Formula::strong_neg(parse_unary());
      case Tok::Ident: {
        Formula f = Formula::atom(lexeme_);
        advance();
        return f;
      }
      case Tok::LParen: {
        advance();
        Formula f = parse_iff();
        if (tok_ != Tok::RParen) fail({"')'", "'->'", "'<->'", "'|'", "'&'"});
        advance();
        return f;
      }
      default: fail({"identifier", "'('", "'!'", "'@'", "'~'"});
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
  Tok tok_ = Tok::End;
  std::string lexeme_;
  std::size_t tok_line_ = 1, tok_col_ = 1;
};

}  // namespace detail

inline Formula parse(std::string_view text) { return detail::Parser(text).parse_all(); }

// ------------------------------------------------------------- subformulas

// Distinct subformulas, children before parents.
class SubformulaIndex {
 public:
  SubformulaIndex() = default;

  template <class Range>
  explicit SubformulaIndex(const Range& fs) {
    for (const Formula& f : fs) add(f);
  }
  SubformulaIndex(std::initializer_list<Formula> fs) {
    for (const Formula& f : fs) add(f);
  }

  // Adds f and its subformulas; returns the index of f.
  std::size_t add(const Formula& f) {
    if (auto it = pos_.find(f); it != pos_.end()) return it->second;
    std::size_t l = kNone, r = kNone;
    if (!f.is_atom()) l = add(f.lhs());
    if (is_binary(f.kind())) r = add(f.rhs());
    const std::size_t i = entries_.size();
    entries_.push_back(f);
    children_.emplace_back(l, r);
    pos_.emplace(f, i);
    return i;
  }

  std::size_t size() const { return entries_.size(); }
  const Formula& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Formula>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  std::optional<std::size_t> find(const Formula& f) const {
    auto it = pos_.find(f);
    if (it == pos_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const Formula& f) const { return pos_.count(f) != 0; }
  std::size_t left(std::size_t i) const { return children_[i].first; }
  std::size_t right(std::size_t i) const { return children_[i].second; }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

 private:
  std::vector<Formula> entries_;
  std::vector<std::pair<std::size_t, std::size_t>> children_;
  FormulaMap<std::size_t> pos_;
};

template <class Range>
SubformulaIndex subformulas(const Range& fs) {
  return SubformulaIndex(fs);
}
inline SubformulaIndex subformulas(std::initializer_list<Formula> fs) { return SubformulaIndex(fs); }

inline std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  for (const Formula& g : subformulas({f}))
    if (g.is_atom()) out.insert(g.name());
  return out;
}

// ------------------------------------------------------------ substitution

using Binding = std::map<std::string, Formula>;

class SubstitutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simultaneous substitution; every atom of the schema is a metavariable.
inline Formula substitute(const Formula& schema, const Binding& binding) {
  switch (schema.kind()) {
    case Connective::Atom: {
      auto it = binding.find(schema.name());
      if (it == binding.end()) throw SubstitutionError("unbound metavariable '" + schema.name() + "'");
      return it->second;
    }
    case Connective::Neg: return Formula::neg(substitute(schema.operand(), binding));
    case Connective::Circ: return Formula::circ(substitute(schema.operand(), binding));
    case Connective::And:
      return Formula::conj(substitute(schema.lhs(), binding), substitute(schema.rhs(), binding));
    case Connective::Or:
      return Formula::disj(substitute(schema.lhs(), binding), substitute(schema.rhs(), binding));
    case Connective::Imp:
      return Formula::imp(substitute(schema.lhs(), binding), substitute(schema.rhs(), binding));
  }
  throw SubstitutionError("malformed schema");
}

namespace detail {
inline bool match_into(const Formula& schema, const Formula& f, Binding& b) {
  if (schema.is_atom()) {
    auto [it, fresh] = b.emplace(schema.name(), f);
    return fresh || it->second == f;
  }
  if (schema.kind() != f.kind()) return false;
  if (!match_into(schema.lhs(), f.lhs(), b)) return false;
  return is_unary(schema.kind()) || match_into(schema.rhs(), f.rhs(), b);
}
}  // namespace detail

// The binding under which substitute(schema, binding) == f, if any.
inline std::optional<Binding> match(const Formula& schema, const Formula& f) {
  Binding b;
  if (!detail::match_into(schema, f, b)) return std::nullopt;
  return b;
}

// ----------------------------------------------------------- axiom schemas

inline constexpr int kAxiomCount = 15;

// Ax1..Ax15 over the metavariables alpha, beta, gamma.
inline const Formula& axiom_schema(int k) {
  static const std::vector<Formula> table = [] {
    const char* text[kAxiomCount] = {
        "alpha -> beta -> alpha",
        "(alpha -> beta -> gamma) -> (alpha -> beta) -> alpha -> gamma",
        "alpha -> beta -> alpha & beta",
        "alpha & beta -> alpha",
        "alpha & beta -> beta",
        "alpha -> alpha | beta",
        "beta -> alpha | beta",
        "(alpha -> gamma) -> (beta -> gamma) -> alpha | beta -> gamma",
        "(alpha -> beta) | alpha",
        "alpha | !alpha",
        "@alpha -> alpha -> !alpha -> beta",
        "@alpha | alpha & !alpha",
        "alpha -> !!alpha",
        "!!alpha -> alpha",
        "!@alpha -> alpha & !alpha",
    };
    std::vector<Formula> v;
    for (const char* t : text) v.push_back(parse(t));
    return v;
  }();
  if (k < 1 || k > kAxiomCount) throw std::out_of_range("no axiom schema Ax" + std::to_string(k));
  return table[static_cast<std::size_t>(k - 1)];
}

// Metavariables of a schema in first-occurrence order.
inline std::vector<std::string> metavariables(const Formula& schema) {
  std::vector<std::string> out;
  for (const Formula& g : subformulas({schema}))
    if (g.is_atom()) out.push_back(g.name());
  return out;
}

}  // namespace lfi

template <>
struct std::hash<lfi::Formula> {
  std::size_t operator()(const lfi::Formula& f) const { return f.hash(); }
};
