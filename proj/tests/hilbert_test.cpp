#include <gtest/gtest.h>

#include <random>

#include "lfi/hilbert.hpp"
#include "lfi/nmatrix.hpp"
#include "support.hpp"

using namespace lfi;

namespace {

using J = Justification;

Formula f(const char* s) { return parse(s); }

const Nmatrix& matrix_of(LogicId l) {
  return l == LogicId::Cie || l == LogicId::RCie ? Nmatrix::cie() : Nmatrix::cbr();
}

// The textbook five-line derivation of p -> p.
Proof identity_proof() {
  const Formula p = f("p"), pp = f("p -> p");
  Proof proof;
  proof.lines.push_back({f("p -> (p -> p) -> p"), J::axiom(1, {{"alpha", p}, {"beta", pp}})});
  proof.lines.push_back({f("(p -> (p -> p) -> p) -> (p -> p -> p) -> p -> p"),
                         J::axiom(2, {{"alpha", p}, {"beta", pp}, {"gamma", p}})});
  proof.lines.push_back({f("(p -> p -> p) -> p -> p"), J::mp(0, 1)});
  proof.lines.push_back({f("p -> p -> p"), J::axiom(1, {{"alpha", p}, {"beta", p}})});
  proof.lines.push_back({pp, J::mp(3, 2)});
  return proof;
}

struct Goal {
  LogicId logic;
  const char* text;
};

const std::vector<Goal>& theorem_goals() {
  static const std::vector<Goal> goals = {
      {LogicId::Cbr, "p -> p"},
      {LogicId::Cbr, "p | !p"},
      {LogicId::Cbr, "@p | p & !p"},
      {LogicId::Cie, "!@p -> p & !p"},
      {LogicId::Cbr, "p -> q -> p"},
      {LogicId::Cbr, "p & q -> p"},
      {LogicId::Cbr, "p & q -> q"},
      {LogicId::Cbr, "p -> p | q"},
      {LogicId::Cbr, "q -> p | q"},
      {LogicId::Cbr, "p -> q -> p & q"},
      {LogicId::Cbr, "(p -> q) | p"},
      {LogicId::Cbr, "p -> !!p"},
      {LogicId::Cbr, "!!p -> p"},
      {LogicId::Cbr, "@p -> p -> !p -> q"},
      {LogicId::Cbr, "(p -> q -> r) -> (p -> q) -> p -> r"},
      {LogicId::Cbr, "(p -> r) -> (q -> r) -> p | q -> r"},
      {LogicId::Cbr, "q -> p -> p"},
      {LogicId::Cbr, "!p | !!p"},
      {LogicId::Cbr, "@q | q & !q"},
      {LogicId::Cie, "p -> p"},
      {LogicId::Cie, "p | !p"},
      {LogicId::Cie, "!@q -> q & !q"},
      {LogicId::Cie, "p & q -> p"},
      {LogicId::RCbr, "p -> p"},
      {LogicId::RCbr, "@p | p & !p"},
      {LogicId::RCie, "!@p -> p & !p"},
  };
  return goals;
}

}  // namespace

TEST(CheckProof, IdentityDerivationAccepted) {
  EXPECT_FALSE(check_proof(LogicId::Cbr, {}, identity_proof()).has_value());
  EXPECT_FALSE(check_proof(LogicId::Cie, {}, identity_proof()).has_value());
}

TEST(CheckProof, Ax15NotInCbr) {
  Proof proof;
  proof.lines.push_back({f("!@p -> p & !p"), J::axiom(15, {{"alpha", f("p")}})});
  const auto err = check_proof(LogicId::Cbr, {}, proof);
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->line, 0u);
  EXPECT_FALSE(check_proof(LogicId::Cie, {}, proof).has_value());
}

TEST(CheckProof, Ax12NotInCie) {
  Proof proof;
  proof.lines.push_back({f("@p | p & !p"), J::axiom(12, {{"alpha", f("p")}})});
  EXPECT_TRUE(check_proof(LogicId::Cie, {}, proof).has_value());
  EXPECT_FALSE(check_proof(LogicId::Cbr, {}, proof).has_value());
}

TEST(CheckProof, GlobalRuleRejectsPremiseDependentLine) {
  Proof proof;
  proof.lines.push_back({f("p <-> q"), J::premise(0)});
  proof.lines.push_back({f("!p <-> !q"), J::eneg(0)});
  const auto err = check_proof(LogicId::RCbr, {f("p <-> q")}, proof);
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->line, 1u);
}

TEST(CheckProof, ENegOnTheoremAccepted) {
  const auto proof = bounded_prove(LogicId::RCbr, f("p <-> !!p"));
  ASSERT_TRUE(proof.has_value());
  Proof extended = *proof;
  extended.lines.push_back({f("!p <-> !!!p"), J::eneg(extended.lines.size() - 1)});
  EXPECT_FALSE(check_proof(LogicId::RCbr, {}, extended).has_value());
  EXPECT_TRUE(check_proof(LogicId::Cbr, {}, extended).has_value());
}

TEST(CheckProof, CircRuleFlag) {
  const auto proof = bounded_prove(LogicId::RCbr, f("p <-> !!p"));
  ASSERT_TRUE(proof.has_value());
  Proof extended = *proof;
  extended.lines.push_back({f("@p <-> @!!p"), J::ecirc(extended.lines.size() - 1)});
  EXPECT_FALSE(check_proof(LogicId::RCbr, {}, extended).has_value());
  EXPECT_TRUE(check_proof(LogicId::RCbr, {}, extended, CheckOptions{false}).has_value());
}

TEST(CheckProof, BadMPReported) {
  Proof proof;
  proof.lines.push_back({f("p"), J::premise(0)});
  proof.lines.push_back({f("q"), J::mp(0, 0)});
  const auto err = check_proof(LogicId::Cbr, {f("p")}, proof);
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->line, 1u);
}

TEST(BoundedProve, TheoremsProvedCheckedAndSound) {
  int proved = 0;
  for (const Goal& g : theorem_goals()) {
    const auto proof = bounded_prove(g.logic, f(g.text));
    ASSERT_TRUE(proof.has_value()) << to_string(g.logic) << " " << g.text;
    EXPECT_EQ(proof->conclusion(), f(g.text));
    EXPECT_FALSE(check_proof(g.logic, {}, *proof).has_value()) << g.text;
    EXPECT_TRUE(is_theorem(matrix_of(g.logic), proof->conclusion()).valid) << g.text;
    ++proved;
  }
  EXPECT_GE(proved, 20);
}

TEST(BoundedProve, ExcludedMiddleIsOneLine) {
  const auto proof = bounded_prove(LogicId::Cbr, f("p | !p"));
  ASSERT_TRUE(proof.has_value());
  EXPECT_EQ(proof->lines.size(), 1u);
}

TEST(BoundedProve, AtomUnknown) { EXPECT_FALSE(bounded_prove(LogicId::Cbr, f("q")).has_value()); }

TEST(BoundedProve, CircCircUnknownInRCbr) {
  EXPECT_FALSE(bounded_prove(LogicId::RCbr, f("@@p")).has_value());
  EXPECT_FALSE(bounded_prove(LogicId::RCbr, f("@@p"), ProofBudget{400, 20000}).has_value());
}

TEST(BoundedProve, ZeroBudgetRejected) {
  EXPECT_THROW(bounded_prove(LogicId::Cbr, f("p -> p"), ProofBudget{0, 10}), std::invalid_argument);
  EXPECT_THROW(rl_derives(LogicId::RCbr, {}, f("p"), ProofBudget{10, 0}), std::invalid_argument);
}

TEST(BoundedProve, Deterministic) {
  const auto a = bounded_prove(LogicId::Cbr, f("p -> p"));
  const auto b = bounded_prove(LogicId::Cbr, f("p -> p"));
  ASSERT_TRUE(a && b);
  EXPECT_EQ(format_proof(*a), format_proof(*b));
}

TEST(BoundedProve, RandomGoalsSoundWhenProved) {
  std::mt19937_64 rng(12);
  int proved = 0;
  for (int i = 0; i < 150; ++i) {
    const LogicId l = i % 2 ? LogicId::Cie : LogicId::Cbr;
    const Formula g = gen::random_formula(rng, 2);
    const auto proof = bounded_prove(l, g, ProofBudget{60, 1500});
    if (!proof) continue;
    ++proved;
    EXPECT_FALSE(check_proof(l, {}, *proof).has_value()) << render(g);
    EXPECT_TRUE(is_theorem(matrix_of(l), g).valid) << render(g);
  }
  EXPECT_GT(proved, 0);
}

TEST(BoundedProve, BudgetMonotone) {
  const std::vector<ProofBudget> budgets = {{5, 50}, {20, 300}, {60, 1500}, {200, 5000}};
  for (const Goal& g : theorem_goals()) {
    bool seen = false;
    for (const ProofBudget& b : budgets) {
      const bool now = bounded_prove(g.logic, f(g.text), b).has_value();
      EXPECT_TRUE(!seen || now) << g.text << " lost at " << b.max_lines;
      seen = seen || now;
    }
  }
}

TEST(RlDerives, ConjunctionElimination) {
  const auto d = rl_derives(LogicId::RCbr, {f("p & q")}, f("p"));
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->premises_used, (std::vector<std::size_t>{0}));
  EXPECT_EQ(d->proof.conclusion(), f("p"));
  EXPECT_FALSE(check_proof(LogicId::RCbr, {f("p & q")}, d->proof).has_value());
}

TEST(RlDerives, TwoPremisesRightConjunction) {
  const std::vector<Formula> gamma{f("r"), f("p"), f("q")};
  const auto d = rl_derives(LogicId::RCbr, gamma, f("p & q"));
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->premises_used, (std::vector<std::size_t>{1, 2}));
  EXPECT_FALSE(check_proof(LogicId::RCbr, gamma, d->proof).has_value());
  EXPECT_TRUE(holds(Nmatrix::cbr(), gamma, f("p & q")).valid);
}

TEST(RlDerives, TheoremNeedsNoPremises) {
  const auto d = rl_derives(LogicId::RCie, {f("q")}, f("p -> p"));
  ASSERT_TRUE(d.has_value());
  EXPECT_TRUE(d->premises_used.empty());
}

TEST(RlDerives, UnknownIsNotRefutation) { EXPECT_FALSE(rl_derives(LogicId::RCbr, {}, f("@@p")).has_value()); }

TEST(ProofText, RoundTrip) {
  for (const Goal& g : theorem_goals()) {
    const auto proof = bounded_prove(g.logic, f(g.text));
    ASSERT_TRUE(proof.has_value());
    const std::string text = format_proof(*proof);
    EXPECT_EQ(format_proof(parse_proof(text)), text);
    EXPECT_FALSE(check_proof(g.logic, {}, parse_proof(text)).has_value());
  }
}

TEST(ProofText, Format) {
  EXPECT_EQ(format_proof(identity_proof()),
            "1. p -> (p -> p) -> p ; Ax1[alpha:=p, beta:=p -> p]\n"
            "2. (p -> (p -> p) -> p) -> (p -> p -> p) -> p -> p ; Ax2[alpha:=p, beta:=p -> p, gamma:=p]\n"
            "3. (p -> p -> p) -> p -> p ; MP 1 2\n"
            "4. p -> p -> p ; Ax1[alpha:=p, beta:=p]\n"
            "5. p -> p ; MP 4 3\n");
}

TEST(ProofText, Malformed) {
  EXPECT_THROW(parse_proof(""), ProofFormatError);
  EXPECT_THROW(parse_proof("2. p ; Prem 1\n"), ProofFormatError);
  EXPECT_THROW(parse_proof("1. p ; Magic\n"), ProofFormatError);
  EXPECT_THROW(parse_proof("1. p ; MP 0 1\n"), ProofFormatError);
  EXPECT_THROW(parse_proof("1. p & ; Prem 1\n"), ParseError);
}
