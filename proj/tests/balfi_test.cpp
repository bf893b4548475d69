#include <gtest/gtest.h>

#include <random>
#include <set>

#include "lfi/balfi.hpp"

using namespace lfi;

namespace {

using E = FiniteBalfi::element_type;

constexpr BalfiClass kClasses[] = {BalfiClass::RmbC, BalfiClass::RmbCciw, BalfiClass::RCbr, BalfiClass::RCie};

// Every pair of tables on 2^n elements, filtered by the class equations
// written out directly.
std::set<std::pair<std::vector<E>, std::vector<E>>> brute_structures(int n, BalfiClass cls) {
  const E size = E{1} << n, top = size - 1;
  std::set<std::pair<std::vector<E>, std::vector<E>>> out;
  std::vector<E> neg(size, 0), circ(size, 0);
  auto bump = [&](std::vector<E>& t) {
    for (E i = 0; i < size; ++i) {
      if (++t[i] < size) return true;
      t[i] = 0;
    }
    return false;
  };
  do {
    do {
      bool ok = true;
      for (E x = 0; ok && x < size; ++x) {
        const E clash = x & neg[x];
        ok = (x | neg[x]) == top && (clash & circ[x]) == 0;
        if (cls == BalfiClass::RmbCciw || cls == BalfiClass::RCbr) ok = ok && circ[x] == (top ^ clash);
        if (cls == BalfiClass::RCbr || cls == BalfiClass::RCie) ok = ok && neg[neg[x]] == x;
        if (cls == BalfiClass::RCie) ok = ok && neg[circ[x]] == clash;
      }
      if (ok) out.emplace(neg, circ);
    } while (bump(circ));
  } while (bump(neg));
  return out;
}

bool neg_is_complement(const FiniteBalfi& b) {
  for (E x : b.elements())
    if (b.neg(x) != b.complement(x)) return false;
  return true;
}

IntervalSet random_interval_set(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(-6, 6), count(0, 3), coin(0, 5);
  std::vector<IntervalSet::Interval> parts;
  for (int k = count(rng); k > 0; --k) {
    const std::int64_t a = pick(rng), b = pick(rng);
    IntervalSet::Interval i{std::min(a, b), std::max(a, b)};
    if (coin(rng) == 0) i.lo.reset();
    if (coin(rng) == 0) i.hi.reset();
    parts.push_back(i);
  }
  return IntervalSet::from(parts);
}

// Endpoints stay in [-7, 7], so membership on this window plus the two far
// probes pins a set down.
std::vector<std::int64_t> probes() {
  std::vector<std::int64_t> out{-1000, 1000};
  for (std::int64_t z = -10; z <= 10; ++z) out.push_back(z);
  return out;
}

IntervalSet ray_down(std::int64_t n) { return IntervalSet::at_most(n); }
IntervalSet ray_up(std::int64_t n) { return IntervalSet::at_least(n); }

}  // namespace

TEST(CheckBalfi, ClassicalTwoElement) { EXPECT_TRUE(check_balfi(FiniteBalfi::boolean(1, BalfiClass::RCbr)).empty()); }

TEST(CheckBalfi, NegOfBottomIsBottom) {
  const FiniteBalfi b(1, {0, 0}, {1, 1}, BalfiClass::RmbC);
  const auto v = check_balfi(b);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].equation, "x ⊔ ¬x = 1");
  EXPECT_EQ(v[0].witness, "{}");
}

TEST(CheckBalfi, FourElementRCie) { EXPECT_TRUE(check_balfi(FiniteBalfi::boolean(2, BalfiClass::RCie)).empty()); }

TEST(CheckBalfi, TablesValidated) {
  EXPECT_THROW(FiniteBalfi(1, {1}, {1, 1}, BalfiClass::RmbC), std::invalid_argument);
  EXPECT_THROW(FiniteBalfi(1, {1, 2}, {1, 1}, BalfiClass::RmbC), std::invalid_argument);
  EXPECT_THROW(FiniteBalfi(5, {}, {}, BalfiClass::RmbC), std::invalid_argument);
}

TEST(Enumerate, SmallCounts) {
  EXPECT_EQ(enumerate_balfis(1, BalfiClass::RCbr).size(), 1u);
  EXPECT_GT(enumerate_balfis(1, BalfiClass::RmbC).size(), 1u);
}

TEST(Enumerate, MatchesBruteForce) {
  for (int n = 0; n <= 2; ++n)
    for (BalfiClass cls : kClasses) {
      std::set<std::pair<std::vector<E>, std::vector<E>>> got;
      std::vector<std::pair<std::vector<E>, std::vector<E>>> order;
      for (const FiniteBalfi& b : enumerate_balfis(n, cls)) {
        EXPECT_TRUE(check_balfi(b).empty());
        got.emplace(b.neg_table(), b.circ_table());
        order.emplace_back(b.neg_table(), b.circ_table());
      }
      EXPECT_EQ(got.size(), order.size()) << "duplicates";
      EXPECT_EQ(got, brute_structures(n, cls)) << to_string(cls) << " n=" << n;
    }
}

TEST(Enumerate, Deterministic) {
  EXPECT_EQ(enumerate_balfis(3, BalfiClass::RCie), enumerate_balfis(3, BalfiClass::RCie));
}

TEST(Enumerate, Cap) { EXPECT_THROW(enumerate_balfis(2, BalfiClass::RmbC, 3), std::length_error); }

TEST(Enumerate, TooLarge) { EXPECT_THROW(enumerate_balfis(5, BalfiClass::RCbr), std::invalid_argument); }

// No finite paraconsistent RCbr structures up to 16 elements.
TEST(Enumerate, FiniteRCbrIsClassical) {
  for (int n = 1; n <= 4; ++n) {
    std::size_t count = 0;
    for_each_balfi(n, BalfiClass::RCbr, [&](const FiniteBalfi& b) {
      ++count;
      EXPECT_TRUE(neg_is_complement(b));
      EXPECT_TRUE(check_balfi(b).empty());
      EXPECT_TRUE(lemma_violations(b).empty());
      return true;
    });
    EXPECT_EQ(count, 1u) << "n=" << n;
  }
}

// The involution argument on atoms applies to RCie too.
TEST(Enumerate, RCieLemmasAndClassicalNeg) {
  for (int n = 1; n <= 4; ++n) {
    std::size_t count = 0;
    for_each_balfi(n, BalfiClass::RCie, [&](const FiniteBalfi& b) {
      ++count;
      EXPECT_TRUE(lemma_violations(b).empty());
      EXPECT_TRUE(neg_is_complement(b));
      for (E x : b.elements()) {
        const E clash = b.meet(x, b.neg(x));
        EXPECT_EQ(b.neg(clash), b.circ(x));
        EXPECT_EQ(b.circ(x), b.complement(clash));
      }
      return true;
    });
    EXPECT_GE(count, 1u);
  }
}

TEST(Evaluate, ClassicalCirc) {
  const auto b = FiniteBalfi::boolean(1, BalfiClass::RCbr);
  EXPECT_EQ(evaluate(b, {{"p", 1u}}, parse("@p")), 1u);
  EXPECT_THROW(evaluate(b, {{"p", 1u}}, parse("q")), UnassignedAtom);
}

TEST(Evaluate, IntervalRay) {
  const IntervalModel m;
  EXPECT_EQ(evaluate(m, {{"p", ray_down(3)}}, parse("!p")), ray_up(3));
  EXPECT_EQ(evaluate(m, {{"p", ray_down(3)}}, parse("@p")), ~IntervalSet::singleton(3));
}

TEST(Consequence, ClassicalExplosion) {
  const auto b = FiniteBalfi::boolean(1, BalfiClass::RCbr);
  EXPECT_EQ(consequence_in(b, {parse("p"), parse("!p")}, parse("q")).status, ModelStatus::Holds);
  const auto v = consequence_in(b, {parse("p")}, parse("q"));
  ASSERT_EQ(v.status, ModelStatus::Fails);
  EXPECT_EQ(v.witness.at("p"), 1u);
  EXPECT_EQ(v.witness.at("q"), 0u);
}

TEST(Consequence, IntervalNeedsPool) {
  EXPECT_THROW(consequence_in(IntervalModel{}, {}, parse("p"), {}), std::invalid_argument);
  EXPECT_EQ(consequence_in(IntervalModel{}, {}, parse("p -> p"), {IntervalSet::all()}).status, ModelStatus::Unknown);
}

TEST(Consequence, IntervalWitnessForCircAndNeg) {
  const IntervalModel m;
  const auto v = evaluate(m, {{"p", ray_down(0)}, {"q", IntervalSet::empty()}}, parse("@p & !p -> q"));
  EXPECT_EQ(v, ray_down(0));
  EXPECT_FALSE(v.is_all());
}

TEST(Refute, Ax12FailsInRmbC) {
  const Formula ax12 = parse("@p | p & !p");
  const auto r = refute(BalfiClass::RmbC, 2, ax12);
  ASSERT_TRUE(r.has_value());
  EXPECT_TRUE(check_balfi(r->algebra).empty());
  EXPECT_NE(evaluate(r->algebra, r->assignment, ax12), r->algebra.top());
}

TEST(Refute, NoneFound) {
  EXPECT_FALSE(refute(BalfiClass::RCbr, 3, parse("p -> p")).has_value());
  EXPECT_FALSE(refute(BalfiClass::RCbr, 4, parse("@@p")).has_value());
  EXPECT_THROW(refute(BalfiClass::RCbr, 5, parse("p")), std::invalid_argument);
}

TEST(Refute, CircCircOnlyBelowRCie) {
  EXPECT_FALSE(refute(BalfiClass::RCie, 3, parse("@@p")).has_value());
  EXPECT_TRUE(refute(BalfiClass::RmbC, 2, parse("@@p")).has_value());
}

TEST(IntervalTable, RaysAndSamples) {
  const auto rows = interval_table_report(-3, 3, default_consistent_samples());
  ASSERT_EQ(rows.size(), 14u + default_consistent_samples().size());
  for (std::size_t i = 0; i < 14; ++i) {
    const auto& r = rows[i];
    const std::int64_t n = -3 + static_cast<std::int64_t>(i % 7);
    const IntervalSet x = i < 7 ? ray_down(n) : ray_up(n), pt = IntervalSet::singleton(n);
    EXPECT_EQ(r.x, x);
    EXPECT_EQ(r.neg, i < 7 ? ray_up(n) : ray_down(n));
    EXPECT_EQ(r.clash, pt);
    EXPECT_EQ(r.circ, ~pt);
    EXPECT_EQ(r.neg_neg, x);
    EXPECT_EQ(r.circ_neg, ~pt);
    EXPECT_EQ(r.neg_circ, pt);
    EXPECT_TRUE(r.matches_expected);
  }
  for (std::size_t i = 14; i < rows.size(); ++i) {
    const auto& r = rows[i];
    EXPECT_EQ(r.kind, IntervalRow::Kind::Consistent);
    EXPECT_EQ(r.neg, ~r.x);
    EXPECT_TRUE(r.clash.is_empty());
    EXPECT_TRUE(r.circ.is_all());
    EXPECT_EQ(r.neg_neg, r.x);
    EXPECT_TRUE(r.circ_neg.is_all());
    EXPECT_TRUE(r.neg_circ.is_empty());
    EXPECT_TRUE(r.matches_expected);
  }
}

TEST(IntervalTable, Examples) {
  const auto r0 = interval_row(ray_down(0));
  EXPECT_EQ(r0.clash.to_string(), "{0}");
  EXPECT_EQ(r0.circ.to_string(), "(-inf,-1] ∪ [1,inf)");
  EXPECT_EQ(interval_row(IntervalSet::range(1, 2)).neg.to_string(), "(-inf,0] ∪ [3,inf)");
  EXPECT_EQ(interval_row(ray_up(5)).clash, IntervalSet::singleton(5));
}

TEST(IntervalCertificates, AllThreeFail) {
  const IntervalModel m;
  const auto certs = interval_certificates();
  ASSERT_EQ(certs.size(), 3u);
  for (const auto& c : certs) {
    ASSERT_EQ(c.verdict.status, ModelStatus::Fails);
    Formula prem = c.premises[0];
    for (std::size_t i = 1; i < c.premises.size(); ++i) prem = Formula::conj(prem, c.premises[i]);
    const IntervalSet value = evaluate(m, c.verdict.witness, Formula::imp(prem, c.goal));
    EXPECT_FALSE(value.is_all());
    EXPECT_EQ(value, *c.verdict.value);
  }
  EXPECT_EQ(certs[0].verdict.witness.at("p"), ray_down(0));
  EXPECT_EQ(certs[0].verdict.witness.at("q"), IntervalSet::empty());
  EXPECT_EQ(*certs[0].verdict.value, ~IntervalSet::singleton(0));
}

TEST(IntervalModel, RCieEquationsOnRandomSets) {
  std::mt19937_64 rng(2718);
  std::vector<IntervalSet> samples;
  for (int i = 0; i < 100; ++i) samples.push_back(random_interval_set(rng));
  const IntervalModel m;
  const auto v = class_violations(m, BalfiClass::RCie, samples, [](const IntervalSet& x) { return x.to_string(); });
  EXPECT_TRUE(v.empty()) << (v.empty() ? "" : v[0].equation + " at " + v[0].witness);
  const auto rays = interval_table_report(-3, 3, {});
  std::vector<IntervalSet> xs;
  for (const auto& r : rays) xs.push_back(r.x);
  EXPECT_TRUE(class_violations(m, BalfiClass::RCie, xs, [](const IntervalSet& x) { return x.to_string(); }).empty());
}

TEST(IntervalSetLaws, AgainstMembership) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 500; ++i) {
    const IntervalSet a = random_interval_set(rng), b = random_interval_set(rng);
    for (std::int64_t z : probes()) {
      ASSERT_EQ((~a).contains(z), !a.contains(z));
      ASSERT_EQ((a | b).contains(z), a.contains(z) || b.contains(z));
      ASSERT_EQ((a & b).contains(z), a.contains(z) && b.contains(z));
    }
    bool same = true;
    for (std::int64_t z : probes()) same = same && a.contains(z) == b.contains(z);
    ASSERT_EQ(a == b, same);
    ASSERT_EQ(~~a, a);
    const auto& parts = a.intervals();
    for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
      ASSERT_TRUE(parts[k].hi && parts[k + 1].lo);
      ASSERT_LT(*parts[k].hi + 1, *parts[k + 1].lo);
    }
  }
}

TEST(IntervalSetLaws, Printing) {
  EXPECT_EQ((ray_down(0) | IntervalSet::range(5, 9)).to_string(), "(-inf,0] ∪ [5,9]");
  EXPECT_EQ(IntervalSet::all().to_string(), "ℤ");
  EXPECT_EQ(IntervalSet::empty().to_string(), "∅");
  EXPECT_EQ((IntervalSet::range(1, 3) | IntervalSet::range(4, 6)), IntervalSet::range(1, 6));
}
