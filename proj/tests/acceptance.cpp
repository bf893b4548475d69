// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lfi/balfi.hpp"
#include "lfi/belief.hpp"
#include "lfi/bmod.hpp"
#include "lfi/hilbert.hpp"
#include "lfi/nmatrix.hpp"
#include "scenario_gen.hpp"
#include "support.hpp"

using namespace lfi;

namespace {

using Clock = std::chrono::steady_clock;
using TV = TruthValue;

struct Outcome {
  bool pass = true;
  std::string note;
  void fail(const std::string& why) {
    if (pass) note = why;
    pass = false;
  }
};

Formula f(const char* s) { return parse(s); }

const Binding kAtoms{{"alpha", f("p")}, {"beta", f("q")}, {"gamma", f("r")}};

Outcome axioms() {
  Outcome o;
  auto check = [&](const Nmatrix& m, const char* name, int k) {
    const auto t0 = Clock::now();
    const bool ok = is_theorem(m, substitute(axiom_schema(k), kAtoms)).valid;
    if (!ok) o.fail("Ax" + std::to_string(k) + " invalid in " + name);
    if (Clock::now() - t0 >= std::chrono::seconds(1)) o.fail("Ax" + std::to_string(k) + " slow in " + name);
  };
  for (int k = 1; k <= 14; ++k) check(Nmatrix::cbr(), "Cbr", k);
  for (int k = 1; k <= 15; ++k)
    if (k != 12) check(Nmatrix::cie(), "Cie", k);
  if (o.pass) o.note = "Ax1-14 in Cbr, Ax1-11 and Ax13-15 in Cie";
  return o;
}

Outcome separation() {
  Outcome o;
  const auto v = is_theorem(Nmatrix::cbr(), f("@@p"));
  if (v.valid || !v.countermodel) return o.fail("@@p valid in Cbr"), o;
  const auto& cm = *v.countermodel;
  if (cm.value_of(f("p")) != TV::One || cm.value_of(f("@p")) != TV::Half || cm.value_of(f("@@p")) != TV::Zero)
    o.fail("unexpected witness");
  if (!is_theorem(Nmatrix::cie(), f("@@p")).valid) o.fail("@@p invalid in Cie");
  if (o.pass) o.note = "witness p=1, @p=1/2, @@p=0; valid in Cie";
  return o;
}

Outcome cbr_equivalences() {
  Outcome o;
  const Nmatrix& m = Nmatrix::cbr();
  if (!equivalent(m, f("@p"), f("@!p")).valid) o.fail("@p <-> @!p");
  if (!equivalent(m, f("p"), f("!!p")).valid) o.fail("p <-> !!p");
  std::mt19937_64 rng(41);
  std::vector<Formula> pool;
  for (int i = 0; i < 60; ++i) pool.push_back(gen::random_formula(rng, 2));
  int pairs = 0;
  for (std::size_t i = 0; i < pool.size() && pairs < 50; ++i) {
    std::vector<Formula> partners{Formula::neg(Formula::neg(pool[i]))};
    for (std::size_t j = i + 1; j < pool.size(); ++j) partners.push_back(pool[j]);
    for (const Formula& b : partners) {
      const Formula& a = pool[i];
      if (pairs >= 50 || a == b || !equivalent(m, a, b).valid) continue;
      if (!equivalent(m, Formula::neg(a), Formula::neg(b)).valid) continue;
      ++pairs;
      if (!equivalent(m, Formula::circ(a), Formula::circ(b)).valid) o.fail(render(a) + " / " + render(b));
    }
  }
  if (pairs < 50) o.fail("only " + std::to_string(pairs) + " pairs");
  if (o.pass) o.note = "50 oracle-checked pairs";
  return o;
}

Outcome paraconsistency() {
  Outcome o;
  for (const Nmatrix* m : {&Nmatrix::cbr(), &Nmatrix::cie()})
    for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{{"p", "!p"}, {"p", "@p"}, {"@p", "!p"}}) {
      const auto v = holds(*m, {f(a), f(b)}, f("q"));
      if (v.valid || !v.countermodel) {
        o.fail(std::string("{") + a + ", " + b + "} entails q");
        continue;
      }
      const auto& cm = *v.countermodel;
      if (!designated(*cm.value_of(f(a))) || !designated(*cm.value_of(f(b))) || designated(*cm.value_of(f("q"))))
        o.fail("bad witness");
    }
  if (o.pass) o.note = "3 witnesses in each of Cbr, Cie";
  return o;
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

Outcome interval_model() {
  Outcome o;
  for (const auto& r : interval_table_report(-3, 3, default_consistent_samples()))
    if (!r.matches_expected) o.fail("row " + r.x.to_string());
  for (std::int64_t n = -3; n <= 3; ++n) {
    const auto r = interval_row(IntervalSet::at_most(n));
    const auto pt = IntervalSet::singleton(n);
    if (r.neg != IntervalSet::at_least(n) || r.clash != pt || r.circ != ~pt || r.neg_circ != pt)
      o.fail("ray at " + std::to_string(n));
  }
  const IntervalModel m;
  const auto certs = interval_certificates();
  if (certs.size() != 3) o.fail("expected 3 certificates");
  for (const auto& c : certs) {
    Formula prem = c.premises[0];
    for (std::size_t i = 1; i < c.premises.size(); ++i) prem = Formula::conj(prem, c.premises[i]);
    if (c.verdict.status != ModelStatus::Fails || evaluate(m, c.verdict.witness, Formula::imp(prem, c.goal)).is_all())
      o.fail("certificate for " + render(c.goal));
  }
  std::mt19937_64 rng(2718);
  std::vector<IntervalSet> samples;
  for (int i = 0; i < 100; ++i) samples.push_back(random_interval_set(rng));
  if (!class_violations(m, BalfiClass::RCie, samples, [](const IntervalSet& x) { return x.to_string(); }).empty())
    o.fail("RCie equation fails on a random set");
  if (o.pass) o.note = "table n=-3..3, 3 certificates, 100 random sets";
  return o;
}

Outcome finite_balfis() {
  Outcome o;
  std::string counts;
  for (int n = 1; n <= 4; ++n) {
    std::size_t count = 0;
    for_each_balfi(n, BalfiClass::RCbr, [&](const FiniteBalfi& b) {
      ++count;
      for (auto x : b.elements())
        if (b.neg(x) != b.complement(x)) o.fail("paraconsistent RCbr structure at size " + std::to_string(b.size()));
      if (!check_balfi(b).empty() || !lemma_violations(b).empty()) o.fail("lemma check at size " + std::to_string(b.size()));
      return true;
    });
    if (count == 0) o.fail("no structures at n=" + std::to_string(n));
    counts += (counts.empty() ? "" : ",") + std::to_string(count);
  }
  if (o.pass) o.note = "RCbr structures on 2,4,8,16 elements: " + counts + ", all classical";
  return o;
}

Outcome bmod_welldef() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto rep = verify_welldef(6);
  const auto secs = std::chrono::duration<double>(Clock::now() - t0).count();
  for (const auto& c : rep.checks)
    if (!c.pass) o.fail("check " + c.name);
  std::uint64_t largest = 1;
  for (const auto& [t, s] : rep.members)
    for (std::uint64_t p : s.primes()) largest = std::max(largest, p);
  if (largest != 17) o.fail("largest prime " + std::to_string(largest));
  if (secs >= 30) o.fail("took " + std::to_string(secs) + " s");
  if (o.pass) o.note = std::to_string(rep.members.size()) + " members, all well-definedness checks";
  return o;
}

Outcome bmod_countermodel() {
  Outcome o;
  const auto rep = countermodel_report();
  if (!rep.all_pass()) o.fail("report check failed");
  auto cls = [](std::int64_t r, std::uint64_t m) { return PeriodicSet::residue(r, m); };
  const PeriodicSet x = cls(1, 2), cx = hat_circ(x), ccx = hat_circ(cx), nx = hat_neg(x);
  if (cx != (cls(0, 2) | ~cls(0, 3))) o.fail("circ X");
  if (ccx != ((cls(1, 2) & cls(0, 3)) | ~cls(0, 5))) o.fail("circ circ X");
  if (!(x & cx).contains(25) || ccx.contains(25)) o.fail("25 mod 30");
  if (!(nx & cx).contains(0) || ccx.contains(0)) o.fail("0 mod 10");
  if (rep.witnesses.size() != 2 || rep.witnesses[0].solution.residue != 25 || rep.witnesses[0].solution.modulus != 30 ||
      rep.witnesses[1].solution.residue != 0 || rep.witnesses[1].solution.modulus != 10)
    o.fail("CRT witnesses");
  for (const char* s : {"@@p", "@p -> @@p", "p & @p -> @@p", "!p & @p -> @@p"})
    if (evaluate(BmodAlgebra{}, {{"p", x}}, f(s)).is_all()) o.fail(std::string(s) + " evaluates to Z");
  if (rep.schemas.size() != 4) o.fail("expected 4 schemas");
  if (o.pass) o.note = "equalities exact, 25 mod 30 and 0 mod 10, 4 schemas refuted";
  return o;
}

Outcome hilbert_crosscheck() {
  Outcome o;
  const std::vector<std::pair<LogicId, const char*>> goals = {
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
  };
  int proved = 0;
  for (auto [l, text] : goals) {
    const auto proof = bounded_prove(l, f(text));
    if (!proof) {
      o.fail(std::string("no proof of ") + text);
      continue;
    }
    const Nmatrix& m = l == LogicId::Cie ? Nmatrix::cie() : Nmatrix::cbr();
    if (check_proof(l, {}, *proof) || !is_theorem(m, proof->conclusion()).valid || proof->conclusion() != f(text))
      o.fail(std::string("bad proof of ") + text);
    else
      ++proved;
  }
  if (proved < 20) o.fail("only " + std::to_string(proved) + " theorems");
  if (o.pass) o.note = std::to_string(proved) + " theorems proved, checked and Nmatrix-valid";
  return o;
}

Outcome belief_suite() {
  Outcome o;
  std::mt19937_64 rng(20240917);
  int scenarios = 0;
  std::size_t checks = 0;
  while (scenarios < 200) {
    auto c = gen::generate_case(rng);
    if (!c) return o.fail("generator starved"), o;
    const BeliefState& s = *c->state;
    if (s.size() > 40 || s.query().size() > 6) o.fail("scenario out of bounds");
    const auto r = check_postulates(s, c->entrenchment);
    for (const auto& res : r.results) {
      checks += res.checked;
      if (!res.pass) o.fail(res.name + ": " + (res.witnesses.empty() ? "" : res.witnesses[0]));
    }
    ++scenarios;
  }
  if (o.pass) o.note = std::to_string(scenarios) + " scenarios, " + std::to_string(checks) + " checks, 0 violations";
  return o;
}

Outcome narrative() {
  Outcome o;
  BeliefScenario sc;
  sc.base = {f("@p"), f("p")};
  sc.query = {f("p"), f("@p")};
  const BeliefState s(complete_universe(sc));
  const RankBuild b = build_rank_entrenchment(s, std::vector<long long>(s.size(), 0));
  if (!b.entrenchment) return o.fail("no entrenchment"), o;

  if (!s.unrevocable(f("p")) || contract(s, *b.entrenchment, f("p")) != s.belief_set()) o.fail("stage 1: p contracted");
  const auto out = contract(s, *b.entrenchment, f("@p"));
  if (s.unrevocable(f("@p")) || out.test(*s.index_of(f("@p")))) o.fail("stage 2: @p kept");

  BeliefScenario next = s.scenario();
  next.base = s.formulas(out);
  const BeliefState t(next);
  if (!t.in_K(f("p")) || is_unrevocable(t, f("p"))) o.fail("stage 3: p still unrevocable");
  const RankBuild tb = build_rank_entrenchment(t, std::vector<long long>(t.size(), 0));
  if (!tb.entrenchment || contract(t, *tb.entrenchment, f("p")).test(*t.index_of(f("p"))))
    o.fail("stage 3: p not removable");
  if (o.pass) o.note = "K/p = K, K/@p drops @p, then p revocable and removed";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"axiom validity", axioms},
      {"separation of Cbr and Cie", separation},
      {"Cbr circ equivalences", cbr_equivalences},
      {"paraconsistency triple", paraconsistency},
      {"interval model", interval_model},
      {"finite RCbr structures are classical", finite_balfis},
      {"periodic-set model well-defined at k_max=6", bmod_welldef},
      {"periodic-set countermodel", bmod_countermodel},
      {"Hilbert cross-check", hilbert_crosscheck},
      {"contraction postulates and round trip", belief_suite},
      {"unrevocability narrative", narrative},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.note.c_str());
  }
  return failed ? 1 : 0;
}
