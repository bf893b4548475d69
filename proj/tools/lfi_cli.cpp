#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lfi/json_io.hpp"

namespace {

using lfi::json::Json;
using lfi::json::to_json;

// Exit codes: affirmative, negative (countermodel, violation, unknown), usage or resource.
constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

lfi::LogicId logic_of(const std::string& s, bool allow_replacement) {
  if (s == "cbr") return lfi::LogicId::Cbr;
  if (s == "cie") return lfi::LogicId::Cie;
  if (allow_replacement && s == "rcbr") return lfi::LogicId::RCbr;
  if (allow_replacement && s == "rcie") return lfi::LogicId::RCie;
  throw UsageError("unknown logic: " + s);
}

lfi::BalfiClass class_of(const std::string& s) {
  if (s == "rmbc") return lfi::BalfiClass::RmbC;
  if (s == "rmbcciw") return lfi::BalfiClass::RmbCciw;
  if (s == "rcbr") return lfi::BalfiClass::RCbr;
  if (s == "rcie") return lfi::BalfiClass::RCie;
  throw UsageError("unknown class: " + s);
}

std::vector<lfi::Formula> parse_all(const std::vector<std::string>& texts) {
  std::vector<lfi::Formula> out;
  for (const auto& t : texts) out.push_back(lfi::parse(t));
  return out;
}

int emit(const Json& j, int code) {
  std::cout << j.dump(2) << "\n";
  return code;
}

struct Options {
  std::string logic = "cbr";
  std::vector<std::string> premises;
  std::string goal;
  std::size_t budget = 0;
  std::string scenario;
  std::string alpha;
  int kmax = 4;
  int max_atoms = 2;
  std::string cls = "rcbr";
  std::string proof_file;
  long long n_min = -3, n_max = 3;
  bool complete = false;
};

int decide(const Options& o) {
  const auto logic = logic_of(o.logic, false);
  const auto& m = logic == lfi::LogicId::Cbr ? lfi::Nmatrix::cbr() : lfi::Nmatrix::cie();
  lfi::Limits limits;
  if (o.budget) limits.max_subformulas = o.budget;
  const auto v = lfi::holds(m, parse_all(o.premises), lfi::parse(o.goal), limits);
  std::cerr << (v.valid ? "valid" : "countermodel found") << " in " << lfi::to_string(logic) << "\n";
  return emit(to_json(v), v.valid ? kYes : kNo);
}

int prove(const Options& o) {
  const auto logic = logic_of(o.logic, true);
  const auto premises = parse_all(o.premises);
  if (!o.proof_file.empty()) {
    std::ifstream in(o.proof_file);
    if (!in) throw UsageError("cannot open " + o.proof_file);
    std::stringstream text;
    text << in.rdbuf();
    const lfi::Proof proof = lfi::parse_proof(text.str());
    if (auto err = lfi::check_proof(logic, premises, proof)) {
      std::cerr << "rejected at line " << err->line + 1 << ": " << err->reason << "\n";
      return emit({{"accepted", false}, {"line", err->line + 1}, {"reason", err->reason}}, kNo);
    }
    Json j{{"accepted", true}, {"conclusion", proof.lines.empty() ? "" : lfi::render(proof.conclusion())}};
    if (!o.goal.empty()) {
      const bool matches = !proof.lines.empty() && proof.conclusion() == lfi::parse(o.goal);
      j["goal_matches"] = matches;
      std::cerr << (matches ? "accepted" : "accepted, but the conclusion is not the goal") << "\n";
      return emit(j, matches ? kYes : kNo);
    }
    std::cerr << "accepted\n";
    return emit(j, kYes);
  }
  if (o.goal.empty()) throw UsageError("prove needs --goal or --proof");
  lfi::ProofBudget budget;
  if (o.budget) budget.max_lines = o.budget;
  const auto d = lfi::rl_derives(logic, premises, lfi::parse(o.goal), budget);
  if (!d) {
    std::cerr << "no derivation within " << budget.max_lines << " lines (not a refutation)\n";
    return emit({{"proved", false}, {"status", "unknown"}, {"max_lines", budget.max_lines}}, kNo);
  }
  std::cerr << "derived in " << d->proof.lines.size() << " lines\n";
  std::vector<lfi::Formula> used;
  for (std::size_t i : d->premises_used) used.push_back(premises[i]);
  return emit({{"proved", true}, {"premises_used", lfi::json::formulas_json(used)}, {"proof", to_json(d->proof)}}, kYes);
}

int refute(const Options& o) {
  const auto cls = class_of(o.cls);
  const auto r = lfi::refute(cls, o.max_atoms, lfi::parse(o.goal));
  if (!r) {
    std::cerr << "no refuting structure with at most " << o.max_atoms << " atoms (not a validity proof)\n";
    return emit({{"refuted", false}, {"status", "unknown"}, {"max_atoms", o.max_atoms}}, kNo);
  }
  Json assignment = Json::object();
  for (const auto& [name, x] : r->assignment) assignment[name] = r->algebra.show(x);
  std::cerr << "refuted in a " << r->algebra.size() << "-element " << lfi::to_string(cls) << " structure\n";
  return emit({{"refuted", true}, {"algebra", to_json(r->algebra)}, {"assignment", assignment}}, kYes);
}

int bmod_verify(const Options& o) {
  if (o.kmax < 2 || o.kmax > 8) throw UsageError("--kmax must be between 2 and 8");
  const auto w = lfi::verify_welldef(o.kmax);
  const auto c = lfi::countermodel_report();
  const bool ok = w.all_pass() && c.all_pass();
  std::cerr << "well-definedness " << (w.all_pass() ? "pass" : "FAIL") << ", countermodel "
            << (c.all_pass() ? "pass" : "FAIL") << "\n";
  return emit({{"welldef", to_json(w)}, {"countermodel", to_json(c)}, {"pass", ok}}, ok ? kYes : kNo);
}

int interval_table(const Options& o) {
  if (o.n_min > o.n_max) throw UsageError("--nmin exceeds --nmax");
  Json rows = Json::array();
  bool ok = true;
  for (const auto& r : lfi::interval_table_report(o.n_min, o.n_max, lfi::default_consistent_samples())) {
    ok = ok && r.matches_expected;
    rows.push_back(to_json(r));
  }
  Json certs = Json::array();
  for (const auto& c : lfi::interval_certificates()) {
    Json witness = Json::object();
    for (const auto& [name, x] : c.verdict.witness) witness[name] = x.to_string();
    const bool fails = c.verdict.status == lfi::ModelStatus::Fails;
    ok = ok && fails;
    certs.push_back({{"premises", lfi::json::formulas_json(c.premises)},
                     {"goal", lfi::render(c.goal)},
                     {"refuted", fails},
                     {"witness", witness},
                     {"value", c.verdict.value ? c.verdict.value->to_string() : ""}});
  }
  std::cerr << (ok ? "table and certificates as expected" : "unexpected interval row or certificate") << "\n";
  return emit({{"rows", rows}, {"certificates", certs}, {"pass", ok}}, ok ? kYes : kNo);
}

struct LoadedState {
  std::unique_ptr<lfi::BeliefState> state;
  lfi::json::LoadedScenario file;
};

LoadedState load_state(const Options& o) {
  if (o.scenario.empty()) throw UsageError("--scenario is required");
  LoadedState out;
  out.file = lfi::json::load_scenario_file(o.scenario);
  lfi::BeliefScenario s = out.file.scenario;
  if (o.complete) s = lfi::complete_universe(std::move(s), 200);
  out.state = std::make_unique<lfi::BeliefState>(std::move(s));
  return out;
}

// The scenario's entrenchment, validated; on failure prints the report and sets code.
std::optional<lfi::ValidEntrenchment> load_entrenchment(const LoadedState& ls, Json& out) {
  const auto& s = *ls.state;
  if (ls.file.ranks) {
    auto b = lfi::build_rank_entrenchment(s, lfi::json::rank_vector(s, *ls.file.ranks));
    out["entrenchment"] = to_json(b.report);
    return std::move(b.entrenchment);
  }
  if (ls.file.pairs) {
    const auto e = lfi::json::pair_relation(s, *ls.file.pairs);
    const auto report = lfi::check_entrenchment(s, e);
    out["entrenchment"] = to_json(report);
    if (!report.ok()) return std::nullopt;
    return lfi::ValidEntrenchment::validate(s, e);
  }
  throw lfi::ScenarioError("scenario has no entrenchment");
}

Json scenario_header(const lfi::BeliefState& s) {
  return {{"oracle", lfi::oracle_note(s.logic())},
          {"universe_size", s.size()},
          {"worlds", s.world_count()},
          {"belief_set", lfi::json::formulas_json(s.formulas(s.belief_set()))},
          {"bottom", s.is_bottom()}};
}

int contract(const Options& o) {
  if (o.alpha.empty()) throw UsageError("--alpha is required");
  const auto ls = load_state(o);
  const auto& s = *ls.state;
  Json out = scenario_header(s);
  const auto ve = load_entrenchment(ls, out);
  if (!ve) {
    std::cerr << "entrenchment rejected\n";
    return emit(out, kNo);
  }
  const auto a = lfi::parse(o.alpha);
  const auto result = lfi::contract(s, *ve, a);
  out["alpha"] = lfi::render(a);
  out["unrevocable"] = s.unrevocable(a);
  out["result"] = lfi::json::formulas_json(s.formulas(result));
  out["removed"] = lfi::json::formulas_json(s.formulas(s.belief_set() - result));
  std::cerr << "contracted by " << lfi::render(a) << ": " << (s.belief_set() - result).count() << " removed\n";
  return emit(out, kYes);
}

int check_postulates(const Options& o) {
  const auto ls = load_state(o);
  const auto& s = *ls.state;
  Json out = scenario_header(s);
  const auto ve = load_entrenchment(ls, out);
  if (!ve) {
    std::cerr << "entrenchment rejected\n";
    return emit(out, kNo);
  }
  const auto report = lfi::check_postulates(s, *ve);
  out["postulates"] = to_json(report);
  std::cerr << (report.all_pass() ? "all postulates hold" : "postulate violation") << "\n";
  return emit(out, report.all_pass() ? kYes : kNo);
}

int attitudes(const Options& o) {
  if (o.alpha.empty()) throw UsageError("--alpha is required");
  const auto ls = load_state(o);
  const auto& s = *ls.state;
  const auto a = lfi::parse(o.alpha);
  const auto att = lfi::attitudes(s, a);
  Json out = scenario_header(s);
  out["alpha"] = lfi::render(a);
  out["attitudes"] = to_json(att);
  out["unrevocable"] = lfi::is_unrevocable(s, a);
  std::cerr << lfi::render(a) << (att.accepted ? " accepted" : " not accepted") << "\n";
  return emit(out, kYes);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision, proof and belief-change tools for the LFIs Cbr and Cie"};
  app.require_subcommand(1);
  Options o;

  auto logic_opt = [&](CLI::App* c, bool replacement) {
    c->add_option("--logic", o.logic, replacement ? "cbr, cie, rcbr or rcie" : "cbr or cie")->capture_default_str();
  };
  auto* dec = app.add_subcommand("decide", "Nmatrix consequence check");
  logic_opt(dec, false);
  dec->add_option("--premise", o.premises, "premise formula (repeatable)");
  dec->add_option("--goal", o.goal, "conclusion")->required();
  dec->add_option("--budget", o.budget, "maximum number of distinct subformulas");

  auto* pr = app.add_subcommand("prove", "bounded Hilbert proof search, or check a proof file");
  logic_opt(pr, true);
  pr->add_option("--premise", o.premises, "premise formula (repeatable)");
  pr->add_option("--goal", o.goal, "formula to derive");
  pr->add_option("--budget", o.budget, "maximum proof lines");
  pr->add_option("--proof", o.proof_file, "proof file to check instead of searching");

  auto* rf = app.add_subcommand("refute", "search finite BALFIs for a countermodel");
  rf->add_option("--class", o.cls, "rmbc, rmbcciw, rcbr or rcie")->capture_default_str();
  rf->add_option("--goal", o.goal, "formula to refute")->required();
  rf->add_option("--max-atoms", o.max_atoms, "largest carrier, as atoms of the Boolean algebra")
      ->capture_default_str()
      ->check(CLI::Range(1, 4));

  auto* bm = app.add_subcommand("bmod-verify", "verify the periodic-set countermodel");
  bm->add_option("--kmax", o.kmax, "largest template index")->capture_default_str();

  auto* it = app.add_subcommand("interval-table", "tabulate the interval model");
  it->add_option("--nmin", o.n_min)->capture_default_str();
  it->add_option("--nmax", o.n_max)->capture_default_str();

  for (auto [name, help] : std::vector<std::pair<const char*, const char*>>{
           {"contract", "contract a scenario's belief set"},
           {"check-postulates", "verify the contraction postulates on a scenario"},
           {"attitudes", "epistemic attitudes towards a formula"}}) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("--scenario", o.scenario, "scenario JSON file")->required();
    c->add_flag("--complete-universe", o.complete, "close the universe under the disjunctions contraction needs");
    if (std::string(name) != "check-postulates") c->add_option("--alpha", o.alpha, "formula")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "decide") return decide(o);
    if (cmd == "prove") return prove(o);
    if (cmd == "refute") return refute(o);
    if (cmd == "bmod-verify") return bmod_verify(o);
    if (cmd == "interval-table") return interval_table(o);
    if (cmd == "contract") return contract(o);
    if (cmd == "check-postulates") return check_postulates(o);
    return attitudes(o);
  } catch (const lfi::ParseError& e) {
    std::cerr << "formula error: " << e.what() << "\n";
  } catch (const lfi::ProofFormatError& e) {
    std::cerr << "proof file error: " << e.what() << "\n";
  } catch (const lfi::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
  } catch (const lfi::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kUsage;
}
