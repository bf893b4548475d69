#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lfi/balfi.hpp"
#include "lfi/belief.hpp"
#include "lfi/bmod.hpp"
#include "lfi/hilbert.hpp"
#include "lfi/nmatrix.hpp"

namespace lfi::json {

using Json = nlohmann::ordered_json;

inline Json to_json(const Verdict& v) {
  if (v.valid) return {{"verdict", "valid"}};
  Json assignment = Json::object();
  for (std::size_t i = 0; i < v.countermodel->size(); ++i)
    assignment[render(v.countermodel->formula(i))] = to_string(v.countermodel->value(i));
  return {{"verdict", "countermodel"}, {"assignment", std::move(assignment)}};
}

inline Json to_json(const Proof& p) {
  Json lines = Json::array();
  std::istringstream in(format_proof(p));
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

inline Json to_json(const FiniteBalfi& b) {
  Json neg = Json::array(), circ = Json::array();
  for (auto x : b.elements()) {
    neg.push_back(b.show(b.neg(x)));
    circ.push_back(b.show(b.circ(x)));
  }
  Json elems = Json::array();
  for (auto x : b.elements()) elems.push_back(b.show(x));
  return {{"class", to_string(b.cls())}, {"atoms", b.atoms()}, {"elements", elems}, {"neg", neg}, {"circ", circ}};
}

inline Json to_json(const IntervalRow& r) {
  const char* kind = r.kind == IntervalRow::Kind::LowerRay   ? "lower_ray"
                     : r.kind == IntervalRow::Kind::UpperRay ? "upper_ray"
                                                             : "consistent";
  return {{"kind", kind},          {"x", r.x.to_string()},
          {"neg", r.neg.to_string()}, {"x_and_neg", r.clash.to_string()},
          {"circ", r.circ.to_string()}, {"neg_neg", r.neg_neg.to_string()},
          {"circ_neg", r.circ_neg.to_string()}, {"neg_circ", r.neg_circ.to_string()},
          {"matches_expected", r.matches_expected}};
}

inline Json to_json(const WellDefReport& r) {
  Json checks = Json::array();
  for (const CheckResult& c : r.checks)
    checks.push_back({{"check", c.name}, {"description", c.description}, {"pass", c.pass}, {"violations", c.violations}});
  return {{"k_max", r.k_max},
          {"members", r.members.size()},
          {"checks", std::move(checks)},
          {"overlap_witness", r.overlap_witness},
          {"clash_witness", r.clash_witness},
          {"pass", r.all_pass()}};
}

inline Json to_json(const CountermodelReport& r) {
  Json eqs = Json::array(), ws = Json::array(), schemas = Json::array();
  for (const auto& e : r.equalities)
    eqs.push_back({{"name", e.name}, {"computed", e.computed.to_string()}, {"holds", e.holds()}});
  for (const auto& w : r.witnesses)
    ws.push_back({{"name", w.name},
                  {"solution", to_string(w.solution)},
                  {"in_source", w.in_source},
                  {"outside_target", w.outside_target},
                  {"member_checked", w.member_checked}});
  for (const auto& s : r.schemas)
    schemas.push_back(
        {{"name", s.name}, {"formula", render(s.formula)}, {"value", s.value.to_string()}, {"refuted", s.refuted()}});
  return {{"equalities", eqs}, {"witnesses", ws}, {"schemas", schemas}, {"pass", r.all_pass()}};
}

inline Json to_json(const Attitudes& a) {
  return {{"accepted", a.accepted},
          {"rejected", a.rejected},
          {"indeterminate", a.indeterminate},
          {"overdetermined", a.overdetermined},
          {"consistent", a.consistent},
          {"strongly_accepted", a.strongly_accepted},
          {"strongly_rejected", a.strongly_rejected},
          {"bottom", a.bottom}};
}

inline Json to_json(const std::vector<EntrenchmentViolation>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) {
    Json tuple = Json::array();
    for (const Formula& f : v.tuple) tuple.push_back(render(f));
    out.push_back({{"rule", v.rule}, {"tuple", tuple}, {"detail", v.detail}});
  }
  return out;
}

inline Json to_json(const EntrenchmentReport& r) {
  return {{"ok", r.ok()},
          {"violation_counts", r.violation_counts},
          {"violations", to_json(r.violations)},
          {"diagnostic_counts", r.diagnostic_counts},
          {"diagnostics", to_json(r.diagnostics)}};
}

inline Json to_json(const PostulateReport& r) {
  Json results = Json::array();
  for (const auto& p : r.results)
    results.push_back({{"postulate", p.name}, {"pass", p.pass}, {"checked", p.checked}, {"witnesses", p.witnesses}});
  return {{"oracle", r.oracle}, {"pass", r.all_pass()}, {"results", results}};
}

inline Json formulas_json(const std::vector<Formula>& fs) {
  Json out = Json::array();
  for (const Formula& f : fs) out.push_back(render(f));
  return out;
}

// ------------------------------------------------------------- scenarios

struct LoadedScenario {
  BeliefScenario scenario;
  std::optional<std::map<Formula, long long>> ranks;
  std::optional<std::vector<std::pair<Formula, Formula>>> pairs;
};

inline Formula parse_field(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ScenarioError(where + ": expected a formula string");
  try {
    return parse(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ScenarioError(where + ": " + e.what());
  }
}

inline std::vector<Formula> parse_list(const Json& j, const std::string& key) {
  std::vector<Formula> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array()) throw ScenarioError("\"" + key + "\" must be an array");
  for (std::size_t i = 0; i < j[key].size(); ++i)
    out.push_back(parse_field(j[key][i], key + "[" + std::to_string(i) + "]"));
  return out;
}

inline LoadedScenario load_scenario(const Json& j) {
  if (!j.is_object()) throw ScenarioError("scenario must be a JSON object");
  LoadedScenario out;
  const std::string logic = j.value("logic", "cbr");
  if (logic == "cbr") out.scenario.logic = LogicId::Cbr;
  else if (logic == "cie") out.scenario.logic = LogicId::Cie;
  else throw ScenarioError("unknown logic \"" + logic + "\" (expected cbr or cie)");
  out.scenario.universe = parse_list(j, "universe");
  out.scenario.base = parse_list(j, "base");
  out.scenario.query = parse_list(j, "query");
  if (j.contains("entrenchment")) {
    const Json& e = j["entrenchment"];
    if (e.contains("ranks")) {
      if (!e["ranks"].is_object()) throw ScenarioError("\"ranks\" must map formulas to integers");
      std::map<Formula, long long> ranks;
      for (const auto& [k, v] : e["ranks"].items()) {
        if (!v.is_number_integer()) throw ScenarioError("rank of " + k + " must be an integer");
        ranks[parse_field(Json(k), "ranks")] = v.get<long long>();
      }
      out.ranks = std::move(ranks);
    } else if (e.contains("pairs")) {
      std::vector<std::pair<Formula, Formula>> pairs;
      for (const Json& p : e["pairs"]) {
        if (!p.is_array() || p.size() != 2) throw ScenarioError("each pair must be [lower, upper]");
        pairs.emplace_back(parse_field(p[0], "pairs"), parse_field(p[1], "pairs"));
      }
      out.pairs = std::move(pairs);
    } else {
      throw ScenarioError("\"entrenchment\" needs \"ranks\" or \"pairs\"");
    }
  }
  return out;
}

inline LoadedScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(path + ": " + e.what());
  }
  return load_scenario(j);
}

// Ranks default to 0 for universe members the file does not mention.
inline std::vector<long long> rank_vector(const BeliefState& s, const std::map<Formula, long long>& ranks) {
  std::vector<long long> out(s.size(), 0);
  for (const auto& [f, r] : ranks) {
    auto i = s.index_of(f);
    if (!i) throw ScenarioError("ranked formula " + render(f) + " is not in the universe");
    out[*i] = r;
  }
  return out;
}

inline Entrenchment pair_relation(const BeliefState& s, const std::vector<std::pair<Formula, Formula>>& pairs) {
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (const auto& [a, b] : pairs) {
    auto i = s.index_of(a), j = s.index_of(b);
    if (!i || !j) throw ScenarioError("pair (" + render(a) + ", " + render(b) + ") leaves the universe");
    idx.emplace_back(*i, *j);
  }
  return Entrenchment::from_pairs(s.size(), idx);
}

}  // namespace lfi::json
