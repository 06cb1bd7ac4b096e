#pragma once

#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coarsecancel/action.hpp"
#include "coarsecancel/amalgam.hpp"
#include "coarsecancel/coneoff.hpp"
#include "coarsecancel/group_table.hpp"
#include "coarsecancel/invariants.hpp"
#include "coarsecancel/metric_space.hpp"
#include "coarsecancel/smallcancel.hpp"

namespace ccl {

using Json = nlohmann::ordered_json;

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open " + path);
  return Json::parse(in);  // parse errors carry the byte position
}

inline void save_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw error("cannot write " + path);
  out << j.dump(2) << "\n";
}

// ---- graphs ----

inline GraphSpec graph_from_json(const Json& j) {
  GraphSpec spec;
  for (auto& v : j.at("vertices")) spec.vertices.push_back(v.get<std::string>());
  for (auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3) throw error("graph edge must be [u, v, length]");
    spec.edges.push_back({e[0].get<std::string>(), e[1].get<std::string>(), e[2].get<double>()});
  }
  return spec;
}

inline Json graph_to_json(const GraphSpec& spec) {
  Json j;
  j["vertices"] = spec.vertices;
  Json edges = Json::array();
  for (auto& [u, v, w] : spec.edges) edges.push_back(Json::array({u, v, w}));
  j["edges"] = edges;
  return j;
}

inline Json hyperbolicity_to_json(const HyperbolicityReport& rep) {
  Json j;
  j["delta"] = rep.delta;
  if (rep.has_witness)
    j["witness"] = std::vector<std::string>(rep.witness.begin(), rep.witness.end());
  else
    j["witness"] = Json::array();
  return j;
}

// ---- groups ----

inline GroupTable group_from_json(const Json& j) {
  if (j.is_string()) {
    // shorthand: "Z/5", "S3", "trivial"
    std::string s = j.get<std::string>();
    if (s == "trivial") return GroupTable::trivial();
    if (s.rfind("Z/", 0) == 0) return GroupTable::cyclic(std::stoi(s.substr(2)));
    if (s.rfind("S", 0) == 0) return GroupTable::symmetric(std::stoi(s.substr(1)));
    throw error("unknown group shorthand: " + s);
  }
  std::vector<std::string> ids;
  for (auto& v : j.at("elements")) ids.push_back(v.get<std::string>());
  std::vector<std::vector<int>> rows;
  for (auto& r : j.at("mult")) rows.push_back(r.get<std::vector<int>>());
  return GroupTable::from_table(std::move(ids), std::move(rows));
}

inline Json group_to_json(const GroupTable& g) {
  Json j;
  j["elements"] = g.elements();
  Json rows = Json::array();
  for (int a = 0; a < g.size(); ++a) {
    Json row = Json::array();
    for (int b = 0; b < g.size(); ++b) row.push_back(g.op(a, b));
    rows.push_back(row);
  }
  j["mult"] = rows;
  j["identity"] = g.identity();
  return j;
}

inline std::shared_ptr<const AmalgamData> amalgam_from_json(const Json& j) {
  GroupTable A = group_from_json(j.at("A"));
  GroupTable B = group_from_json(j.at("B"));
  GroupTable C = group_from_json(j.at("C"));
  auto embed = [&](const Json& arr, const GroupTable& fac) {
    Embedding e;
    for (auto& v : arr) e.img.push_back(fac.index(v.get<std::string>()));
    return e;
  };
  Embedding ca = embed(j.at("C_in_A"), A);
  Embedding cb = embed(j.at("C_in_B"), B);
  std::optional<std::string> ga, gb;
  if (j.contains("gen_a")) ga = j.at("gen_a").get<std::string>();
  if (j.contains("gen_b")) gb = j.at("gen_b").get<std::string>();
  return std::make_shared<AmalgamData>(std::move(A), std::move(B), std::move(C), std::move(ca),
                                       std::move(cb), ga, gb);
}

// ---- action windows ----

inline std::shared_ptr<ActionWindow> window_from_json(const Json& j) {
  FiniteMetricSpace X = build_space(graph_from_json(j.at("space")));
  std::vector<PartialIsometry> gens;
  for (auto& gj : j.at("generators")) {
    PartialIsometry g;
    g.name = gj.at("name").get<std::string>();
    g.map.assign(static_cast<std::size_t>(X.size()), -1);
    for (auto& [from, to] : gj.at("map").items())
      g.map[static_cast<std::size_t>(X.index(from))] = X.index(to.get<std::string>());
    gens.push_back(std::move(g));
  }
  int cap = j.value("max_word_length", 4);
  bool tree = j.value("tree_window", false);
  return std::make_shared<ActionWindow>(std::move(X), std::move(gens), cap, tree);
}

inline Json window_to_json(const ActionWindow& W, const GraphSpec& graph) {
  Json j;
  j["space"] = graph_to_json(graph);
  Json gens = Json::array();
  for (int gi = 0; gi < W.generator_count(); ++gi) {
    const PartialIsometry& g = W.generator(gi);
    Json gj;
    gj["name"] = g.name;
    Json map = Json::object();
    for (int x = 0; x < W.space().size(); ++x)
      if (g.defined(x)) map[W.space().id(x)] = W.space().id(g(x));
    gj["map"] = map;
    gens.push_back(gj);
  }
  j["generators"] = gens;
  j["max_word_length"] = W.max_word_length();
  j["tree_window"] = W.tree_window();
  return j;
}

// ---- constants and ledgers ----

inline Constants constants_from_json(const Json& j) {
  std::string mode = j.value("mode", "toy");
  if (mode == "canonical")
    return Constants::canonical(j.value("bold_delta", kBoldDeltaDefault), j.value("L_S", 500.0));
  if (mode != "toy") throw error("constants mode must be canonical or toy");
  double bold = j.value("bold_delta", 1.0);
  return Constants::toy_mode(bold, j.value("L_S", 500.0), j.at("delta0").get<double>(),
                             j.at("Delta0").get<double>(), j.at("rho0").get<double>(),
                             j.value("delta1", 64e4 * bold));
}

inline Json constants_to_json(const Constants& c) {
  Json j;
  j["mode"] = c.mode();
  j["bold_delta"] = c.bold_delta;
  j["L_S"] = c.L_S;
  j["delta0"] = c.delta0;
  j["Delta0"] = c.Delta0;
  j["rho0"] = c.rho0;
  j["delta1"] = c.delta1;
  if (c.toy) j["non_canonical"] = true;
  return j;
}

inline Json quantity_to_json(LogValue v) {
  Json j;
  j["log"] = v.lg;
  if (v.is_zero())
    j["value"] = 0.0;
  else if (v.representable())
    j["value"] = v.linear();
  else
    j["value"] = nullptr;
  return j;
}

inline LogValue quantity_from_json(const Json& j) {
  if (j.is_number()) return LogValue::from_linear(j.get<double>());
  if (j.contains("log")) return LogValue::from_log(j.at("log").get<double>());
  return LogValue::from_linear(j.at("value").get<double>());
}

inline InvariantLedger ledger_from_json(const Json& j) {
  InvariantLedger l;
  l.delta = j.at("delta").get<double>();
  l.rinj = quantity_from_json(j.at("rinj"));
  l.e = j.at("e").get<std::int64_t>();
  l.nu = j.at("nu").get<int>();
  l.A = quantity_from_json(j.at("A"));
  l.no_involution = j.value("no_involution", true);
  auto bound = [&](const char* key, Bound dflt) {
    if (!j.contains(key)) return dflt;
    std::string s = j.at(key).get<std::string>();
    if (s == "exact") return Bound::Exact;
    if (s == "lower") return Bound::Lower;
    if (s == "upper") return Bound::Upper;
    throw error("bad bound flag: " + s);
  };
  l.rinj_bound = bound("rinj_bound", Bound::Lower);
  l.e_bound = bound("e_bound", Bound::Exact);
  l.nu_bound = bound("nu_bound", Bound::Upper);
  l.A_bound = bound("A_bound", Bound::Upper);
  if (j.contains("provenance"))
    for (auto& p : j.at("provenance")) l.provenance.push_back(p.get<std::string>());
  return l;
}

inline Json ledger_to_json(const InvariantLedger& l) {
  Json j;
  j["delta"] = l.delta;
  j["rinj"] = quantity_to_json(l.rinj);
  j["rinj_bound"] = to_string(l.rinj_bound);
  j["e"] = l.e;
  j["e_bound"] = to_string(l.e_bound);
  j["nu"] = l.nu;
  j["nu_bound"] = to_string(l.nu_bound);
  j["A"] = quantity_to_json(l.A);
  j["A_bound"] = to_string(l.A_bound);
  j["no_involution"] = l.no_involution;
  j["provenance"] = l.provenance;
  return j;
}

inline Json certificate_to_json(const Certificate& c) {
  Json j;
  j["mode"] = c.mode;
  Json checks = Json::array();
  for (auto& ch : c.checks) {
    Json cj;
    cj["name"] = ch.name;
    cj["lhs"] = ch.lhs;
    cj["rhs"] = ch.rhs;
    cj["pass"] = ch.pass;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["overall"] = c.overall;
  j["conclusions"] = c.conclusions;
  return j;
}

inline Json induction_report_to_json(const InductionReport& r) {
  Json j;
  j["nu0"] = r.nu0;
  Json checks = Json::array();
  for (auto& ch : r.checks) {
    Json cj;
    cj["name"] = ch.name;
    cj["lhs"] = ch.lhs;
    cj["rhs"] = ch.rhs;
    cj["log_margin"] = ch.log_margin;
    cj["pass"] = ch.pass;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["overall"] = r.overall;
  j["conclusions"] = r.conclusions;
  return j;
}

inline Json acyl_table_to_json(const AcylindricityTable& t) {
  Json j;
  j["l"] = t.l;
  j["word_cap"] = t.word_cap;
  j["elements"] = t.elements;
  j["exact_elements"] = t.exact_elements;
  Json rows = Json::array();
  for (auto& r : t.rows) rows.push_back(Json::array({r.d, r.count}));
  j["rows"] = rows;
  return j;
}

inline AcylindricityTable acyl_table_from_json(const Json& j) {
  AcylindricityTable t;
  t.l = j.at("l").get<double>();
  t.word_cap = j.value("word_cap", 0);
  t.elements = j.value("elements", 0);
  t.exact_elements = j.value("exact_elements", false);
  for (auto& r : j.at("rows")) t.rows.push_back({r[0].get<double>(), r[1].get<int>()});
  return t;
}

}  // namespace ccl
