#pragma once

// JSON forms for the file-facing types. Kept out of the core headers so the
// library proper stays dependency-light.

#include <json.hpp>

#include "forcelab/forcing.hpp"
#include "forcelab/forcingrel.hpp"
#include "forcelab/logic.hpp"
#include "forcelab/modeltools.hpp"
#include "forcelab/names.hpp"

namespace forcelab {

using nlohmann::json;

// Structures: {"nodes": [...], "edges": [[member, container], ...],
//              "labels": {"id": "{{},...}"}}
inline json structure_to_json(const Structure& s) {
  json j;
  j["nodes"] = s.nodes;
  j["edges"] = json::array();
  for (const auto& [c, p] : s.edges) j["edges"].push_back({c, p});
  json labels = json::object();
  for (const auto& [id, v] : s.labels) labels[id] = v.to_string();
  j["labels"] = labels;
  return j;
}

inline Structure structure_from_json(const json& j) {
  Structure s;
  for (const auto& n : j.at("nodes")) s.nodes.push_back(n.get<std::string>());
  if (j.contains("edges"))
    for (const auto& e : j.at("edges")) s.edges.insert({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
  if (j.contains("labels"))
    for (auto it = j.at("labels").begin(); it != j.at("labels").end(); ++it)
      s.labels.emplace(it.key(), HFSet::parse(it.value().get<std::string>()));
  s.validate();
  return s;
}

inline json digraph_to_json(const MembershipDigraph& g) {
  json j;
  j["nodes"] = g.nodes;
  j["edges"] = json::array();
  for (const auto& [c, p] : g.edges) j["edges"].push_back({c, p});
  return j;
}

inline MembershipDigraph digraph_from_json(const json& j) {
  MembershipDigraph g;
  for (const auto& n : j.at("nodes")) g.nodes.push_back(n.get<std::string>());
  if (j.contains("edges"))
    for (const auto& e : j.at("edges")) g.edges.insert({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
  g.validate();
  return g;
}

// Conditions: {"cells": [[row, col, value], ...]}
inline json condition_to_json(const Condition& c) {
  json cells = json::array();
  for (const auto& [cell, v] : c.cells()) cells.push_back({cell.row, cell.col, v});
  return json{{"cells", cells}};
}

inline Condition condition_from_json(const json& j) {
  Condition c;
  for (const auto& cell : j.at("cells"))
    c.set(Cell{cell.at(0).get<std::uint32_t>(), cell.at(1).get<std::uint32_t>()},
          cell.at(2).get<std::uint32_t>());
  return c;
}

// Posets: {"kind":"grid","rows":R,"cols":C|"omega"}
//         {"kind":"collapse","from":A,"to":B}
//         {"kind":"explicit","size":N,"le":[[i,j],...]}
inline json poset_to_json(const Poset& p) {
  switch (p.kind()) {
    case PosetKind::FiniteGrid:
      return json{{"kind", "grid"}, {"rows", p.rows()}, {"cols", p.cols()}};
    case PosetKind::InfiniteGrid:
      return json{{"kind", "grid"}, {"rows", p.rows()}, {"cols", "omega"}};
    case PosetKind::Collapse:
      return json{{"kind", "collapse"}, {"from", p.rows()}, {"to", p.cols()}};
    case PosetKind::Explicit: {
      json le = json::array();
      auto all = p.all_conditions();
      for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j2 = 0; j2 < all.size(); ++j2)
          if (i != j2 && p.leq(all[i], all[j2])) le.push_back({i, j2});
      return json{{"kind", "explicit"}, {"size", all.size()}, {"le", le}};
    }
  }
  throw Error("poset_to_json: unreachable");
}

inline Poset poset_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "grid") {
    std::uint32_t rows = j.at("rows").get<std::uint32_t>();
    if (j.at("cols").is_string()) {
      if (j.at("cols").get<std::string>() != "omega") throw Error("poset: cols must be a number or \"omega\"");
      return Poset::infinite_grid(rows);
    }
    return Poset::finite_grid(rows, j.at("cols").get<std::uint32_t>());
  }
  if (kind == "collapse")
    return Poset::collapse(j.at("from").get<std::uint32_t>(), j.at("to").get<std::uint32_t>());
  if (kind == "explicit") {
    std::set<std::pair<std::size_t, std::size_t>> le;
    for (const auto& e : j.at("le")) le.insert({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
    return Poset::explicit_order(j.at("size").get<std::size_t>(), le);
  }
  throw Error("poset: unknown kind '" + kind + "'");
}

// Name files: a shared table of conditions and names.
//   {"conditions": {"p": {...}}, "names": {"tau": [["sigma","p"], ...]}}
struct NameTable {
  std::map<std::string, Condition> conditions;
  std::map<std::string, PName> names;
};

inline NameTable name_table_from_json(const json& j) {
  NameTable t;
  for (auto it = j.at("conditions").begin(); it != j.at("conditions").end(); ++it)
    t.conditions.emplace(it.key(), condition_from_json(it.value()));
  // resolve names with repeated passes so references may appear in any order
  const json& names = j.at("names");
  std::size_t remaining = names.size();
  while (remaining > 0) {
    std::size_t before = remaining;
    for (auto it = names.begin(); it != names.end(); ++it) {
      if (t.names.count(it.key())) continue;
      bool ready = true;
      std::vector<PName::Pair> pairs;
      for (const auto& pr : it.value()) {
        std::string nref = pr.at(0).get<std::string>();
        std::string cref = pr.at(1).get<std::string>();
        auto n = t.names.find(nref);
        auto c = t.conditions.find(cref);
        if (c == t.conditions.end()) throw Error("name table: unknown condition '" + cref + "'");
        if (n == t.names.end()) {
          ready = false;
          break;
        }
        pairs.emplace_back(n->second, c->second);
      }
      if (ready) {
        t.names.emplace(it.key(), PName::make(std::move(pairs)));
        --remaining;
      }
    }
    if (remaining == before) throw Error("name table: cyclic or dangling name reference");
  }
  return t;
}

inline json ftf_report_to_json(const FtfReport& r) {
  json out;
  out["formulas"] = r.formulas;
  out["bindings"] = r.bindings;
  out["checks"] = r.checks;
  json vs = json::array();
  for (const auto& v : r.violations) {
    json binding = json::object();
    for (const auto& [var, idx] : v.binding) binding[var] = idx;
    vs.push_back(json{{"kind", v.kind},
                      {"p", condition_to_json(v.p)},
                      {"formula", v.formula},
                      {"binding", binding},
                      {"forces", v.symbolic},
                      {"oracle", v.semantic}});
  }
  out["violations"] = vs;
  return out;
}

}  // namespace forcelab
