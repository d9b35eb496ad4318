#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ern/builder.hpp"
#include "ern/errors.hpp"
#include "ern/ingest.hpp"
#include "ern/network.hpp"

namespace ern {

using Json = nlohmann::json;  // object keys stay sorted: deterministic dumps

namespace detail {

inline const Json& require(const Json& obj, const char* key, const char* ctx) {
  if (!obj.is_object())
    throw ValidationError(std::string(ctx) + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end())
    throw ValidationError(std::string(ctx) + ": missing field '" + key + "'");
  return *it;
}

inline std::string as_string(const Json& j, const char* what) {
  if (!j.is_string())
    throw ValidationError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

inline double as_number(const Json& j, const char* what) {
  if (!j.is_number())
    throw ValidationError(std::string(what) + " must be a number");
  return j.get<double>();
}

inline int as_int(const Json& j, const char* what) {
  if (!j.is_number_integer())
    throw ValidationError(std::string(what) + " must be an integer");
  return j.get<int>();
}

inline std::string opt_string(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  return as_string(*it, key);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Logic expressions: null | {"link": id} | {"and": [...]} | {"or": [...]}

inline Json logic_to_json(const LogicExpr& e) {
  switch (e.kind()) {
    case LogicExpr::Kind::Empty:
      return nullptr;
    case LogicExpr::Kind::Leaf:
      return Json{{"link", e.link_id()}};
    case LogicExpr::Kind::And:
    case LogicExpr::Kind::Or: {
      Json ops = Json::array();
      for (const LogicExpr& c : e.operands()) ops.push_back(logic_to_json(c));
      return Json{{e.kind() == LogicExpr::Kind::And ? "and" : "or",
                   std::move(ops)}};
    }
  }
  return nullptr;
}

inline LogicExpr logic_from_json(const Json& j) {
  if (j.is_null()) return {};
  if (!j.is_object() || j.size() != 1)
    throw ValidationError("logic expression must be null or a one-key object");
  const auto it = j.begin();
  const std::string& op = it.key();
  if (op == "link") return LogicExpr::leaf(detail::as_string(it.value(), "link"));
  if (op != "and" && op != "or")
    throw ValidationError("unknown logic operator '" + op + "'");
  if (!it.value().is_array())
    throw ValidationError("'" + op + "' operands must be an array");
  std::vector<LogicExpr> ops;
  for (const Json& c : it.value()) ops.push_back(logic_from_json(c));
  return op == "and" ? LogicExpr::all_of(std::move(ops))
                     : LogicExpr::any_of(std::move(ops));
}

// ---------------------------------------------------------------------------
// Network documents

inline Json network_to_json(const Network& net) {
  Json vertices = Json::object();
  for (const auto& [id, v] : net.vertices()) {
    vertices[id] = {
        {"node_id", v.node_id},
        {"function_value", v.function_value},
        {"risk_weight", v.risk_weight},
        {"vulnerability",
         {{"id", v.vulnerability.id},
          {"description", v.vulnerability.description},
          {"impact_category", v.vulnerability.impact_category},
          {"exploit_probability", v.vulnerability.exploit_probability}}},
    };
  }
  Json links = Json::object();
  for (const auto& [id, l] : net.links())
    links[id] = {{"parent", l.parent}, {"child", l.child}};
  Json logic = Json::object();
  for (const auto& [id, v] : net.vertices()) logic[id] = logic_to_json(net.logic(id));
  return Json{{"queue_capacity", net.queue_capacity()},
              {"vertices", std::move(vertices)},
              {"links", std::move(links)},
              {"logic", std::move(logic)}};
}

// Runtime queue contents are deliberately not part of the document; the
// loader recomputes risk weights and rejects stored values off by > 1e-9.
inline Network network_from_json(const Json& j) {
  const std::size_t capacity = static_cast<std::size_t>(detail::as_int(
      detail::require(j, "queue_capacity", "network"), "queue_capacity"));
  Network net(capacity);
  const Json& vertices = detail::require(j, "vertices", "network");
  if (!vertices.is_object())
    throw ValidationError("network: 'vertices' must be an object");
  for (auto it = vertices.begin(); it != vertices.end(); ++it) {
    const Json& jv = it.value();
    const Json& vuln = detail::require(jv, "vulnerability", it.key().c_str());
    Vulnerability v;
    v.id = detail::as_string(detail::require(vuln, "id", "vulnerability"), "vulnerability.id");
    v.description = detail::opt_string(vuln, "description");
    v.impact_category = detail::as_int(
        detail::require(vuln, "impact_category", "vulnerability"), "impact_category");
    v.exploit_probability = detail::as_number(
        detail::require(vuln, "exploit_probability", "vulnerability"),
        "exploit_probability");
    const double f = detail::as_number(
        detail::require(jv, "function_value", it.key().c_str()), "function_value");
    Vertex& added = net.add_vertex(it.key(),
                                   detail::as_string(detail::require(jv, "node_id", it.key().c_str()), "node_id"),
                                   std::move(v), f);
    if (jv.contains("risk_weight")) {
      const double stored = detail::as_number(jv["risk_weight"], "risk_weight");
      if (std::fabs(stored - added.risk_weight) > 1e-9)
        throw ValidationError("stored risk_weight of " + it.key() +
                              " does not match (f+p+r)/3");
    }
  }
  const Json& links = detail::require(j, "links", "network");
  if (!links.is_object())
    throw ValidationError("network: 'links' must be an object");
  for (auto it = links.begin(); it != links.end(); ++it) {
    net.add_link(it.key(),
                 detail::as_string(detail::require(it.value(), "parent", it.key().c_str()), "parent"),
                 detail::as_string(detail::require(it.value(), "child", it.key().c_str()), "child"));
  }
  const Json& logic = detail::require(j, "logic", "network");
  if (!logic.is_object())
    throw ValidationError("network: 'logic' must be an object");
  for (auto it = logic.begin(); it != logic.end(); ++it)
    net.set_logic(it.key(), logic_from_json(it.value()));
  net.finalize();
  return net;
}

inline std::string serialize_network(const Network& net) {
  return network_to_json(net).dump(2) + "\n";
}

inline Json parse_json(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& ex) {
    throw ValidationError(std::string(what) + ": invalid JSON: " + ex.what());
  }
}

inline Network parse_network(const std::string& text) {
  return network_from_json(parse_json(text, "network"));
}

// ---------------------------------------------------------------------------
// Topology / catalog / signature-map documents

inline Topology topology_from_json(const Json& j) {
  Topology t;
  const Json& nodes = detail::require(j, "nodes", "topology");
  if (!nodes.is_array()) throw ValidationError("topology: 'nodes' must be an array");
  for (const Json& jn : nodes) {
    TopologyNode n;
    n.id = detail::as_string(detail::require(jn, "id", "topology node"), "node id");
    n.role = detail::opt_string(jn, "role");
    n.function_value = detail::as_number(
        detail::require(jn, "function_value", "topology node"), "function_value");
    t.nodes.push_back(std::move(n));
  }
  if (j.contains("reachability")) {
    if (!j["reachability"].is_array())
      throw ValidationError("topology: 'reachability' must be an array");
    for (const Json& jp : j["reachability"]) {
      if (!jp.is_array() || jp.size() != 2)
        throw ValidationError("topology: reachability entries are [from, to] pairs");
      t.reachability.emplace_back(detail::as_string(jp[0], "reachability from"),
                                  detail::as_string(jp[1], "reachability to"));
    }
  }
  if (j.contains("trust_relations")) {
    if (!j["trust_relations"].is_array())
      throw ValidationError("topology: 'trust_relations' must be an array");
    for (const Json& jt : j["trust_relations"]) {
      TrustRelation r;
      r.from_node = detail::as_string(detail::require(jt, "from_node", "trust relation"), "from_node");
      r.from_privilege = privilege_from_string(
          detail::as_string(detail::require(jt, "from_privilege", "trust relation"), "from_privilege"));
      r.to_node = detail::as_string(detail::require(jt, "to_node", "trust relation"), "to_node");
      r.service = detail::as_string(detail::require(jt, "service", "trust relation"), "service");
      r.granted_privilege = privilege_from_string(
          detail::as_string(detail::require(jt, "granted_privilege", "trust relation"), "granted_privilege"));
      t.trust_relations.push_back(std::move(r));
    }
  }
  return t;
}

inline Catalog catalog_from_json(const Json& j) {
  Catalog c;
  const Json& entries = detail::require(j, "entries", "catalog");
  if (!entries.is_array()) throw ValidationError("catalog: 'entries' must be an array");
  for (const Json& je : entries) {
    CatalogEntry e;
    e.node_id = detail::as_string(detail::require(je, "node_id", "catalog entry"), "node_id");
    const Json& jv = detail::require(je, "vulnerability", "catalog entry");
    e.vulnerability.id = detail::as_string(detail::require(jv, "id", "vulnerability"), "vulnerability id");
    e.vulnerability.description = detail::opt_string(jv, "description");
    e.vulnerability.impact_category = detail::as_int(
        detail::require(jv, "impact_category", "vulnerability"), "impact_category");
    e.vulnerability.exploit_probability = detail::as_number(
        detail::require(jv, "exploit_probability", "vulnerability"), "exploit_probability");
    c.entries.push_back(std::move(e));
  }
  if (j.contains("rules")) {
    if (!j["rules"].is_array())
      throw ValidationError("catalog: 'rules' must be an array");
    auto pair_of = [](const Json& jp, const char* what) {
      if (!jp.is_array() || jp.size() != 2)
        throw ValidationError(std::string(what) + " must be a [node, id] pair");
      return std::make_pair(detail::as_string(jp[0], "node"),
                            detail::as_string(jp[1], "id"));
    };
    for (const Json& jr : j["rules"]) {
      CorrelationRule r;
      const std::string comb = detail::as_string(
          detail::require(jr, "combinator", "rule"), "combinator");
      if (comb == "and") {
        r.combinator = Combinator::And;
      } else if (comb == "or") {
        r.combinator = Combinator::Or;
      } else {
        throw ValidationError("rule combinator must be 'and' or 'or', got '" + comb + "'");
      }
      const Json& prem = detail::require(jr, "premises", "rule");
      if (!prem.is_array())
        throw ValidationError("rule: 'premises' must be an array");
      for (const Json& jp : prem) r.premises.push_back(pair_of(jp, "premise"));
      r.consequence = pair_of(detail::require(jr, "consequence", "rule"), "consequence");
      c.rules.push_back(std::move(r));
    }
  }
  return c;
}

inline SignatureMap sigmap_from_json(const Json& j) {
  SignatureMap m;
  const Json& rules = detail::require(j, "rules", "signature map");
  if (!rules.is_array())
    throw ValidationError("signature map: 'rules' must be an array");
  for (const Json& jr : rules) {
    SignatureMap::Rule r;
    r.signature = detail::as_string(detail::require(jr, "signature", "sigmap rule"), "signature");
    if (jr.contains("dst") && !jr["dst"].is_null())
      r.dst = detail::as_string(jr["dst"], "dst");
    r.vertex = detail::as_string(detail::require(jr, "vertex", "sigmap rule"), "vertex");
    m.rules.push_back(std::move(r));
  }
  return m;
}

// One NDJSON line. Timestamps may be JSON numbers (epoch ms) or strings.
inline RawAlert raw_alert_from_json(const Json& j) {
  RawAlert a;
  if (!j.is_object()) throw ValidationError("alert must be a JSON object");
  a.sensor_id = detail::opt_string(j, "sensor_id");
  const Json& ts = detail::require(j, "ts", "alert");
  if (ts.is_number_integer()) {
    a.ts = std::to_string(ts.get<std::int64_t>());
  } else if (ts.is_string()) {
    a.ts = ts.get<std::string>();
  } else {
    throw ValidationError("alert: 'ts' must be a string or integer");
  }
  a.signature = detail::as_string(detail::require(j, "signature", "alert"), "signature");
  a.src_addr = detail::opt_string(j, "src_addr");
  a.dst_addr = detail::opt_string(j, "dst_addr");
  if (j.contains("target_node") && !j["target_node"].is_null())
    a.target_node = detail::as_string(j["target_node"], "target_node");
  if (j.contains("vuln_hint") && !j["vuln_hint"].is_null())
    a.vuln_hint = detail::as_string(j["vuln_hint"], "vuln_hint");
  if (j.contains("payload_ref") && !j["payload_ref"].is_null())
    a.payload_ref = detail::as_string(j["payload_ref"], "payload_ref");
  return a;
}

// ---------------------------------------------------------------------------
// File helpers

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error("error reading file: " + path);
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw Error("error writing file: " + path);
}

}  // namespace ern
