#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ern/errors.hpp"
#include "ern/network.hpp"
#include "ern/types.hpp"
#include "ern/weights.hpp"

namespace ern {

enum class Privilege { Root, User };

inline Privilege privilege_from_string(const std::string& s) {
  if (s == "root") return Privilege::Root;
  if (s == "user") return Privilege::User;
  throw ValidationError("privilege must be 'root' or 'user', got '" + s + "'");
}

struct TopologyNode {
  NodeId id;
  std::string role;
  double function_value = 0.0;
};

// "<from_privilege> on from_node may use <service> on to_node and thereby
// act with <granted_privilege> there."
struct TrustRelation {
  NodeId from_node;
  Privilege from_privilege = Privilege::Root;
  NodeId to_node;
  std::string service;
  Privilege granted_privilege = Privilege::Root;
};

struct Topology {
  std::vector<TopologyNode> nodes;
  std::vector<std::pair<NodeId, NodeId>> reachability;  // ordered pairs
  std::vector<TrustRelation> trust_relations;
};

enum class Combinator { And, Or };

struct CatalogEntry {
  NodeId node_id;
  Vulnerability vulnerability;
};

// Exploiting all (and) / any (or) of the premises enables the consequence.
// Pairs are (node_id, vulnerability-or-service id).
struct CorrelationRule {
  Combinator combinator = Combinator::Or;
  std::vector<std::pair<NodeId, std::string>> premises;
  std::pair<NodeId, std::string> consequence;
};

struct Catalog {
  std::vector<CatalogEntry> entries;
  std::vector<CorrelationRule> rules;
};

namespace detail {

inline VertexId vertex_id_of(const NodeId& node, const std::string& vuln) {
  return node + ":" + vuln;
}

// Privilege a successful exploitation confers, derived from the impact
// category: 1-2 administrative, 3-6 ordinary user, 7-8 neither.
inline bool grants_privilege(const Vulnerability& v, Privilege p) {
  if (p == Privilege::Root)
    return v.impact_category >= 1 && v.impact_category <= 2;
  return v.impact_category >= 3 && v.impact_category <= 6;
}

}  // namespace detail

// Builds a network from declarative knowledge in five steps: validate the
// topology, validate the catalog against it, create vertices (one per
// catalog entry plus one per trust-granting service endpoint), derive links
// and per-vertex logic from trust relations and correlation rules, and
// finalize. Deterministic: identical inputs produce identical networks.
//
// Link rules: a trust relation contributes one premise group whose sources
// are the cataloged vulnerabilities on from_node that grant from_privilege;
// a correlation rule contributes its premises verbatim (vulnerabilities or
// service endpoints). Cross-node premises require the (from, to) pair in the
// reachability relation; same-node premises never do. An 'and' rule with any
// unreachable premise is dropped whole, an 'or' rule keeps its reachable
// alternatives. Groups targeting the same vertex are joined with 'or'.
inline Network build_network(const Topology& topo, const Catalog& catalog,
                             std::size_t queue_capacity = 8) {
  // Step 1: topology internal consistency.
  std::map<NodeId, const TopologyNode*> nodes;
  for (const TopologyNode& n : topo.nodes) {
    if (n.id.empty()) throw ValidationError("topology node with empty id");
    if (!nodes.emplace(n.id, &n).second)
      throw ValidationError("duplicate topology node: " + n.id);
    detail::check_unit_range(n.function_value, "function_value");
  }
  std::set<std::pair<NodeId, NodeId>> reach;
  for (const auto& [from, to] : topo.reachability) {
    if (!nodes.count(from))
      throw ValidationError("reachability references unknown node: " + from);
    if (!nodes.count(to))
      throw ValidationError("reachability references unknown node: " + to);
    reach.emplace(from, to);
  }
  for (const TrustRelation& t : topo.trust_relations) {
    if (!nodes.count(t.from_node))
      throw ValidationError("trust relation references unknown node: " + t.from_node);
    if (!nodes.count(t.to_node))
      throw ValidationError("trust relation references unknown node: " + t.to_node);
    if (t.service.empty())
      throw ValidationError("trust relation with empty service name");
  }
  auto connected = [&reach](const NodeId& from, const NodeId& to) {
    return from == to || reach.count({from, to}) != 0;
  };

  // Step 2: catalog internal consistency.
  std::set<std::pair<NodeId, std::string>> declared;
  for (const CatalogEntry& e : catalog.entries) {
    if (!nodes.count(e.node_id))
      throw ValidationError("catalog entry references unknown node: " + e.node_id);
    if (e.vulnerability.id.empty())
      throw ValidationError("catalog entry with empty vulnerability id");
    if (!declared.emplace(e.node_id, e.vulnerability.id).second)
      throw ValidationError("duplicate catalog entry: " +
                            detail::vertex_id_of(e.node_id, e.vulnerability.id));
    impact_category_weight(e.vulnerability.impact_category);
    detail::check_unit_range(e.vulnerability.exploit_probability,
                             "exploit_probability");
  }
  std::set<std::pair<NodeId, std::string>> endpoints;
  for (const TrustRelation& t : topo.trust_relations)
    endpoints.emplace(t.to_node, t.service);
  auto will_exist = [&](const std::pair<NodeId, std::string>& p) {
    return declared.count(p) != 0 || endpoints.count(p) != 0;
  };
  for (const CorrelationRule& r : catalog.rules) {
    if (r.premises.empty())
      throw ValidationError("correlation rule with no premises");
    std::vector<std::string> dangling;
    if (!will_exist(r.consequence))
      dangling.push_back(detail::vertex_id_of(r.consequence.first,
                                              r.consequence.second));
    std::set<std::pair<NodeId, std::string>> seen;
    for (const auto& p : r.premises) {
      if (!will_exist(p))
        dangling.push_back(detail::vertex_id_of(p.first, p.second));
      if (!seen.insert(p).second)
        throw ValidationError("correlation rule repeats premise " +
                              detail::vertex_id_of(p.first, p.second));
      if (p == r.consequence)
        throw ValidationError("correlation rule implies a self-link at " +
                              detail::vertex_id_of(p.first, p.second));
    }
    if (!dangling.empty()) {
      std::string msg = "correlation rule references undeclared pairs:";
      for (const std::string& d : dangling) msg += " " + d;
      throw ValidationError(msg);
    }
  }

  // Step 3: vertices. Catalog entries first, then synthesized service
  // endpoints (a catalog entry for (to_node, service) overrides synthesis).
  Network net(queue_capacity);
  for (const CatalogEntry& e : catalog.entries)
    net.add_vertex(detail::vertex_id_of(e.node_id, e.vulnerability.id),
                   e.node_id, e.vulnerability,
                   nodes.at(e.node_id)->function_value);
  for (const TrustRelation& t : topo.trust_relations) {
    const VertexId vid = detail::vertex_id_of(t.to_node, t.service);
    if (net.has_vertex(vid)) continue;
    Vulnerability v;
    v.id = t.service;
    v.description = "remote access via " + t.service;
    v.impact_category = t.granted_privilege == Privilege::Root ? 1 : 3;
    v.exploit_probability = 1.0;  // the trust relation grants access by design
    net.add_vertex(vid, t.to_node, std::move(v),
                   nodes.at(t.to_node)->function_value);
  }

  // Step 4: premise groups per target vertex, in input order: trust
  // relations first, then rules. Each group becomes links plus one operand
  // of the target's top-level disjunction.
  std::map<VertexId, std::vector<LogicExpr>> groups;
  std::vector<VertexId> group_order;  // first-seen order of targets
  auto add_group = [&](const VertexId& target, Combinator comb,
                       const std::vector<VertexId>& sources) {
    std::vector<LogicExpr> leaves;
    for (const VertexId& src : sources) {
      const Link& l = net.add_link(src, target);  // rejects duplicate pairs
      leaves.push_back(LogicExpr::leaf(l.id));
    }
    LogicExpr group = comb == Combinator::And
                          ? LogicExpr::all_of(std::move(leaves))
                          : LogicExpr::any_of(std::move(leaves));
    if (!groups.count(target)) group_order.push_back(target);
    groups[target].push_back(std::move(group));
  };

  for (const TrustRelation& t : topo.trust_relations) {
    if (!connected(t.from_node, t.to_node)) continue;
    std::vector<VertexId> sources;  // sorted: catalog scan is id-ordered below
    std::set<VertexId> sorted_sources;
    for (const CatalogEntry& e : catalog.entries)
      if (e.node_id == t.from_node &&
          detail::grants_privilege(e.vulnerability, t.from_privilege))
        sorted_sources.insert(
            detail::vertex_id_of(e.node_id, e.vulnerability.id));
    sources.assign(sorted_sources.begin(), sorted_sources.end());
    if (sources.empty()) continue;
    add_group(detail::vertex_id_of(t.to_node, t.service), Combinator::Or,
              sources);
  }

  for (const CorrelationRule& r : catalog.rules) {
    const VertexId target =
        detail::vertex_id_of(r.consequence.first, r.consequence.second);
    std::vector<VertexId> sources;
    bool dropped = false;
    for (const auto& [pnode, pvuln] : r.premises) {
      if (connected(pnode, r.consequence.first)) {
        sources.push_back(detail::vertex_id_of(pnode, pvuln));
      } else if (r.combinator == Combinator::And) {
        dropped = true;  // a required premise can never be exploited first
        break;
      }
    }
    if (dropped || sources.empty()) continue;
    add_group(target, r.combinator, sources);
  }

  for (const VertexId& target : group_order) {
    std::vector<LogicExpr>& gs = groups[target];
    net.set_logic(target, LogicExpr::any_of(std::move(gs)));
  }

  // Step 5: adjacency, parent indexes, and the full invariant check.
  net.finalize();
  return net;
}

}  // namespace ern
