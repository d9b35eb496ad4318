#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ern/errors.hpp"
#include "ern/logic.hpp"
#include "ern/record_queue.hpp"
#include "ern/types.hpp"
#include "ern/weights.hpp"

namespace ern {

// One graph vertex: a (node, vulnerability) pair plus its runtime queue.
struct Vertex {
  VertexId id;
  NodeId node_id;
  Vulnerability vulnerability;
  double function_value = 0.0;          // importance of the hosting node, [0,1]
  double risk_weight = 0.0;             // (f + p + r) / 3
  RecordQueue queue;
  std::vector<VertexId> parent_index;   // sorted parents, filled by finalize()
};

// Evidence reasoning network: a directed graph of (node, vulnerability)
// vertices, correlation links, and one monotone logic expression per vertex
// over its incoming links. Construction is add_* calls followed by
// finalize(), which builds the adjacency indexes and validates.
class Network {
 public:
  explicit Network(std::size_t queue_capacity = 8)
      : queue_capacity_(queue_capacity) {
    if (queue_capacity_ == 0)
      throw ValidationError("queue_capacity must be >= 1");
  }

  static LinkId make_link_id(const VertexId& parent, const VertexId& child) {
    return parent + "=>" + child;
  }

  Vertex& add_vertex(const VertexId& id, const NodeId& node_id,
                     Vulnerability vuln, double function_value) {
    if (id.empty()) throw ValidationError("vertex id must be non-empty");
    if (vertices_.count(id))
      throw ValidationError("duplicate vertex id: " + id);
    detail::check_unit_range(function_value, "function_value");
    detail::check_unit_range(vuln.exploit_probability, "exploit_probability");
    const double r = impact_category_weight(vuln.impact_category);
    Vertex v;
    v.id = id;
    v.node_id = node_id;
    v.vulnerability = std::move(vuln);
    v.function_value = function_value;
    v.risk_weight = compute_weight(function_value, v.vulnerability.exploit_probability, r);
    v.queue = RecordQueue(queue_capacity_);
    finalized_ = false;
    logic_.emplace(id, LogicExpr{});
    return vertices_.emplace(id, std::move(v)).first->second;
  }

  const Link& add_link(const VertexId& parent, const VertexId& child) {
    return add_link(make_link_id(parent, child), parent, child);
  }

  const Link& add_link(LinkId id, const VertexId& parent, const VertexId& child) {
    if (id.empty()) throw ValidationError("link id must be non-empty");
    if (!vertices_.count(parent))
      throw ValidationError("link parent does not exist: " + parent);
    if (!vertices_.count(child))
      throw ValidationError("link child does not exist: " + child);
    if (parent == child)
      throw ValidationError("self-link rejected: " + parent);
    if (links_.count(id)) throw ValidationError("duplicate link id: " + id);
    if (!link_pairs_.emplace(std::make_pair(parent, child), id).second)
      throw ValidationError("duplicate link between " + parent + " and " + child);
    finalized_ = false;
    Link l{std::move(id), parent, child};
    return links_.emplace(l.id, std::move(l)).first->second;
  }

  void set_logic(const VertexId& vertex, LogicExpr expr) {
    if (!vertices_.count(vertex))
      throw NotFoundError("unknown vertex: " + vertex);
    finalized_ = false;
    logic_[vertex] = std::move(expr);
  }

  // Builds in/out link indexes and parent_index, then validates everything.
  void finalize() {
    in_links_.clear();
    out_links_.clear();
    for (const auto& [id, v] : vertices_) {
      in_links_[id];
      out_links_[id];
    }
    for (const auto& [id, l] : links_) {
      in_links_[l.child].push_back(id);
      out_links_[l.parent].push_back(id);
    }
    for (auto& [id, ls] : in_links_) std::sort(ls.begin(), ls.end());
    for (auto& [id, ls] : out_links_) std::sort(ls.begin(), ls.end());
    for (auto& [id, v] : vertices_) {
      std::set<VertexId> parents;
      for (const LinkId& l : in_links_[id]) parents.insert(links_.at(l).parent);
      v.parent_index.assign(parents.begin(), parents.end());
    }
    finalized_ = true;
    validate();
  }

  bool finalized() const { return finalized_; }

  std::size_t queue_capacity() const { return queue_capacity_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t link_count() const { return links_.size(); }

  bool has_vertex(const VertexId& id) const { return vertices_.count(id) != 0; }

  const Vertex& vertex(const VertexId& id) const {
    auto it = vertices_.find(id);
    if (it == vertices_.end()) throw NotFoundError("unknown vertex: " + id);
    return it->second;
  }

  Vertex& vertex_mut(const VertexId& id) {
    auto it = vertices_.find(id);
    if (it == vertices_.end()) throw NotFoundError("unknown vertex: " + id);
    return it->second;
  }

  const Link& link(const LinkId& id) const {
    auto it = links_.find(id);
    if (it == links_.end()) throw NotFoundError("unknown link: " + id);
    return it->second;
  }

  const LogicExpr& logic(const VertexId& vertex) const {
    auto it = logic_.find(vertex);
    if (it == logic_.end()) throw NotFoundError("unknown vertex: " + vertex);
    return it->second;
  }

  // Sorted ids of links entering / leaving a vertex. Requires finalize().
  const std::vector<LinkId>& in_links(const VertexId& vertex) const {
    require_finalized();
    auto it = in_links_.find(vertex);
    if (it == in_links_.end()) throw NotFoundError("unknown vertex: " + vertex);
    return it->second;
  }

  const std::vector<LinkId>& out_links(const VertexId& vertex) const {
    require_finalized();
    auto it = out_links_.find(vertex);
    if (it == out_links_.end()) throw NotFoundError("unknown vertex: " + vertex);
    return it->second;
  }

  bool has_link_between(const VertexId& parent, const VertexId& child) const {
    return link_pairs_.count({parent, child}) != 0;
  }

  // The link with the given endpoints, or nullptr.
  const Link* find_link_between(const VertexId& parent,
                                const VertexId& child) const {
    auto it = link_pairs_.find({parent, child});
    return it == link_pairs_.end() ? nullptr : &links_.at(it->second);
  }

  // Deterministic iteration: std::map keeps both collections id-sorted.
  const std::map<VertexId, Vertex>& vertices() const { return vertices_; }
  const std::map<LinkId, Link>& links() const { return links_; }

  // Full structural invariant check; throws ValidationError on the first
  // violation. finalize() runs this automatically.
  void validate() const {
    require_finalized();
    for (const auto& [id, v] : vertices_) {
      if (v.id != id) throw ValidationError("vertex key/id mismatch: " + id);
      const double r = impact_category_weight(v.vulnerability.impact_category);
      detail::check_unit_range(v.function_value, "function_value");
      detail::check_unit_range(v.vulnerability.exploit_probability,
                               "exploit_probability");
      const double expect = compute_weight(
          v.function_value, v.vulnerability.exploit_probability, r);
      if (std::fabs(v.risk_weight - expect) > 1e-9)
        throw ValidationError("risk_weight of " + id +
                              " does not match (f+p+r)/3");
      if (v.queue.capacity() != queue_capacity_)
        throw ValidationError("queue capacity mismatch at " + id);
    }
    if (logic_.size() != vertices_.size())
      throw ValidationError("logic table does not cover every vertex");
    for (const auto& [id, expr] : logic_) {
      if (!vertices_.count(id))
        throw ValidationError("logic entry for unknown vertex: " + id);
      // Every incoming link appears in exactly one leaf, and nothing else does.
      std::vector<LinkId> ls = expr.leaves();
      std::sort(ls.begin(), ls.end());
      if (std::adjacent_find(ls.begin(), ls.end()) != ls.end())
        throw ValidationError("logic of " + id + " repeats a link leaf");
      const std::vector<LinkId>& in = in_links_.at(id);
      if (ls != in)
        throw ValidationError("logic leaves of " + id +
                              " do not match its incoming links");
    }
    for (const auto& [id, l] : links_) {
      if (l.id != id) throw ValidationError("link key/id mismatch: " + id);
      if (!vertices_.count(l.parent) || !vertices_.count(l.child))
        throw ValidationError("link endpoint missing: " + id);
      if (l.parent == l.child) throw ValidationError("self-link: " + id);
    }
    for (const auto& [id, v] : vertices_) {
      std::set<VertexId> parents;
      for (const LinkId& l : in_links_.at(id)) parents.insert(links_.at(l).parent);
      if (!std::equal(parents.begin(), parents.end(), v.parent_index.begin(),
                      v.parent_index.end()))
        throw ValidationError("parent_index of " + id + " is stale");
    }
  }

 private:
  void require_finalized() const {
    if (!finalized_)
      throw ContractError("network must be finalized before this operation");
  }

  std::size_t queue_capacity_;
  std::map<VertexId, Vertex> vertices_;
  std::map<LinkId, Link> links_;
  std::map<VertexId, LogicExpr> logic_;
  std::map<VertexId, std::vector<LinkId>> in_links_;
  std::map<VertexId, std::vector<LinkId>> out_links_;
  std::map<std::pair<VertexId, VertexId>, LinkId> link_pairs_;
  bool finalized_ = false;
};

}  // namespace ern
