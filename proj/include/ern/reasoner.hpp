#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ern/errors.hpp"
#include "ern/ingest.hpp"
#include "ern/network.hpp"
#include "ern/types.hpp"

namespace ern {

enum class ReasonMode { Timed, Untimed };

struct SessionStats {
  std::uint64_t processed = 0;
  std::uint64_t skipped_unmapped = 0;
  std::uint64_t virtual_records = 0;
  std::uint64_t promotions = 0;
};

// One record of a reconstructed chain, snapshotted at generation time.
struct ChainRecord {
  VertexId vertex;
  EvidenceRecord record;
};

// A reconstructed attack chain: breadth-first traversal from one start
// record through child_refs. real_weight sums non-virtual record weights,
// virtual_weight the virtual ones.
struct EvidenceChain {
  std::vector<ChainRecord> records;
  double real_weight = 0.0;
  double virtual_weight = 0.0;
  double confidence = 1.0;
};

// confidence = real / (real + virtual); exactly 1.0 when nothing is virtual.
inline double chain_confidence(const EvidenceChain& chain) {
  if (chain.records.empty())
    throw ValidationError("confidence of an empty chain is undefined");
  double real = 0.0, virt = 0.0;
  for (const ChainRecord& r : chain.records)
    (r.record.is_virtual_record() ? virt : real) += r.record.weight;
  if (virt == 0.0) return 1.0;
  return real / (real + virt);
}

// Single-writer correlation session over one network. Evidence is pushed in
// with process(); chains can be regenerated at any point.
//
// Timed mode expects evidence in non-decreasing ts order and records every
// evidence as either a start (logic unsatisfied) or an intermediate whose
// satisfying parents point at it. Untimed mode additionally promotes virtual
// records when the missing step finally arrives, and synthesizes at most one
// virtual parent record per evidence when exactly one inferred step would
// satisfy the vertex logic.
class ReasonerSession {
 public:
  ReasonerSession(Network network, ReasonMode mode)
      : net_(std::move(network)), mode_(mode) {
    if (!net_.finalized())
      throw ContractError("session requires a finalized network");
  }

  ReasonMode mode() const { return mode_; }
  const Network& network() const { return net_; }
  const SessionStats& stats() const { return stats_; }

  void process(const Evidence& e) {
    if (!e.mapped_vertex) {
      ++stats_.skipped_unmapped;
      return;
    }
    if (mode_ == ReasonMode::Timed) {
      process_timed(e);
    } else {
      process_untimed(e);
    }
    ++stats_.processed;
  }

  // One chain per live start record (state 0 or 1), records in breadth-first
  // order over child_refs. Dangling refs (evicted records) are skipped.
  // Sorted by descending confidence, then earliest record ts, then start id.
  std::vector<EvidenceChain> generate_chains() const {
    std::vector<EvidenceChain> chains;
    for (const auto& [vid, v] : net_.vertices()) {
      for (std::size_t i = 0; i < v.queue.size(); ++i) {
        const EvidenceRecord& rec = v.queue.at(i);
        if (!is_start(rec.state)) continue;
        chains.push_back(walk_chain({vid, rec.serial}));
      }
    }
    std::sort(chains.begin(), chains.end(),
              [](const EvidenceChain& a, const EvidenceChain& b) {
                if (a.confidence != b.confidence)
                  return a.confidence > b.confidence;
                const TimestampMs ta = min_ts(a), tb = min_ts(b);
                if (ta != tb) return ta < tb;
                if (a.records.front().vertex != b.records.front().vertex)
                  return a.records.front().vertex < b.records.front().vertex;
                return a.records.front().record.serial <
                       b.records.front().record.serial;
              });
    return chains;
  }

 private:
  static TimestampMs min_ts(const EvidenceChain& c) {
    TimestampMs m = c.records.front().record.ts;
    for (const ChainRecord& r : c.records)
      if (r.record.ts < m) m = r.record.ts;
    return m;
  }

  const EvidenceRecord* live(const RecordRef& ref) const {
    return net_.vertex(ref.vertex).queue.find(ref.serial);
  }

  EvidenceChain walk_chain(const RecordRef& root) const {
    EvidenceChain chain;
    std::deque<RecordRef> frontier{root};
    std::set<RecordRef> visited{root};
    while (!frontier.empty()) {
      const RecordRef ref = frontier.front();
      frontier.pop_front();
      const EvidenceRecord* rec = live(ref);
      chain.records.push_back({ref.vertex, *rec});
      for (const RecordRef& c : rec->child_refs) {
        if (visited.count(c)) continue;
        if (!live(c)) continue;  // evicted; skip the dangling ref
        visited.insert(c);
        frontier.push_back(c);
      }
    }
    for (const ChainRecord& r : chain.records)
      (r.record.is_virtual_record() ? chain.virtual_weight
                                    : chain.real_weight) += r.record.weight;
    chain.confidence = chain_confidence(chain);
    return chain;
  }

  // Truth assignment for a vertex's logic: a link is true iff its parent
  // queue holds at least one record. `forced` (if any) is treated as true.
  bool link_true(const LinkId& l, const LinkId* forced) const {
    if (forced && *forced == l) return true;
    return !net_.vertex(net_.link(l).parent).queue.empty();
  }

  struct Association {
    bool satisfied = false;
    std::vector<RecordRef> parent_refs;  // most recent record per satisfying parent
  };

  // Evaluates the vertex logic under the queue-derived truth assignment and,
  // when satisfied, resolves the minimal satisfying leaves to the most recent
  // record of each leaf's parent.
  Association associate(const Vertex& v) const {
    Association a;
    std::vector<LinkId> sat;
    const LogicExpr& expr = net_.logic(v.id);
    if (!expr.satisfying_leaves(
            [this](const LinkId& l) { return link_true(l, nullptr); }, sat))
      return a;
    a.satisfied = true;
    for (const LinkId& l : sat) {
      const Vertex& parent = net_.vertex(net_.link(l).parent);
      a.parent_refs.push_back({parent.id, parent.queue.most_recent()->serial});
    }
    return a;
  }

  std::uint64_t push_record(Vertex& v, TimestampMs ts, RecordState state) {
    EvidenceRecord rec;
    rec.ts = ts;
    rec.state = state;
    rec.weight = v.risk_weight;
    return v.queue.push(std::move(rec)).serial;
  }

  void attach_parents(const std::vector<RecordRef>& parents,
                      const RecordRef& child) {
    for (const RecordRef& p : parents) {
      EvidenceRecord* rec = net_.vertex_mut(p.vertex).queue.find(p.serial);
      if (rec) rec->add_child_ref(child);
    }
  }

  void process_timed(const Evidence& e) {
    if (e.ts < last_ts_)
      throw ContractError("timed session requires non-decreasing timestamps");
    last_ts_ = e.ts;
    Vertex& v = net_.vertex_mut(*e.mapped_vertex);
    if (net_.in_links(v.id).empty()) {
      push_record(v, e.ts, RecordState::Start);
      return;
    }
    Association a = associate(v);
    if (!a.satisfied) {
      // No known cause chain reaches this vertex yet: new start.
      push_record(v, e.ts, RecordState::Start);
      return;
    }
    const std::uint64_t serial = push_record(v, e.ts, RecordState::Intermediate);
    attach_parents(a.parent_refs, {v.id, serial});
  }

  void process_untimed(const Evidence& e) {
    Vertex& v = net_.vertex_mut(*e.mapped_vertex);

    // Promotion: the arriving evidence realizes a previously inferred step.
    // The record keeps its slot, serial, and child_refs.
    if (EvidenceRecord* mr = v.queue.most_recent();
        mr && mr->is_virtual_record()) {
      mr->state = mr->state == RecordState::StartVirtual
                      ? RecordState::Start
                      : RecordState::Intermediate;
      mr->weight = v.risk_weight;
      mr->ts = e.ts;
      ++stats_.promotions;
      return;
    }

    if (net_.in_links(v.id).empty()) {
      push_record(v, e.ts, RecordState::Start);
      return;
    }
    if (Association a = associate(v); a.satisfied) {
      const std::uint64_t serial =
          push_record(v, e.ts, RecordState::Intermediate);
      attach_parents(a.parent_refs, {v.id, serial});
      return;
    }
    if (try_virtual_parent(v, e)) return;
    push_record(v, e.ts, RecordState::Start);
  }

  // Searches parents in ascending vertex-id order for one whose inferred
  // record would satisfy this vertex's logic, and whose own association lands
  // in a defined state (no inputs -> virtual start; logic satisfied ->
  // virtual intermediate). Commits the virtual record plus the evidence
  // record and returns true; returns false when no single parent suffices.
  bool try_virtual_parent(Vertex& v, const Evidence& e) {
    for (const VertexId& pid : v.parent_index) {
      Vertex& parent = net_.vertex_mut(pid);
      if (!parent.queue.empty()) continue;  // its link is already true

      const Link* between = net_.find_link_between(pid, v.id);
      if (!between) continue;
      const LinkId& forced = between->id;
      const bool would_satisfy = net_.logic(v.id).evaluate(
          [this, &forced](const LinkId& l) { return link_true(l, &forced); });
      if (!would_satisfy) continue;

      RecordState virtual_state;
      Association parent_assoc;
      if (net_.in_links(pid).empty()) {
        virtual_state = RecordState::StartVirtual;
      } else {
        parent_assoc = associate(parent);
        if (!parent_assoc.satisfied) continue;  // would need a second virtual
        virtual_state = RecordState::IntermediateVirtual;
      }

      const std::uint64_t vserial = push_record(parent, e.ts, virtual_state);
      attach_parents(parent_assoc.parent_refs, {pid, vserial});
      ++stats_.virtual_records;

      // With the virtual record in place the logic is satisfied for real;
      // monotonicity guarantees the satisfying set includes the forced link.
      Association a = associate(v);
      const std::uint64_t serial =
          push_record(v, e.ts, RecordState::Intermediate);
      attach_parents(a.parent_refs, {v.id, serial});
      return true;
    }
    return false;
  }

  Network net_;
  ReasonMode mode_;
  SessionStats stats_;
  TimestampMs last_ts_ = std::numeric_limits<TimestampMs>::min();
};

}  // namespace ern
