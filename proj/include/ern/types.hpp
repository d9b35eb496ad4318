#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace ern {

using VertexId = std::string;     // "<node>:<vulnerability>"
using LinkId = std::string;       // "<parent vertex>=><child vertex>"
using NodeId = std::string;
using TimestampMs = std::int64_t; // UTC milliseconds since the Unix epoch

// A weakness an attacker can exploit on one network node.
struct Vulnerability {
  std::string id;
  std::string description;
  int impact_category = 8;           // 1 (full administrative impact) .. 8 (none)
  double exploit_probability = 0.0;  // chance an exploitation attempt succeeds, [0,1]
};

// Life cycle of an evidence record inside a vertex queue. Virtual records
// stand in for attack steps the sensors did not report.
enum class RecordState : int {
  Start = 0,
  StartVirtual = 1,
  Intermediate = 2,
  IntermediateVirtual = 3,
};

constexpr bool is_virtual(RecordState s) {
  return s == RecordState::StartVirtual || s == RecordState::IntermediateVirtual;
}

constexpr bool is_start(RecordState s) {
  return s == RecordState::Start || s == RecordState::StartVirtual;
}

// Identifies one record in one vertex queue. Serials are never reused within
// a queue, so a reference left behind by an evicted record is detectable.
struct RecordRef {
  VertexId vertex;
  std::uint64_t serial = 0;

  auto operator<=>(const RecordRef&) const = default;
};

// One slot of a vertex's bounded evidence queue.
struct EvidenceRecord {
  TimestampMs ts = 0;
  RecordState state = RecordState::Start;
  double weight = 0.0;                // owning vertex's risk weight
  std::vector<RecordRef> child_refs;  // sorted unique; forward pointers to consequences
  std::uint64_t serial = 0;           // assigned by the queue on push

  bool is_virtual_record() const { return ern::is_virtual(state); }

  // Set-semantics insert; duplicates are ignored.
  void add_child_ref(const RecordRef& r) {
    auto it = std::lower_bound(child_refs.begin(), child_refs.end(), r);
    if (it == child_refs.end() || *it != r) child_refs.insert(it, r);
  }
};

// Directed correlation link: exploiting `parent` enables exploiting `child`.
struct Link {
  LinkId id;
  VertexId parent;
  VertexId child;
};

}  // namespace ern
