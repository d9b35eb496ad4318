#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ern/errors.hpp"
#include "ern/network.hpp"
#include "ern/timestamp.hpp"
#include "ern/types.hpp"

namespace ern {

// One alert as a sensor reported it, before normalization. `ts` is the raw
// timestamp text (decimal epoch milliseconds or an ISO 8601 instant).
struct RawAlert {
  std::string sensor_id;
  std::string ts;
  std::string signature;
  std::string src_addr;
  std::string dst_addr;
  std::optional<std::string> target_node;
  std::optional<std::string> vuln_hint;
  std::optional<std::string> payload_ref;
};

// Normalized, possibly merged alert ready for reasoning.
struct Evidence {
  std::uint64_t evidence_id = 0;            // assigned at emission, 1-based
  TimestampMs ts = 0;
  std::optional<VertexId> mapped_vertex;
  std::string signature;
  std::vector<std::string> merged_from;     // sensor ids, sorted unique
  std::map<std::string, std::string> attributes;
};

// Ordered first-match rules from signatures to vertices. `signature` supports
// '*' and '?' globs; `dst` (optional) must equal the evidence dst_addr.
struct SignatureMap {
  struct Rule {
    std::string signature;
    std::optional<std::string> dst;
    VertexId vertex;
  };
  std::vector<Rule> rules;
};

// Counters for one ingest run. merged_away counts alerts folded into an
// earlier duplicate; evidences = parsed - merged_away.
struct IngestStats {
  std::uint64_t alerts_parsed = 0;
  std::uint64_t alerts_rejected = 0;
  std::uint64_t merged_away = 0;
  std::uint64_t evidences = 0;
  std::uint64_t mapped = 0;
  std::uint64_t unmapped = 0;
  std::map<std::string, std::uint64_t> signature_counts;
  std::vector<std::string> diagnostics;
};

namespace detail {

inline bool glob_match(const std::string& pattern, const std::string& text) {
  std::size_t p = 0, t = 0;
  std::size_t star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() &&
        (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

}  // namespace detail

// Converts a raw alert into Evidence: UTC-normalized timestamp, verbatim
// signature, attribute bag. Throws ValidationError on an unparseable
// timestamp or an empty signature; evidence_id stays 0 until emission.
inline Evidence normalize_alert(const RawAlert& a) {
  if (a.signature.empty()) throw ValidationError("alert has empty signature");
  Evidence e;
  e.ts = parse_timestamp_ms(a.ts);
  e.signature = a.signature;
  e.merged_from.push_back(a.sensor_id);
  if (!a.src_addr.empty()) e.attributes["src_addr"] = a.src_addr;
  if (!a.dst_addr.empty()) e.attributes["dst_addr"] = a.dst_addr;
  if (a.target_node) e.attributes["target_node"] = *a.target_node;
  if (a.vuln_hint) e.attributes["vuln_hint"] = *a.vuln_hint;
  if (a.payload_ref) e.attributes["payload_ref"] = *a.payload_ref;
  return e;
}

// Collapses duplicates: evidences with the same (signature, src, dst) whose
// ts lies within `window_ms` of the group's first ts become one evidence with
// the earliest ts and the union of merged_from. Input must be ts-sorted;
// output stays sorted and the pass is idempotent (surviving groups of one key
// are more than window_ms apart). `merged_away`, when given, is incremented
// once per collapsed record.
inline std::vector<Evidence> merge_duplicates(std::vector<Evidence> in,
                                              TimestampMs window_ms,
                                              std::uint64_t* merged_away = nullptr) {
  if (window_ms < 0) throw ValidationError("merge window must be >= 0");
  for (std::size_t i = 1; i < in.size(); ++i)
    if (in[i].ts < in[i - 1].ts)
      throw ContractError("merge_duplicates requires ts-sorted input");

  using Key = std::tuple<std::string, std::string, std::string>;
  auto key_of = [](const Evidence& e) -> Key {
    auto attr = [&e](const char* k) {
      auto it = e.attributes.find(k);
      return it == e.attributes.end() ? std::string() : it->second;
    };
    return {e.signature, attr("src_addr"), attr("dst_addr")};
  };

  std::vector<Evidence> out;
  std::map<Key, std::size_t> open;  // key -> index of the group in `out`
  for (Evidence& e : in) {
    const Key k = key_of(e);
    auto it = open.find(k);
    if (it != open.end() && e.ts - out[it->second].ts <= window_ms) {
      Evidence& g = out[it->second];
      for (std::string& s : e.merged_from) g.merged_from.push_back(std::move(s));
      for (auto& [ak, av] : e.attributes) g.attributes.emplace(ak, av);
      if (merged_away) ++*merged_away;
      continue;
    }
    open[k] = out.size();
    out.push_back(std::move(e));
  }
  for (Evidence& e : out) {
    std::sort(e.merged_from.begin(), e.merged_from.end());
    e.merged_from.erase(std::unique(e.merged_from.begin(), e.merged_from.end()),
                        e.merged_from.end());
  }
  return out;
}

// Checks that every rule target exists in the network.
inline void validate_sigmap(const Network& net, const SignatureMap& map) {
  std::set<VertexId> missing;
  for (const SignatureMap::Rule& r : map.rules)
    if (!net.has_vertex(r.vertex)) missing.insert(r.vertex);
  if (!missing.empty()) {
    std::string msg = "signature map references unknown vertices:";
    for (const VertexId& v : missing) msg += " " + v;
    throw ValidationError(msg);
  }
}

// First matching rule assigns mapped_vertex; no match leaves it unset.
inline Evidence map_evidence(const Network& net, const SignatureMap& map,
                             Evidence e) {
  (void)net;  // rules are pre-validated against the network
  for (const SignatureMap::Rule& r : map.rules) {
    if (!detail::glob_match(r.signature, e.signature)) continue;
    if (r.dst) {
      auto it = e.attributes.find("dst_addr");
      if (it == e.attributes.end() || it->second != *r.dst) continue;
    }
    e.mapped_vertex = r.vertex;
    return e;
  }
  return e;
}

}  // namespace ern
