#pragma once

#include <cstddef>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ern/ingest.hpp"
#include "ern/network.hpp"
#include "ern/reasoner.hpp"

namespace ern {

struct RenderOptions {
  bool merge_chains = true;    // one shared node per record across chains
  bool show_virtual = true;    // shade inferred records
  bool include_weights = true;
};

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

inline std::string fixed3(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(3) << v;
  return ss.str();
}

inline std::string record_node_name(const ChainRecord& r) {
  return r.vertex + "#" + std::to_string(r.record.serial);
}

// Already DOT-escaped; "\n" sequences are Graphviz line breaks.
inline std::string record_label(const ChainRecord& r, const RenderOptions& opt) {
  std::string label = dot_escape(r.vertex) + "\\nts=" + std::to_string(r.record.ts);
  if (opt.include_weights) label += "\\nwt=" + fixed3(r.record.weight);
  if (r.record.is_virtual_record()) label += "\\n(virtual)";
  return label;
}

}  // namespace detail

// Chains as a Graphviz digraph. Nodes are evidence records, edges the
// child_refs actually followed. Output is byte-deterministic for a given
// chain list and option set.
inline std::string to_dot(const std::vector<EvidenceChain>& chains,
                          const RenderOptions& opt = {}) {
  std::ostringstream out;
  out << "digraph evidence_chains {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box];\n";

  auto emit_node = [&](const std::string& indent, const std::string& name,
                       const ChainRecord& r) {
    out << indent << "\"" << detail::dot_escape(name) << "\" [label=\""
        << detail::record_label(r, opt) << "\"";
    if (opt.show_virtual && r.record.is_virtual_record())
      out << ", style=filled, fillcolor=lightgrey";
    out << "];\n";
  };

  if (opt.merge_chains) {
    std::set<std::string> emitted;
    std::set<std::pair<std::string, std::string>> edges;
    for (const EvidenceChain& chain : chains) {
      std::set<RecordRef> members;
      for (const ChainRecord& r : chain.records)
        members.insert({r.vertex, r.record.serial});
      for (const ChainRecord& r : chain.records) {
        const std::string name = detail::record_node_name(r);
        if (emitted.insert(name).second) emit_node("  ", name, r);
        for (const RecordRef& c : r.record.child_refs)
          if (members.count(c))
            edges.emplace(name, c.vertex + "#" + std::to_string(c.serial));
      }
    }
    for (const auto& [from, to] : edges)
      out << "  \"" << detail::dot_escape(from) << "\" -> \""
          << detail::dot_escape(to) << "\";\n";
  } else {
    for (std::size_t i = 0; i < chains.size(); ++i) {
      const EvidenceChain& chain = chains[i];
      out << "  subgraph cluster_" << i << " {\n";
      out << "    label=\"chain " << i
          << " confidence=" << detail::fixed3(chain.confidence) << "\";\n";
      std::set<RecordRef> members;
      for (const ChainRecord& r : chain.records)
        members.insert({r.vertex, r.record.serial});
      auto name_of = [i](const std::string& base) {
        return "c" + std::to_string(i) + ":" + base;
      };
      for (const ChainRecord& r : chain.records)
        emit_node("    ", name_of(detail::record_node_name(r)), r);
      std::set<std::pair<std::string, std::string>> edges;
      for (const ChainRecord& r : chain.records)
        for (const RecordRef& c : r.record.child_refs)
          if (members.count(c))
            edges.emplace(name_of(detail::record_node_name(r)),
                          name_of(c.vertex + "#" + std::to_string(c.serial)));
      for (const auto& [from, to] : edges)
        out << "    \"" << detail::dot_escape(from) << "\" -> \""
            << detail::dot_escape(to) << "\";\n";
      out << "  }\n";
    }
  }
  out << "}\n";
  return out.str();
}

// The network structure itself (vertices and correlation links), weights on
// the labels.
inline std::string network_to_dot(const Network& net) {
  std::ostringstream out;
  out << "digraph ern {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=ellipse];\n";
  for (const auto& [id, v] : net.vertices())
    out << "  \"" << detail::dot_escape(id) << "\" [label=\""
        << detail::dot_escape(id) << "\\nw=" << detail::fixed3(v.risk_weight)
        << "\"];\n";
  for (const auto& [id, l] : net.links())
    out << "  \"" << detail::dot_escape(l.parent) << "\" -> \""
        << detail::dot_escape(l.child) << "\";\n";
  out << "}\n";
  return out.str();
}

inline nlohmann::json chains_to_json(const std::vector<EvidenceChain>& chains) {
  nlohmann::json arr = nlohmann::json::array();
  for (const EvidenceChain& chain : chains) {
    nlohmann::json records = nlohmann::json::array();
    for (const ChainRecord& r : chain.records) {
      records.push_back({{"vertex", r.vertex},
                         {"ts", r.record.ts},
                         {"state", static_cast<int>(r.record.state)},
                         {"weight", r.record.weight},
                         {"virtual", r.record.is_virtual_record()}});
    }
    arr.push_back({{"records", std::move(records)},
                   {"real_weight", chain.real_weight},
                   {"virtual_weight", chain.virtual_weight},
                   {"confidence", chain.confidence}});
  }
  return arr;
}

// Machine-readable run report: every chain with per-record detail, plus the
// ingest counters and the per-signature evidence histogram.
inline std::string report_json(const std::vector<EvidenceChain>& chains,
                               const IngestStats& stats) {
  nlohmann::json j;
  j["chains"] = chains_to_json(chains);
  j["chain_count"] = chains.size();
  j["stats"] = {{"alerts_parsed", stats.alerts_parsed},
                {"alerts_rejected", stats.alerts_rejected},
                {"merged_away", stats.merged_away},
                {"evidences", stats.evidences},
                {"mapped", stats.mapped},
                {"unmapped", stats.unmapped},
                {"signature_counts", stats.signature_counts}};
  return j.dump(2) + "\n";
}

}  // namespace ern
