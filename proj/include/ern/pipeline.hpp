#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "ern/ingest.hpp"
#include "ern/network.hpp"
#include "ern/reasoner.hpp"
#include "ern/serialize.hpp"

namespace ern {

struct PipelineOptions {
  ReasonMode mode = ReasonMode::Untimed;
  TimestampMs merge_window_ms = 2000;
};

struct PipelineResult {
  std::vector<EvidenceChain> chains;
  IngestStats ingest;
  SessionStats session;
};

// Full alert-to-chains run: parse NDJSON alerts, normalize, sort by ts
// (stable, so ties keep arrival order), merge duplicates, assign evidence
// ids, map signatures to vertices, reason, generate chains. Malformed lines
// and unmapped evidences are counted, never fatal.
inline PipelineResult run_pipeline(Network network, std::istream& alerts,
                                   const SignatureMap& sigmap,
                                   const PipelineOptions& opt = {}) {
  validate_sigmap(network, sigmap);

  PipelineResult res;
  std::vector<Evidence> evidences;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(alerts, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const RawAlert raw = raw_alert_from_json(parse_json(line, "alert"));
      evidences.push_back(normalize_alert(raw));
      ++res.ingest.alerts_parsed;
    } catch (const Error& ex) {
      ++res.ingest.alerts_rejected;
      res.ingest.diagnostics.push_back("alert line " + std::to_string(lineno) +
                                       " rejected: " + ex.what());
    }
  }

  std::stable_sort(evidences.begin(), evidences.end(),
                   [](const Evidence& a, const Evidence& b) { return a.ts < b.ts; });
  evidences = merge_duplicates(std::move(evidences), opt.merge_window_ms,
                               &res.ingest.merged_away);
  res.ingest.evidences = evidences.size();

  ReasonerSession session(std::move(network), opt.mode);
  std::uint64_t next_id = 1;
  for (Evidence& e : evidences) {
    e.evidence_id = next_id++;
    e = map_evidence(session.network(), sigmap, std::move(e));
    if (e.mapped_vertex) {
      ++res.ingest.mapped;
    } else {
      ++res.ingest.unmapped;
    }
    ++res.ingest.signature_counts[e.signature];
    session.process(e);
  }

  res.chains = session.generate_chains();
  res.session = session.stats();
  return res;
}

}  // namespace ern
