#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ern/errors.hpp"
#include "ern/ingest.hpp"
#include "ern/network.hpp"
#include "ern/reasoner.hpp"

namespace ern {

struct ThroughputStats {
  std::uint64_t events_processed = 0;
  double wall_time = 0.0;          // seconds spent reasoning
  double events_per_second = 0.0;  // events_processed / wall_time
  std::map<std::string, double> per_stage;  // generate / reason / chains
};

// Throughput measurement: n seeded synthetic evidences (uniformly random
// vertex, ts = event index) through an untimed session. Event generation is
// deterministic for a given network and seed; only wall times vary.
inline ThroughputStats run_bench(const Network& network, std::uint64_t events,
                                 std::uint64_t seed) {
  if (events == 0) throw ValidationError("bench requires events >= 1");
  if (network.vertex_count() == 0)
    throw ValidationError("bench requires a non-empty network");

  using Clock = std::chrono::steady_clock;
  auto seconds = [](Clock::duration d) {
    return std::chrono::duration<double>(d).count();
  };

  ThroughputStats stats;

  const auto t0 = Clock::now();
  std::vector<VertexId> ids;
  ids.reserve(network.vertex_count());
  for (const auto& [id, v] : network.vertices()) ids.push_back(id);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
  std::vector<Evidence> evidences(events);
  for (std::uint64_t i = 0; i < events; ++i) {
    Evidence& e = evidences[i];
    e.evidence_id = i + 1;
    e.ts = static_cast<TimestampMs>(i);
    e.mapped_vertex = ids[pick(rng)];
    e.signature = "synthetic";
    e.merged_from.push_back("bench");
  }
  const auto t1 = Clock::now();

  ReasonerSession session(network, ReasonMode::Untimed);
  for (const Evidence& e : evidences) session.process(e);
  const auto t2 = Clock::now();

  const auto chains = session.generate_chains();
  const auto t3 = Clock::now();
  (void)chains;

  stats.events_processed = session.stats().processed;
  stats.wall_time = seconds(t2 - t1);
  if (stats.wall_time <= 0.0) stats.wall_time = 1e-9;  // clock granularity floor
  stats.events_per_second = static_cast<double>(stats.events_processed) / stats.wall_time;
  stats.per_stage = {{"generate", seconds(t1 - t0)},
                     {"reason", seconds(t2 - t1)},
                     {"chains", seconds(t3 - t2)}};
  return stats;
}

}  // namespace ern
