// Command-line front end: build networks from topology + catalog knowledge,
// correlate alert streams into attack chains, benchmark throughput, and
// validate input documents. Exit code 0 means the pipeline ran (even with
// zero chains); nonzero means bad input or a broken contract.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ern/ern.hpp"

namespace {

ern::Network load_network_file(const std::string& path) {
  return ern::parse_network(ern::read_text_file(path));
}

int cmd_build(const std::string& topology_path, const std::string& catalog_path,
              const std::string& out_path, const std::string& dot_path,
              std::size_t queue_capacity) {
  const ern::Topology topo = ern::topology_from_json(
      ern::parse_json(ern::read_text_file(topology_path), "topology"));
  const ern::Catalog catalog = ern::catalog_from_json(
      ern::parse_json(ern::read_text_file(catalog_path), "catalog"));
  const ern::Network net = ern::build_network(topo, catalog, queue_capacity);
  ern::write_text_file(out_path, ern::serialize_network(net));
  if (!dot_path.empty()) ern::write_text_file(dot_path, ern::network_to_dot(net));
  std::cerr << "built network: " << net.vertex_count() << " vertices, "
            << net.link_count() << " links -> " << out_path << "\n";
  return 0;
}

int cmd_reason(const std::string& ern_path, const std::string& alerts_path,
               const std::string& sigmap_path, const std::string& mode_name,
               double merge_window_s, const std::string& out_path,
               const std::string& dot_path) {
  ern::Network net = load_network_file(ern_path);
  const ern::SignatureMap sigmap = ern::sigmap_from_json(
      ern::parse_json(ern::read_text_file(sigmap_path), "signature map"));

  ern::PipelineOptions opt;
  if (mode_name == "timed") {
    opt.mode = ern::ReasonMode::Timed;
  } else if (mode_name == "untimed") {
    opt.mode = ern::ReasonMode::Untimed;
  } else {
    throw ern::ValidationError("mode must be 'timed' or 'untimed', got '" +
                               mode_name + "'");
  }
  if (merge_window_s < 0)
    throw ern::ValidationError("merge window must be >= 0 seconds");
  opt.merge_window_ms =
      static_cast<ern::TimestampMs>(std::llround(merge_window_s * 1000.0));

  ern::PipelineResult res;
  if (alerts_path == "-") {
    res = ern::run_pipeline(std::move(net), std::cin, sigmap, opt);
  } else {
    std::istringstream alerts(ern::read_text_file(alerts_path));
    res = ern::run_pipeline(std::move(net), alerts, sigmap, opt);
  }

  const std::string report = ern::report_json(res.chains, res.ingest);
  if (out_path.empty() || out_path == "-") {
    std::cout << report;
  } else {
    ern::write_text_file(out_path, report);
  }
  if (!dot_path.empty()) ern::write_text_file(dot_path, ern::to_dot(res.chains));

  for (const std::string& d : res.ingest.diagnostics) std::cerr << d << "\n";
  std::cerr << "alerts: " << res.ingest.alerts_parsed << " parsed, "
            << res.ingest.alerts_rejected << " rejected, "
            << res.ingest.merged_away << " merged away; evidences: "
            << res.ingest.evidences << " (" << res.ingest.mapped << " mapped, "
            << res.ingest.unmapped << " unmapped); chains: "
            << res.chains.size() << "; virtual records: "
            << res.session.virtual_records << "; promotions: "
            << res.session.promotions << "\n";
  return 0;
}

int cmd_bench(const std::string& ern_path, std::uint64_t events,
              std::uint64_t seed) {
  const ern::Network net = load_network_file(ern_path);
  const ern::ThroughputStats stats = ern::run_bench(net, events, seed);
  nlohmann::json j{{"events_processed", stats.events_processed},
                   {"wall_time", stats.wall_time},
                   {"events_per_second", stats.events_per_second},
                   {"per_stage", stats.per_stage}};
  std::cout << j.dump(2) << "\n";
  std::cerr << "bench: " << stats.events_processed << " events in "
            << stats.wall_time << " s\n";
  return 0;
}

int cmd_validate(const std::string& topology_path,
                 const std::string& catalog_path, const std::string& ern_path,
                 const std::string& sigmap_path,
                 const std::string& alerts_path) {
  int failures = 0;
  ern::Topology topo;
  bool have_topo = false;
  ern::Network net;
  bool have_net = false;

  auto check = [&failures](const std::string& path, auto&& fn) {
    try {
      fn();
      std::cout << path << ": ok\n";
    } catch (const std::exception& ex) {
      std::cout << path << ": INVALID: " << ex.what() << "\n";
      ++failures;
    }
  };

  if (!topology_path.empty())
    check(topology_path, [&] {
      topo = ern::topology_from_json(
          ern::parse_json(ern::read_text_file(topology_path), "topology"));
      have_topo = true;
    });
  if (!catalog_path.empty())
    check(catalog_path, [&] {
      const ern::Catalog cat = ern::catalog_from_json(
          ern::parse_json(ern::read_text_file(catalog_path), "catalog"));
      // With the topology present the pair can be checked end to end.
      if (have_topo) ern::build_network(topo, cat);
    });
  if (!ern_path.empty())
    check(ern_path, [&] {
      net = load_network_file(ern_path);
      have_net = true;
    });
  if (!sigmap_path.empty())
    check(sigmap_path, [&] {
      const ern::SignatureMap m = ern::sigmap_from_json(
          ern::parse_json(ern::read_text_file(sigmap_path), "signature map"));
      if (have_net) ern::validate_sigmap(net, m);
    });
  if (!alerts_path.empty())
    check(alerts_path, [&] {
      std::istringstream in(ern::read_text_file(alerts_path));
      std::string line;
      std::size_t lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
          ern::normalize_alert(
              ern::raw_alert_from_json(ern::parse_json(line, "alert")));
        } catch (const ern::Error& ex) {
          throw ern::ValidationError("line " + std::to_string(lineno) + ": " +
                                     ex.what());
        }
      }
    });
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evidence reasoning network toolkit"};
  app.require_subcommand(1);

  std::string topology_path, catalog_path, ern_path, alerts_path, sigmap_path;
  std::string out_path, dot_path;
  std::string mode_name = "untimed";
  double merge_window_s = 2.0;
  std::size_t queue_capacity = 8;
  std::uint64_t events = 10000;
  std::uint64_t seed = 1;

  CLI::App* build = app.add_subcommand(
      "build", "construct a network from topology and vulnerability knowledge");
  build->add_option("--topology", topology_path, "topology JSON")->required();
  build->add_option("--catalog", catalog_path, "vulnerability catalog JSON")->required();
  build->add_option("--out", out_path, "output network JSON")->required();
  build->add_option("--dot", dot_path, "also render the network as DOT");
  build->add_option("--queue-capacity", queue_capacity,
                    "evidence queue capacity per vertex (default 8)");

  CLI::App* reason = app.add_subcommand(
      "reason", "correlate an alert stream into attack chains");
  reason->add_option("--ern", ern_path, "network JSON")->required();
  reason->add_option("--alerts", alerts_path, "NDJSON alerts ('-' for stdin)")->required();
  reason->add_option("--sigmap", sigmap_path, "signature map JSON")->required();
  reason->add_option("--mode", mode_name, "timed|untimed (default untimed)");
  reason->add_option("--merge-window", merge_window_s,
                     "duplicate merge window in seconds (default 2)");
  reason->add_option("--out", out_path, "report JSON ('-' or empty for stdout)");
  reason->add_option("--dot", dot_path, "also render chains as DOT");

  CLI::App* bench = app.add_subcommand("bench", "measure reasoning throughput");
  bench->add_option("--ern", ern_path, "network JSON")->required();
  bench->add_option("--events", events, "synthetic event count (default 10000)");
  bench->add_option("--seed", seed, "random seed (default 1)");

  CLI::App* validate = app.add_subcommand(
      "validate", "check input documents without running anything");
  validate->add_option("--topology", topology_path, "topology JSON");
  validate->add_option("--catalog", catalog_path, "catalog JSON");
  validate->add_option("--ern", ern_path, "network JSON");
  validate->add_option("--sigmap", sigmap_path, "signature map JSON");
  validate->add_option("--alerts", alerts_path, "NDJSON alerts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed())
      return cmd_build(topology_path, catalog_path, out_path, dot_path,
                       queue_capacity);
    if (reason->parsed())
      return cmd_reason(ern_path, alerts_path, sigmap_path, mode_name,
                        merge_window_s, out_path, dot_path);
    if (bench->parsed()) return cmd_bench(ern_path, events, seed);
    if (validate->parsed()) {
      if (topology_path.empty() && catalog_path.empty() && ern_path.empty() &&
          sigmap_path.empty() && alerts_path.empty()) {
        std::cerr << "validate: nothing to do; pass at least one document\n";
        return 2;
      }
      return cmd_validate(topology_path, catalog_path, ern_path, sigmap_path,
                          alerts_path);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
