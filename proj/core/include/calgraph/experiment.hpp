#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "calgraph/caccioppoli.hpp"
#include "calgraph/structure.hpp"

namespace calgraph {

/// Declarative description of one experiment run.
struct ExperimentConfig {
  std::string tag;  // verify-metric | caccioppoli-sweep | dimension |
                    // structure-roundtrip | volume-fit | evolve
  FamilyConfig family;
  std::string family_name = "z1";

  std::string metric = "constructed";  // constructed | uniform-sigma
  double sigma = 1.0;                  // uniform-sigma edge length

  std::vector<double> radii;         // sweep / fit radii, ascending
  std::string mode = "both";         // continuous | discrete | both
  std::vector<std::string> fields;   // caccioppoli corpus entries
  std::string top = "one";           // hierarchy top for roundtrips
  double k = 1.0;
  std::vector<double> ks;            // dimension sweep (defaults to {k})
  int d = 1;
  std::vector<int> ds;               // dimension sweep (defaults to {d})
  int l = 1;
  int hops = 0;                      // 0 = auto-size the window
  double t_end = 1.0;                // evolve
  double dt = 0.01;                  // evolve

  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir = "out";
  std::string baseline_path;        // compare sweep ratios against this file
  std::string write_baseline_path;  // record sweep ratios into this file
};

/// Family shorthand: z1, z2, z3, z1n, z2n, wline1, wline2, starN.
FamilyConfig parse_family(const std::string& name);

ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

struct Table {
  std::string name;  // output file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct RunReport {
  std::string tag;
  std::vector<Table> tables;
  std::vector<std::string> messages;
  bool passed = true;
  double wall_seconds = 0.0;
};

/// Executes the configured experiment. Throws ConfigError / CoverageError /
/// ResourceError for malformed or oversized requests; a false `passed`
/// means an assertion inside the run failed.
RunReport run(const ExperimentConfig& config);

/// Writes <out_dir>/<table>.csv for every table plus summary.txt.
/// Files are written to a temporary name and renamed, never half-written.
void write_outputs(const RunReport& report, const std::string& out_dir);

/// Locale-independent "%.17g" (round-trip exact).
std::string format_double(double v);

const std::map<std::string, std::string>& experiment_explanations();
std::string list_families_text();

// window sized so that every ball of radius <= target is truncation-free;
// extra_hops adds marching margin
struct SizedWindow {
  std::shared_ptr<const GraphWindow> window;
  MetricData metric;
};
SizedWindow window_covering(const std::shared_ptr<GraphProvider>& provider,
                            double target, int extra_hops = 0);

}  // namespace calgraph
