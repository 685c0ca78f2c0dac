// caloric-lab: config-driven experiment runner for the discrete heat-equation
// toolkit. Runs declarative experiments (metric verification, energy-ratio
// sweeps, dimension enumerations, roundtrips, volume fits, forward evolution)
// and emits CSV tables plus a plain-text summary.
//
// Exit codes: 0 all assertions passed, 1 assertion failure, 2 config error,
// 3 coverage/resource error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "calgraph/experiment.hpp"

namespace {

using calgraph::ExperimentConfig;

int run_and_emit(ExperimentConfig config) {
  auto report = calgraph::run(config);
  calgraph::write_outputs(report, config.out_dir);
  std::cout << "experiment: " << report.tag << "\n";
  for (const auto& m : report.messages) std::cout << "  " << m << "\n";
  std::cout << (report.passed ? "PASS" : "FAIL") << " ("
            << calgraph::format_double(report.wall_seconds) << " s), tables in "
            << config.out_dir << "\n";
  return report.passed ? 0 : 1;
}

void add_common_flags(CLI::App* cmd, ExperimentConfig& config,
                      std::string& family_name) {
  cmd->add_option("--family", family_name, "family id (see --list-families)");
  cmd->add_option("--metric", config.metric,
                  "constructed | uniform-sigma");
  cmd->add_option("--sigma", config.sigma, "uniform edge length");
  cmd->add_option("--radii", config.radii, "radii, ascending");
  cmd->add_option("--mode", config.mode, "continuous | discrete | both");
  cmd->add_option("--fields", config.fields, "field corpus entries");
  cmd->add_option("--top", config.top, "hierarchy top polynomial");
  cmd->add_option("--k", config.k, "growth rate");
  cmd->add_option("--ks", config.ks, "growth rates to sweep");
  cmd->add_option("--d", config.d, "lattice dimension");
  cmd->add_option("--ds", config.ds, "lattice dimensions to sweep");
  cmd->add_option("--l", config.l, "chain length");
  cmd->add_option("--hops", config.hops, "window hop radius (0 = auto)");
  cmd->add_option("--t-end", config.t_end, "integration end time");
  cmd->add_option("--dt", config.dt, "integration step");
  cmd->add_option("--seed", config.seed, "PRNG seed");
  cmd->add_option("--threads", config.threads, "worker threads");
  cmd->add_option("--out", config.out_dir, "output directory");
  cmd->add_option("--baseline", config.baseline_path,
                  "compare sweep ratios against this baseline file");
  cmd->add_option("--write-baseline", config.write_baseline_path,
                  "record sweep ratios into this baseline file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete heat-equation experiments on weighted graphs"};
  app.require_subcommand(0, 1);

  bool list_families = false;
  app.add_flag("--list-families", list_families, "describe graph families");
  std::string explain_tag;
  app.add_option("--explain", explain_tag, "describe an experiment tag");

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run a JSON experiment config");
  run_cmd->add_option("config", config_path, "config file path")->required();
  std::string run_out;
  std::uint64_t run_seed = 0;
  int run_threads = 0;
  run_cmd->add_option("--out", run_out, "override output directory");
  run_cmd->add_option("--seed", run_seed, "override PRNG seed");
  run_cmd->add_option("--threads", run_threads, "override worker threads");

  const std::vector<std::string> tags = {
      "verify-metric", "caccioppoli-sweep",   "dimension",
      "volume-fit",    "structure-roundtrip", "evolve"};
  struct SubState {
    CLI::App* cmd;
    ExperimentConfig config;
    std::string family_name = "z1";
  };
  std::vector<SubState> subs;
  subs.reserve(tags.size());
  for (const auto& tag : tags) {
    SubState s;
    s.cmd = app.add_subcommand(tag, calgraph::experiment_explanations().at(tag));
    s.config.tag = tag;
    subs.push_back(std::move(s));
  }
  for (auto& s : subs) add_common_flags(s.cmd, s.config, s.family_name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list_families) {
      std::cout << calgraph::list_families_text();
      return 0;
    }
    if (!explain_tag.empty()) {
      const auto& m = calgraph::experiment_explanations();
      auto it = m.find(explain_tag);
      if (it == m.end()) {
        std::cerr << "unknown experiment tag '" << explain_tag << "'\n";
        return 2;
      }
      std::cout << it->first << ": " << it->second << "\n";
      return 0;
    }

    if (run_cmd->parsed()) {
      auto config = calgraph::load_config_file(config_path);
      if (!run_out.empty()) config.out_dir = run_out;
      if (run_seed != 0) config.seed = run_seed;
      if (run_threads != 0) config.threads = run_threads;
      return run_and_emit(std::move(config));
    }

    for (auto& s : subs) {
      if (s.cmd->parsed()) {
        s.config.family = calgraph::parse_family(s.family_name);
        s.config.family_name = s.family_name;
        return run_and_emit(std::move(s.config));
      }
    }

    std::cout << app.help();
    return 0;
  } catch (const calgraph::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const calgraph::CoverageError& e) {
    std::cerr << "coverage error: " << e.what() << "\n";
    return 3;
  } catch (const calgraph::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const calgraph::IntegrationError& e) {
    std::cerr << "integration error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
