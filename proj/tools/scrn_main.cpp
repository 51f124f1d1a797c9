// Command-line front end for the supply-chain random network simulator.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "scrn/config_io.hpp"
#include "scrn/error.hpp"
#include "scrn/experiment_harness.hpp"
#include "scrn/network_builder.hpp"
#include "scrn/version.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kSimulationError = 3,
  kIoError = 4,
};

int exit_code_for(scrn::ErrorKind kind) {
  switch (kind) {
    case scrn::ErrorKind::ParseError:
    case scrn::ErrorKind::ConfigInvalid:
    case scrn::ErrorKind::NonBracketable:
    case scrn::ErrorKind::LengthMismatch:
      return kConfigError;
    case scrn::ErrorKind::IoError:
      return kIoError;
    default:
      return kSimulationError;
  }
}

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::string out = "-";
  std::string format = "csv";
  unsigned threads = 0;
};

scrn::ScenarioConfig apply_overrides(scrn::ScenarioConfig config, const GlobalOptions& opts) {
  if (opts.seed) config.master_seed = *opts.seed;
  if (opts.reps) config.replications = *opts.reps;
  scrn::validate(config);
  return config;
}

scrn::ScenarioConfig load_base(const std::string& path) {
  return path.empty() ? scrn::ScenarioConfig{} : scrn::parse_config(path);
}

void emit(const std::vector<scrn::CellResult>& cells, const scrn::ScenarioConfig& config,
          const std::string& command, const GlobalOptions& opts) {
  const scrn::RunManifest manifest{std::string(scrn::kVersion), command, config,
                                   scrn::current_timestamp()};
  scrn::emit_results(cells, scrn::parse_output_format(opts.format), manifest, opts.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supply-chain random network simulator: order fulfillment rate experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(scrn::kVersion));

  GlobalOptions opts;
  app.add_option("--seed", opts.seed, "Master seed (overrides the config)");
  app.add_option("--reps", opts.reps, "Replications per cell (overrides the config)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", opts.out, "Output path, '-' for stdout");
  app.add_option("--format", opts.format, "Result format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", opts.threads, "Worker threads, 0 = hardware concurrency");

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run a single scenario from a config file");
  run->add_option("config", run_config, "Scenario config file")->required()->check(CLI::ExistingFile);

  std::string table_case = "all";
  std::string table_config;
  auto* table1 = app.add_subcommand("table1", "Nine distribution pairs for cases a-d");
  table1->add_option("--case", table_case, "Case to run")->check(CLI::IsMember({"a", "b", "c", "d", "all"}));
  table1->add_option("--config", table_config, "Base config (defaults to the 2:1:10 baseline)")
      ->check(CLI::ExistingFile);

  std::vector<double> grid;
  std::string sweep_config;
  auto* figure3 = app.add_subcommand("figure3", "Sweep the share of horizontally linked wholesalers");
  figure3->add_option("--grid", grid, "Comma-separated rho values in [0, 1]")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  figure3->add_option("--config", sweep_config, "Base config (defaults to the 2:1:10 baseline)")
      ->check(CLI::ExistingFile);

  std::string dump_config;
  auto* dump = app.add_subcommand("dump-network", "Write one network sample as an edge list");
  dump->add_option("config", dump_config, "Scenario config file")->required()->check(CLI::ExistingFile);

  for (auto* sub : {run, table1, figure3, dump}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto config = apply_overrides(scrn::parse_config(run_config), opts);
      const std::vector<scrn::CellResult> cells{{"run", config.wholesaler_dist, config.retailer_dist,
                                                 config.retailer_mean_in_degree, config.rho,
                                                 scrn::run_scenario(config, opts.threads)}};
      emit(cells, config, "run", opts);
    } else if (*table1) {
      const auto base = apply_overrides(load_base(table_config), opts);
      const std::string cases = table_case == "all" ? "abcd" : table_case;
      emit(scrn::run_table1(base, cases, opts.threads), base, "table1 --case " + table_case, opts);
    } else if (*figure3) {
      const auto base = apply_overrides(load_base(sweep_config), opts);
      if (grid.empty()) grid = scrn::default_rho_grid();
      emit(scrn::run_figure3_sweep(base, grid, opts.threads), base, "figure3", opts);
    } else if (*dump) {
      const auto config = apply_overrides(scrn::parse_config(dump_config), opts);
      scrn::Rng rng = scrn::replication_stream(config.master_seed, 0);
      const auto network = scrn::build_network(config, rng);
      if (opts.out == "-") {
        scrn::write_edge_list(std::cout, network);
      } else {
        std::ofstream file(opts.out, std::ios::binary);
        if (!file) throw scrn::Error(scrn::ErrorKind::IoError, "cannot open output file " + opts.out);
        scrn::write_edge_list(file, network);
        if (!file.flush()) throw scrn::Error(scrn::ErrorKind::IoError, "failed writing " + opts.out);
      }
    }
  } catch (const scrn::Error& e) {
    std::cerr << "scrn: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "scrn: " << e.what() << '\n';
    return kSimulationError;
  }
  return kOk;
}
