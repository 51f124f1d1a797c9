#include "scrn/experiment_harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "scrn/allocation_engine.hpp"
#include "scrn/error.hpp"

namespace scrn {

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptyInput, "cannot summarize an empty sample");
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double squares = 0.0;
  for (double v : values) squares += (v - mean) * (v - mean);

  SummaryStats stats;
  stats.mean_ofr = mean;
  stats.std_error = values.size() > 1 ? std::sqrt(squares / (n - 1.0)) / std::sqrt(n) : 0.0;
  stats.replications_used = static_cast<std::int64_t>(values.size());
  return stats;
}

Rng replication_stream(std::uint64_t master_seed, std::uint64_t replication_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(replication_index),
                    static_cast<std::uint32_t>(replication_index >> 32)};
  return Rng(seq);
}

ReplicationOutcome run_replication(const NetworkBuilder& builder, std::uint64_t replication_index) {
  Rng rng = replication_stream(builder.config().master_seed, replication_index);
  const NetworkSample sample = builder.build(rng);
  const AllocationResult result =
      simulate_allocation(sample.network, builder.config().capacity_mode,
                          builder.config().retailer_mean_in_degree);
  return {result.ofr, sample.rejected_samples};
}

double run_replication(const ScenarioConfig& config, std::uint64_t replication_index) {
  return run_replication(NetworkBuilder(config), replication_index).ofr;
}

std::vector<ReplicationOutcome> run_replications(const ScenarioConfig& config, unsigned threads) {
  const NetworkBuilder builder(config);
  const auto reps = static_cast<std::size_t>(config.replications);
  std::vector<ReplicationOutcome> outcomes(reps);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, reps));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < reps; i = next++) {
      try {
        outcomes[i] = run_replication(builder, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = reps;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

SummaryStats run_scenario(const ScenarioConfig& config, unsigned threads) {
  const auto outcomes = run_replications(config, threads);
  std::vector<double> ofr;
  ofr.reserve(outcomes.size());
  std::int64_t rejected = 0;
  for (const auto& o : outcomes) {
    ofr.push_back(o.ofr);
    rejected += o.rejected_samples;
  }
  SummaryStats stats = summarize(ofr);
  stats.rejected_samples = rejected;
  return stats;
}

ScenarioConfig table1_case_config(const ScenarioConfig& base, char table_case) {
  ScenarioConfig config = base;
  config.rho = 0.0;
  config.ordered_matching = false;
  switch (table_case) {
    case 'a': config.retailer_mean_in_degree = 2.0; break;
    case 'b':
      config.retailer_mean_in_degree = 2.0;
      config.ordered_matching = true;
      break;
    case 'c': config.retailer_mean_in_degree = 4.0; break;
    case 'd': config.retailer_mean_in_degree = 8.0; break;
    default:
      throw Error(ErrorKind::ConfigInvalid, std::string("unknown table case '") + table_case + "'");
  }
  return config;
}

std::vector<CellResult> run_table1(const ScenarioConfig& base, std::string_view cases, unsigned threads) {
  std::vector<CellResult> cells;
  for (char c : cases) {
    const ScenarioConfig case_config = table1_case_config(base, c);
    for (DegreeFamily wholesaler : kAllFamilies) {
      for (DegreeFamily retailer : kAllFamilies) {
        ScenarioConfig config = case_config;
        config.wholesaler_dist = wholesaler;
        config.retailer_dist = retailer;
        cells.push_back({std::string(1, c), wholesaler, retailer, config.retailer_mean_in_degree,
                         config.rho, run_scenario(config, threads)});
      }
    }
  }
  return cells;
}

std::vector<double> default_rho_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

std::vector<CellResult> run_figure3_sweep(const ScenarioConfig& base, std::span<const double> rho_grid,
                                          unsigned threads) {
  const ScenarioConfig case_a = table1_case_config(base, 'a');
  std::vector<CellResult> cells;
  for (DegreeFamily wholesaler : kAllFamilies) {
    for (DegreeFamily retailer : kAllFamilies) {
      for (double rho : rho_grid) {
        if (!(rho >= 0.0 && rho <= 1.0)) throw Error(ErrorKind::ConfigInvalid, "rho must lie in [0, 1]");
        ScenarioConfig config = case_a;
        config.wholesaler_dist = wholesaler;
        config.retailer_dist = retailer;
        config.rho = rho;
        cells.push_back({"fig3", wholesaler, retailer, config.retailer_mean_in_degree, rho,
                         run_scenario(config, threads)});
      }
    }
  }
  return cells;
}

}  // namespace scrn
