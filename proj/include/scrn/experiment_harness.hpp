#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scrn/network_builder.hpp"
#include "scrn/scenario.hpp"

namespace scrn {

struct SummaryStats {
  double mean_ofr = 0.0;
  double std_error = 0.0;
  std::int64_t replications_used = 0;
  std::int64_t rejected_samples = 0;
};

/// Mean and standard error (sample sd / sqrt(n)); a single value has se 0.
SummaryStats summarize(std::span<const double> values);

/// Independent stream for one replication, a pure function of both inputs.
Rng replication_stream(std::uint64_t master_seed, std::uint64_t replication_index);

struct ReplicationOutcome {
  double ofr = 0.0;
  std::int64_t rejected_samples = 0;
};

ReplicationOutcome run_replication(const NetworkBuilder& builder, std::uint64_t replication_index);
double run_replication(const ScenarioConfig& config, std::uint64_t replication_index);

/// Per-replication OFR values, indexed by replication. `threads` == 0 picks
/// the hardware concurrency; the result does not depend on it.
std::vector<ReplicationOutcome> run_replications(const ScenarioConfig& config, unsigned threads = 0);

SummaryStats run_scenario(const ScenarioConfig& config, unsigned threads = 0);

/// One row of a result grid.
struct CellResult {
  std::string case_label;
  DegreeFamily wholesaler_dist = DegreeFamily::Regular;
  DegreeFamily retailer_dist = DegreeFamily::Regular;
  double retailer_mean = 0.0;
  double rho = 0.0;
  SummaryStats stats;
};

inline constexpr DegreeFamily kAllFamilies[] = {DegreeFamily::Regular,
                                                DegreeFamily::ZeroTruncatedPoisson,
                                                DegreeFamily::ZeroTruncatedPowerLaw};

/// Applies one of the table cases to `base`: a (mean 2, random), b (mean 2,
/// ordered), c (mean 4), d (mean 8). rho is forced to 0.
ScenarioConfig table1_case_config(const ScenarioConfig& base, char table_case);

/// All nine wholesaler/retailer family pairs for each requested case.
std::vector<CellResult> run_table1(const ScenarioConfig& base, std::string_view cases = "abcd",
                                   unsigned threads = 0);

std::vector<double> default_rho_grid();

/// Case-a settings swept over rho for all nine family pairs.
std::vector<CellResult> run_figure3_sweep(const ScenarioConfig& base, std::span<const double> rho_grid,
                                          unsigned threads = 0);

}  // namespace scrn
