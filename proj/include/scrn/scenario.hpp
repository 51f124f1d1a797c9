#pragma once

#include <cstdint>
#include <string_view>

#include "scrn/degree_models.hpp"

namespace scrn {

enum class HorizontalPolicy { Coalition, Pairs };
enum class CapacityMode { RealizedBalance, TheoreticalMean };

std::string_view policy_token(HorizontalPolicy policy);
HorizontalPolicy parse_policy_token(std::string_view token);
std::string_view capacity_mode_token(CapacityMode mode);
CapacityMode parse_capacity_mode_token(std::string_view token);

/// One experimental cell. Defaults are the 2:1:10, N_w = 100 baseline with
/// regular degrees everywhere and mean retailer in-degree 2.
struct ScenarioConfig {
  int n_wholesalers = 100;
  double ratio_alpha = 2.0;
  double ratio_beta = 10.0;
  // Every supplier trades with exactly this many wholesalers (regular).
  int supplier_out_degree = 1;
  // Shared by the wholesaler in- and out-degree.
  DegreeFamily wholesaler_dist = DegreeFamily::Regular;
  DegreeFamily retailer_dist = DegreeFamily::Regular;
  double retailer_mean_in_degree = 2.0;
  double rho = 0.0;
  bool ordered_matching = false;
  bool couple_degrees = true;
  HorizontalPolicy horizontal_policy = HorizontalPolicy::Coalition;
  CapacityMode capacity_mode = CapacityMode::RealizedBalance;
  int replications = 1000;
  std::uint64_t master_seed = 1;
  double gap_threshold = 0.05;

  std::int64_t repair_cap = 1'000'000;
  std::int64_t rejection_cap = 10'000;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct TierSizes {
  int n_suppliers = 0;
  int n_wholesalers = 0;
  int n_retailers = 0;

  double alpha() const { return static_cast<double>(n_suppliers) / n_wholesalers; }
  double beta() const { return static_cast<double>(n_retailers) / n_wholesalers; }
};

/// Tier counts implied by the config. Throws ConfigInvalid unless alpha*N_w
/// and beta*N_w are positive integers.
TierSizes tier_sizes(const ScenarioConfig& config);

/// Per-role degree specs with solved parameters; mean balance across tiers
/// (k_w^in = alpha k_s^out, k_w^out = beta k_r^in) holds by construction.
/// Power-law support is capped at the size of the opposite tier.
struct ScenarioDegreeSpecs {
  DegreeDistributionSpec supplier_out;
  DegreeDistributionSpec wholesaler_in;
  DegreeDistributionSpec wholesaler_out;
  DegreeDistributionSpec retailer_in;
};

ScenarioDegreeSpecs degree_specs(const ScenarioConfig& config);

/// Full validation; throws ConfigInvalid naming the violated constraint.
void validate(const ScenarioConfig& config);

}  // namespace scrn
