#pragma once

#include <cstdint>
#include <vector>

#include "scrn/network_builder.hpp"
#include "scrn/scenario.hpp"

namespace scrn {

/// Volumes below this are treated as zero when comparing capacity and demand.
inline constexpr double kVolumeTolerance = 1e-9;

struct CapacityState {
  double supplier_capacity = 0.0;
  std::vector<double> wholesaler_capacity;  // k_w^in * c_s
  std::vector<int> group_of;
  std::vector<double> group_capacity;       // remaining, per group
};

struct DemandVector {
  std::vector<std::int64_t> per_retailer;
  std::int64_t total = 0;
};

struct AllocationResult {
  double total_demand = 0.0;
  double unfulfilled = 0.0;
  double ofr = 0.0;
  std::vector<double> shortfall_per_retailer;
  std::vector<double> shipped_per_wholesaler;
};

/// Realized retailer demand: one unit per wholesaler link.
DemandVector retailer_demand(const SupplyNetwork& network);

/// c_s = D / N_s, so total supply equals realized total demand.
double compute_supplier_capacity(const SupplyNetwork& network);

/// c_s = (beta / alpha) * nominal mean retailer in-degree.
double theoretical_supplier_capacity(const TierSizes& tiers, double retailer_mean_in_degree);

double supplier_capacity(const SupplyNetwork& network, CapacityMode mode,
                         double retailer_mean_in_degree);

CapacityState initial_capacities(const SupplyNetwork& network, double supplier_capacity);

/// Sequential allocation. Retailers are served in id order; each one draws
/// from its linked wholesalers in ascending id, taking min(remaining demand,
/// remaining group capacity) per wholesaler. Whatever is left after the last
/// linked wholesaler is unfulfilled. `caps` is consumed.
AllocationResult allocate(const SupplyNetwork& network, CapacityState caps,
                          const DemandVector& demand);

/// 1 - e / D. Throws ZeroDemand when D == 0.
double compute_ofr(double unfulfilled, double total_demand);
double compute_ofr(const AllocationResult& result);

/// Demand, capacities and allocation in one call.
AllocationResult simulate_allocation(const SupplyNetwork& network,
                                     CapacityMode mode = CapacityMode::RealizedBalance,
                                     double retailer_mean_in_degree = 0.0);

}  // namespace scrn
