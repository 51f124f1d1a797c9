#include "scrn/allocation_engine.hpp"

#include <algorithm>

#include "scrn/error.hpp"

namespace scrn {

DemandVector retailer_demand(const SupplyNetwork& network) {
  DemandVector demand;
  demand.per_retailer.assign(static_cast<std::size_t>(network.tiers.n_retailers), 0);
  for (const Edge& e : network.layer_wr.edges) ++demand.per_retailer.at(static_cast<std::size_t>(e.dst));
  for (auto d : demand.per_retailer) demand.total += d;
  return demand;
}

double compute_supplier_capacity(const SupplyNetwork& network) {
  return static_cast<double>(retailer_demand(network).total) / network.tiers.n_suppliers;
}

double theoretical_supplier_capacity(const TierSizes& tiers, double retailer_mean_in_degree) {
  return tiers.beta() / tiers.alpha() * retailer_mean_in_degree;
}

double supplier_capacity(const SupplyNetwork& network, CapacityMode mode,
                         double retailer_mean_in_degree) {
  return mode == CapacityMode::RealizedBalance
             ? compute_supplier_capacity(network)
             : theoretical_supplier_capacity(network.tiers, retailer_mean_in_degree);
}

CapacityState initial_capacities(const SupplyNetwork& network, double supplier_capacity) {
  const auto n_w = static_cast<std::size_t>(network.tiers.n_wholesalers);
  const std::vector<int> in_degree = realized_in_degrees(network.layer_sw, n_w);

  CapacityState caps;
  caps.supplier_capacity = supplier_capacity;
  caps.wholesaler_capacity.resize(n_w);
  caps.group_of = network.groups.group_of;
  if (caps.group_of.size() != n_w) {
    // No grouping recorded: every wholesaler stands alone.
    caps.group_of.resize(n_w);
    for (std::size_t w = 0; w < n_w; ++w) caps.group_of[w] = static_cast<int>(w);
  }
  const int groups = n_w == 0 ? 0 : *std::max_element(caps.group_of.begin(), caps.group_of.end()) + 1;

  // Summing stub counts before scaling keeps a full coalition at exactly c_s * N_s.
  std::vector<std::int64_t> group_links(static_cast<std::size_t>(groups), 0);
  for (std::size_t w = 0; w < n_w; ++w) {
    caps.wholesaler_capacity[w] = in_degree[w] * supplier_capacity;
    group_links[static_cast<std::size_t>(caps.group_of[w])] += in_degree[w];
  }
  caps.group_capacity.resize(group_links.size());
  for (std::size_t g = 0; g < group_links.size(); ++g) {
    caps.group_capacity[g] = static_cast<double>(group_links[g]) * supplier_capacity;
  }
  return caps;
}

AllocationResult allocate(const SupplyNetwork& network, CapacityState caps,
                          const DemandVector& demand) {
  const auto n_r = static_cast<std::size_t>(network.tiers.n_retailers);
  const auto n_w = static_cast<std::size_t>(network.tiers.n_wholesalers);

  // Distinct linked wholesalers per retailer, ascending (CSR layout).
  std::vector<std::size_t> offset(n_r + 1, 0);
  for (const Edge& e : network.layer_wr.edges) ++offset[static_cast<std::size_t>(e.dst) + 1];
  for (std::size_t r = 0; r < n_r; ++r) offset[r + 1] += offset[r];
  std::vector<int> suppliers_of(network.layer_wr.edges.size());
  {
    std::vector<std::size_t> cursor(offset.begin(), offset.end() - 1);
    for (const Edge& e : network.layer_wr.edges) {
      suppliers_of[cursor[static_cast<std::size_t>(e.dst)]++] = e.src;
    }
  }

  AllocationResult result;
  result.total_demand = static_cast<double>(demand.total);
  result.shortfall_per_retailer.assign(n_r, 0.0);
  result.shipped_per_wholesaler.assign(n_w, 0.0);

  for (std::size_t r = 0; r < n_r; ++r) {
    const auto first = suppliers_of.begin() + static_cast<std::ptrdiff_t>(offset[r]);
    auto last = suppliers_of.begin() + static_cast<std::ptrdiff_t>(offset[r + 1]);
    std::sort(first, last);
    last = std::unique(first, last);

    double remaining = static_cast<double>(demand.per_retailer.at(r));
    for (auto it = first; it != last && remaining > 0.0; ++it) {
      const auto w = static_cast<std::size_t>(*it);
      double& pool = caps.group_capacity[static_cast<std::size_t>(caps.group_of[w])];
      if (pool <= kVolumeTolerance) continue;
      const double take = std::min(remaining, pool);
      pool -= take;
      remaining -= take;
      result.shipped_per_wholesaler[w] += take;
      if (remaining <= kVolumeTolerance) remaining = 0.0;
    }
    result.shortfall_per_retailer[r] = remaining;
    result.unfulfilled += remaining;
  }
  result.ofr = result.total_demand > 0.0 ? compute_ofr(result) : 0.0;
  return result;
}

double compute_ofr(double unfulfilled, double total_demand) {
  if (!(total_demand > 0.0)) throw Error(ErrorKind::ZeroDemand, "OFR undefined for zero demand");
  const double ofr = 1.0 - unfulfilled / total_demand;
  return std::clamp(ofr, 0.0, 1.0);
}

double compute_ofr(const AllocationResult& result) {
  return compute_ofr(result.unfulfilled, result.total_demand);
}

AllocationResult simulate_allocation(const SupplyNetwork& network, CapacityMode mode,
                                     double retailer_mean_in_degree) {
  const DemandVector demand = retailer_demand(network);
  const double c_s = supplier_capacity(network, mode, retailer_mean_in_degree);
  return allocate(network, initial_capacities(network, c_s), demand);
}

}  // namespace scrn
