#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "scrn/degree_models.hpp"
#include "scrn/scenario.hpp"

namespace scrn {

struct Edge {
  int src = 0;
  int dst = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Bipartite multigraph between two adjacent tiers. Parallel edges are
/// distinct one-unit relationships.
struct BipartiteLayer {
  std::vector<Edge> edges;
  DegreeSequence upstream_degrees;
  DegreeSequence downstream_degrees;
};

/// Partition of wholesalers into capacity-sharing groups. Group ids are
/// dense and numbered by the lowest wholesaler id in each group.
struct HorizontalGroups {
  std::vector<int> group_of;
  int group_count = 0;
};

struct SupplyNetwork {
  TierSizes tiers;
  BipartiteLayer layer_sw;  // suppliers -> wholesalers
  BipartiteLayer layer_wr;  // wholesalers -> retailers
  HorizontalGroups groups;
};

/// Draws one sequence per tier and repairs them until their sums agree: each
/// repair step redraws one uniformly chosen node from each tier. Throws
/// ConfigInvalid if mean_up * n_up != mean_down * n_down and RepairExhausted
/// after `repair_cap` steps. `repair_steps`, when given, receives the count.
std::pair<DegreeSequence, DegreeSequence> draw_consistent_sequences(
    const DegreeSampler& up, const DegreeSampler& down, std::size_t n_up, std::size_t n_down,
    DegreeRole up_role, DegreeRole down_role, Rng& rng, std::int64_t repair_cap = 1'000'000,
    std::int64_t* repair_steps = nullptr);

/// Configuration-model pairing: a uniform permutation of downstream stubs is
/// matched to the upstream stubs.
BipartiteLayer match_stubs_random(const DegreeSequence& up, const DegreeSequence& down, Rng& rng);

/// Rank matching: repeatedly pairs the upstream and downstream nodes holding
/// the most unmatched stubs, lower id first on ties.
BipartiteLayer match_stubs_ordered(const DegreeSequence& up, const DegreeSequence& down);

/// Reassigns both sequences comonotonically: wholesaler 0 gets the largest
/// in- and out-degree, wholesaler 1 the next, and so on. Ties keep their
/// input order.
std::pair<DegreeSequence, DegreeSequence> couple_wholesaler_degrees(const DegreeSequence& in_seq,
                                                                    const DegreeSequence& out_seq);

/// |mean - target| / target <= threshold (inclusive).
bool mean_gap_ok(const DegreeSequence& seq, double target_mean, double threshold = 0.05);

HorizontalGroups assign_horizontal_groups(int n_wholesalers, double rho, HorizontalPolicy policy,
                                          Rng& rng);

struct NetworkSample {
  SupplyNetwork network;
  std::int64_t rejected_samples = 0;
  std::int64_t repair_steps = 0;
};

/// Holds the solved degree specs and samplers for one scenario so repeated
/// builds don't re-solve distribution parameters.
///
/// One build:
///   1. draw supplier-out / wholesaler-in and wholesaler-out / retailer-in
///      sequences, each pair repaired to equal sums;
///   2. reject and redraw the whole sample while the wholesaler-out or
///      retailer-in mean misses its target by more than the gap threshold;
///   3. if coupling is on, pair wholesaler in- and out-degrees by rank, then
///      relabel wholesalers with a uniform permutation (id carries no rank);
///   4. sort retailers by descending in-degree, so the allocation sweep
///      serves the largest orders first;
///   5. match the supplier layer randomly and the wholesaler layer randomly
///      or by rank, then assign horizontal groups.
class NetworkBuilder {
 public:
  explicit NetworkBuilder(const ScenarioConfig& config);

  NetworkSample build(Rng& rng) const;

  const ScenarioConfig& config() const { return config_; }
  const ScenarioDegreeSpecs& specs() const { return specs_; }
  const TierSizes& tiers() const { return tiers_; }

 private:
  ScenarioConfig config_;
  TierSizes tiers_;
  ScenarioDegreeSpecs specs_;
  DegreeSampler supplier_out_;
  DegreeSampler wholesaler_in_;
  DegreeSampler wholesaler_out_;
  DegreeSampler retailer_in_;
};

SupplyNetwork build_network(const ScenarioConfig& config, Rng& rng);

/// Realized degrees of each node in a layer, recomputed from the edge list.
std::vector<int> realized_out_degrees(const BipartiteLayer& layer, std::size_t n_up);
std::vector<int> realized_in_degrees(const BipartiteLayer& layer, std::size_t n_down);

/// Edge-list dump: `sw|wr<TAB>src<TAB>dst` per edge (sorted within each
/// layer), then `group<TAB>wholesaler<TAB>group_id` per wholesaler.
void write_edge_list(std::ostream& out, const SupplyNetwork& network);

}  // namespace scrn
