#include "scrn/network_builder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <queue>
#include <string>

#include "scrn/error.hpp"

namespace scrn {

namespace {

void require_equal_sums(const DegreeSequence& up, const DegreeSequence& down) {
  if (up.sum() != down.sum()) {
    throw Error(ErrorKind::ConfigInvalid,
                "stub sums differ: " + std::to_string(up.sum()) + " vs " + std::to_string(down.sum()));
  }
}

// Max-heap entry: more remaining stubs first, then lower id.
struct StubCount {
  int remaining;
  int id;
  bool operator<(const StubCount& other) const {
    if (remaining != other.remaining) return remaining < other.remaining;
    return id > other.id;
  }
};

std::priority_queue<StubCount> stub_heap(const DegreeSequence& seq) {
  std::vector<StubCount> entries;
  entries.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq.degrees[i] > 0) entries.push_back({seq.degrees[i], static_cast<int>(i)});
  }
  return std::priority_queue<StubCount>(std::less<StubCount>{}, std::move(entries));
}

HorizontalGroups canonical_groups(const std::vector<int>& raw) {
  HorizontalGroups groups;
  groups.group_of.assign(raw.size(), -1);
  std::vector<int> relabel(raw.size(), -1);
  for (std::size_t w = 0; w < raw.size(); ++w) {
    auto& label = relabel[static_cast<std::size_t>(raw[w])];
    if (label < 0) label = groups.group_count++;
    groups.group_of[w] = label;
  }
  return groups;
}

// Applies one uniform permutation to both sequences, keeping each
// (in, out) pair together while decoupling node id from degree rank.
void shuffle_pairs(DegreeSequence& in_seq, DegreeSequence& out_seq, Rng& rng) {
  std::vector<std::size_t> perm(in_seq.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  const std::vector<int> in_copy = in_seq.degrees;
  const std::vector<int> out_copy = out_seq.degrees;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    in_seq.degrees[i] = in_copy[perm[i]];
    out_seq.degrees[i] = out_copy[perm[i]];
  }
}

}  // namespace

std::pair<DegreeSequence, DegreeSequence> draw_consistent_sequences(
    const DegreeSampler& up, const DegreeSampler& down, std::size_t n_up, std::size_t n_down,
    DegreeRole up_role, DegreeRole down_role, Rng& rng, std::int64_t repair_cap,
    std::int64_t* repair_steps) {
  if (n_up == 0 || n_down == 0) {
    throw Error(ErrorKind::ConfigInvalid, "tiers must contain at least one node");
  }
  const double expected_up = up.spec().target_mean * static_cast<double>(n_up);
  const double expected_down = down.spec().target_mean * static_cast<double>(n_down);
  if (std::abs(expected_up - expected_down) > 1e-9 * std::max(expected_up, expected_down)) {
    throw Error(ErrorKind::ConfigInvalid,
                "mean * size differs between tiers: " + std::to_string(expected_up) + " vs " +
                    std::to_string(expected_down));
  }

  auto up_seq = sample_degree_sequence(up, n_up, up_role, rng);
  auto down_seq = sample_degree_sequence(down, n_down, down_role, rng);
  std::int64_t gap = up_seq.sum() - down_seq.sum();
  std::uniform_int_distribution<std::size_t> pick_up(0, n_up - 1);
  std::uniform_int_distribution<std::size_t> pick_down(0, n_down - 1);
  std::int64_t steps = 0;
  while (gap != 0) {
    if (steps >= repair_cap) {
      if (repair_steps) *repair_steps = steps;
      throw Error(ErrorKind::RepairExhausted,
                  "degree sums still differ by " + std::to_string(gap) + " after " +
                      std::to_string(steps) + " redraws");
    }
    ++steps;
    int& u = up_seq.degrees[pick_up(rng)];
    int& d = down_seq.degrees[pick_down(rng)];
    gap -= u - d;
    u = up(rng);
    d = down(rng);
    gap += u - d;
  }
  if (repair_steps) *repair_steps = steps;
  return {std::move(up_seq), std::move(down_seq)};
}

BipartiteLayer match_stubs_random(const DegreeSequence& up, const DegreeSequence& down, Rng& rng) {
  require_equal_sums(up, down);
  std::vector<int> down_stubs;
  down_stubs.reserve(static_cast<std::size_t>(down.sum()));
  for (std::size_t j = 0; j < down.size(); ++j) {
    down_stubs.insert(down_stubs.end(), static_cast<std::size_t>(down.degrees[j]), static_cast<int>(j));
  }
  std::shuffle(down_stubs.begin(), down_stubs.end(), rng);

  BipartiteLayer layer;
  layer.upstream_degrees = up;
  layer.downstream_degrees = down;
  layer.edges.reserve(down_stubs.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < up.size(); ++i) {
    for (int s = 0; s < up.degrees[i]; ++s) {
      layer.edges.push_back({static_cast<int>(i), down_stubs[next++]});
    }
  }
  return layer;
}

BipartiteLayer match_stubs_ordered(const DegreeSequence& up, const DegreeSequence& down) {
  require_equal_sums(up, down);
  BipartiteLayer layer;
  layer.upstream_degrees = up;
  layer.downstream_degrees = down;
  layer.edges.reserve(static_cast<std::size_t>(up.sum()));

  auto up_heap = stub_heap(up);
  auto down_heap = stub_heap(down);
  while (!up_heap.empty()) {
    StubCount u = up_heap.top();
    StubCount d = down_heap.top();
    up_heap.pop();
    down_heap.pop();
    layer.edges.push_back({u.id, d.id});
    if (--u.remaining > 0) up_heap.push(u);
    if (--d.remaining > 0) down_heap.push(d);
  }
  return layer;
}

std::pair<DegreeSequence, DegreeSequence> couple_wholesaler_degrees(const DegreeSequence& in_seq,
                                                                    const DegreeSequence& out_seq) {
  if (in_seq.size() != out_seq.size()) {
    throw Error(ErrorKind::LengthMismatch, "wholesaler in/out sequences differ in length");
  }
  DegreeSequence in_sorted = in_seq;
  DegreeSequence out_sorted = out_seq;
  std::stable_sort(in_sorted.degrees.begin(), in_sorted.degrees.end(), std::greater<>{});
  std::stable_sort(out_sorted.degrees.begin(), out_sorted.degrees.end(), std::greater<>{});
  return {std::move(in_sorted), std::move(out_sorted)};
}

bool mean_gap_ok(const DegreeSequence& seq, double target_mean, double threshold) {
  const double gap = std::abs(seq.mean() - target_mean) / target_mean;
  // Boundary is inclusive; the slack absorbs rounding in the division.
  return gap <= threshold + 1e-12;
}

HorizontalGroups assign_horizontal_groups(int n_wholesalers, double rho, HorizontalPolicy policy,
                                          Rng& rng) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw Error(ErrorKind::ConfigInvalid, "rho must lie in [0, 1]");
  const auto n = static_cast<std::size_t>(n_wholesalers);
  const auto selected_count = static_cast<std::size_t>(std::lround(rho * n_wholesalers));

  std::vector<int> raw(n);
  std::iota(raw.begin(), raw.end(), 0);
  if (selected_count < 2) return canonical_groups(raw);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(selected_count);

  if (policy == HorizontalPolicy::Coalition) {
    const int anchor = *std::min_element(order.begin(), order.end());
    for (int w : order) raw[static_cast<std::size_t>(w)] = anchor;
  } else {
    for (std::size_t i = 0; i + 1 < order.size(); i += 2) {
      const int anchor = std::min(order[i], order[i + 1]);
      raw[static_cast<std::size_t>(order[i])] = anchor;
      raw[static_cast<std::size_t>(order[i + 1])] = anchor;
    }
  }
  return canonical_groups(raw);
}

NetworkBuilder::NetworkBuilder(const ScenarioConfig& config)
    : config_(config),
      tiers_((validate(config), tier_sizes(config))),
      specs_(degree_specs(config)),
      supplier_out_(specs_.supplier_out),
      wholesaler_in_(specs_.wholesaler_in),
      wholesaler_out_(specs_.wholesaler_out),
      retailer_in_(specs_.retailer_in) {}

NetworkSample NetworkBuilder::build(Rng& rng) const {
  const auto n_s = static_cast<std::size_t>(tiers_.n_suppliers);
  const auto n_w = static_cast<std::size_t>(tiers_.n_wholesalers);
  const auto n_r = static_cast<std::size_t>(tiers_.n_retailers);

  NetworkSample sample;
  for (std::int64_t consecutive = 0;; ++consecutive) {
    if (consecutive > config_.rejection_cap) {
      throw Error(ErrorKind::RejectionExhausted,
                  std::to_string(consecutive) + " consecutive samples failed the mean-gap filter");
    }
    std::int64_t steps = 0;
    auto [supplier_out, wholesaler_in] =
        draw_consistent_sequences(supplier_out_, wholesaler_in_, n_s, n_w, DegreeRole::SupplierOut,
                                  DegreeRole::WholesalerIn, rng, config_.repair_cap, &steps);
    sample.repair_steps += steps;
    auto [wholesaler_out, retailer_in] =
        draw_consistent_sequences(wholesaler_out_, retailer_in_, n_w, n_r, DegreeRole::WholesalerOut,
                                  DegreeRole::RetailerIn, rng, config_.repair_cap, &steps);
    sample.repair_steps += steps;

    if (!mean_gap_ok(wholesaler_out, specs_.wholesaler_out.target_mean, config_.gap_threshold) ||
        !mean_gap_ok(retailer_in, specs_.retailer_in.target_mean, config_.gap_threshold)) {
      ++sample.rejected_samples;
      continue;
    }

    if (config_.couple_degrees) {
      std::tie(wholesaler_in, wholesaler_out) = couple_wholesaler_degrees(wholesaler_in, wholesaler_out);
      shuffle_pairs(wholesaler_in, wholesaler_out, rng);
    }
    std::stable_sort(retailer_in.degrees.begin(), retailer_in.degrees.end(), std::greater<>{});

    SupplyNetwork& net = sample.network;
    net.tiers = tiers_;
    net.layer_sw = match_stubs_random(supplier_out, wholesaler_in, rng);
    net.layer_wr = config_.ordered_matching ? match_stubs_ordered(wholesaler_out, retailer_in)
                                            : match_stubs_random(wholesaler_out, retailer_in, rng);
    net.groups = assign_horizontal_groups(tiers_.n_wholesalers, config_.rho,
                                          config_.horizontal_policy, rng);
    return sample;
  }
}

SupplyNetwork build_network(const ScenarioConfig& config, Rng& rng) {
  return NetworkBuilder(config).build(rng).network;
}

std::vector<int> realized_out_degrees(const BipartiteLayer& layer, std::size_t n_up) {
  std::vector<int> degrees(n_up, 0);
  for (const Edge& e : layer.edges) ++degrees.at(static_cast<std::size_t>(e.src));
  return degrees;
}

std::vector<int> realized_in_degrees(const BipartiteLayer& layer, std::size_t n_down) {
  std::vector<int> degrees(n_down, 0);
  for (const Edge& e : layer.edges) ++degrees.at(static_cast<std::size_t>(e.dst));
  return degrees;
}

void write_edge_list(std::ostream& out, const SupplyNetwork& network) {
  const auto dump_layer = [&out](const char* name, const BipartiteLayer& layer) {
    std::vector<Edge> edges = layer.edges;
    std::sort(edges.begin(), edges.end());
    for (const Edge& e : edges) out << name << '\t' << e.src << '\t' << e.dst << '\n';
  };
  dump_layer("sw", network.layer_sw);
  dump_layer("wr", network.layer_wr);
  for (std::size_t w = 0; w < network.groups.group_of.size(); ++w) {
    out << "group\t" << w << '\t' << network.groups.group_of[w] << '\n';
  }
}

}  // namespace scrn
