#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "scrn/error.hpp"
#include "scrn/network_builder.hpp"
#include "test_support.hpp"

using namespace scrn;

namespace {

DegreeSequence seq(std::vector<int> degrees, DegreeRole role = DegreeRole::WholesalerOut) {
  return DegreeSequence{std::move(degrees), role};
}

std::vector<Edge> sorted(std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  return edges;
}

// Spearman correlation between the endpoint degrees of every edge.
double edge_degree_correlation(const BipartiteLayer& layer) {
  std::vector<double> x;
  std::vector<double> y;
  for (const Edge& e : layer.edges) {
    x.push_back(layer.upstream_degrees.degrees[static_cast<std::size_t>(e.src)]);
    y.push_back(layer.downstream_degrees.degrees[static_cast<std::size_t>(e.dst)]);
  }
  return test::spearman(x, y);
}

ScenarioConfig chain_config() {
  ScenarioConfig c;
  c.n_wholesalers = 1;
  c.ratio_alpha = 1.0;
  c.ratio_beta = 1.0;
  c.retailer_mean_in_degree = 1.0;
  c.replications = 1;
  return c;
}

}  // namespace

TEST_CASE("draw_consistent_sequences: regular pairs need no repair") {
  Rng rng(3);
  const DegreeSampler up(make_degree_spec(DegreeFamily::Regular, 20.0));
  const DegreeSampler down(make_degree_spec(DegreeFamily::Regular, 2.0));
  std::int64_t steps = -1;
  auto [a, b] = draw_consistent_sequences(up, down, 100, 1000, DegreeRole::WholesalerOut,
                                          DegreeRole::RetailerIn, rng, 1'000'000, &steps);
  CHECK(steps == 0);
  CHECK(a.sum() == 2000);
  CHECK(b.sum() == 2000);
}

TEST_CASE("draw_consistent_sequences: Poisson vs regular terminates with equal sums") {
  const DegreeSampler up(make_degree_spec(DegreeFamily::ZeroTruncatedPoisson, 2.0));
  const DegreeSampler down(make_degree_spec(DegreeFamily::Regular, 1.0));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    auto [a, b] = draw_consistent_sequences(up, down, 100, 200, DegreeRole::WholesalerIn,
                                            DegreeRole::SupplierOut, rng);
    CHECK(a.sum() == 200);
    CHECK(b.sum() == 200);
    CHECK(a.size() == 100);
    CHECK(b.size() == 200);
    CHECK(*std::min_element(a.degrees.begin(), a.degrees.end()) >= 1);
  }
}

TEST_CASE("draw_consistent_sequences: precondition and repair cap") {
  Rng rng(5);
  const DegreeSampler two(make_degree_spec(DegreeFamily::ZeroTruncatedPoisson, 2.0));
  const DegreeSampler one(make_degree_spec(DegreeFamily::Regular, 1.0));
  CHECK(test::kind_of([&] {
          draw_consistent_sequences(two, one, 100, 150, DegreeRole::WholesalerIn, DegreeRole::SupplierOut, rng);
        }) == ErrorKind::ConfigInvalid);

  // Power law vs regular: a zero-step budget cannot repair a mismatched draw.
  const DegreeSampler pow(make_degree_spec(DegreeFamily::ZeroTruncatedPowerLaw, 2.0, 100));
  CHECK(test::kind_of([&] {
          for (int i = 0; i < 100; ++i) {
            draw_consistent_sequences(pow, one, 100, 200, DegreeRole::WholesalerIn, DegreeRole::SupplierOut,
                                      rng, 0);
          }
        }) == ErrorKind::RepairExhausted);
}

TEST_CASE("match_stubs_random: forced matchings") {
  Rng rng(11);
  for (int i = 0; i < 10; ++i) {
    auto layer = match_stubs_random(seq({1, 1}), seq({2}), rng);
    CHECK(sorted(layer.edges) == std::vector<Edge>{{0, 0}, {1, 0}});
    layer = match_stubs_random(seq({2}), seq({2}), rng);
    CHECK(layer.edges == std::vector<Edge>{{0, 0}, {0, 0}});
  }
  CHECK(test::kind_of([&] { match_stubs_random(seq({2}), seq({1}), rng); }) == ErrorKind::ConfigInvalid);
}

TEST_CASE("match_stubs_random: outcome frequencies match stub-permutation enumeration") {
  // Oracle: enumerate all 4! orderings of the labeled downstream stubs
  // {d0a, d0b, d1a, d1b} against up-nodes 0..3 and tally the induced
  // assignment up-node -> down-node.
  std::map<std::vector<int>, int> exact;
  std::vector<int> stub_owner{0, 0, 1, 1};
  std::vector<int> perm{0, 1, 2, 3};
  int total = 0;
  do {
    std::vector<int> assignment(4);
    for (int i = 0; i < 4; ++i) assignment[static_cast<std::size_t>(i)] = stub_owner[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    ++exact[assignment];
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  REQUIRE(total == 24);
  REQUIRE(exact.size() == 6);

  constexpr int draws = 100'000;
  std::map<std::vector<int>, int> observed;
  Rng rng(77);
  const auto up = seq({1, 1, 1, 1});
  const auto down = seq({2, 2});
  for (int i = 0; i < draws; ++i) {
    const auto layer = match_stubs_random(up, down, rng);
    std::vector<int> assignment(4);
    for (const Edge& e : layer.edges) assignment[static_cast<std::size_t>(e.src)] = e.dst;
    ++observed[assignment];
  }
  CHECK(observed.size() == exact.size());
  for (const auto& [assignment, count] : exact) {
    const double p = static_cast<double>(count) / total;
    const double freq = static_cast<double>(observed[assignment]) / draws;
    const double sd = std::sqrt(p * (1 - p) / draws);
    CHECK(std::abs(freq - p) < 5 * sd);
  }
}

TEST_CASE("match_stubs_ordered: hand-traced greedy pairing") {
  // (3,1) x (2,2): u0-d0, u0-d1, u0-d0 (tie on 1 stub, lower id), u1-d1.
  const auto layer = match_stubs_ordered(seq({3, 1}), seq({2, 2}));
  CHECK(layer.edges == std::vector<Edge>{{0, 0}, {0, 1}, {0, 0}, {1, 1}});

  const auto flat = match_stubs_ordered(seq({1, 1}), seq({1, 1}));
  CHECK(flat.edges == std::vector<Edge>{{0, 0}, {1, 1}});

  CHECK(test::kind_of([] { match_stubs_ordered(seq({3}), seq({1, 1})); }) == ErrorKind::ConfigInvalid);
}

TEST_CASE("ordered matching is more assortative than random matching") {
  const DegreeSampler up(make_degree_spec(DegreeFamily::ZeroTruncatedPowerLaw, 20.0, 1000));
  const DegreeSampler down(make_degree_spec(DegreeFamily::ZeroTruncatedPowerLaw, 2.0, 100));
  Rng rng(2024);
  double ordered_sum = 0.0;
  double random_sum = 0.0;
  int ordered_positive = 0;
  constexpr int samples = 100;
  for (int i = 0; i < samples; ++i) {
    auto [a, b] = draw_consistent_sequences(up, down, 100, 1000, DegreeRole::WholesalerOut,
                                            DegreeRole::RetailerIn, rng);
    const double ordered = edge_degree_correlation(match_stubs_ordered(a, b));
    const double random = edge_degree_correlation(match_stubs_random(a, b, rng));
    ordered_sum += ordered;
    random_sum += random;
    if (ordered > 0.0) ++ordered_positive;
  }
  CHECK(ordered_positive == samples);
  CHECK(ordered_sum / samples > random_sum / samples);
}

TEST_CASE("couple_wholesaler_degrees") {
  auto [in, out] = couple_wholesaler_degrees(seq({1, 3, 2}, DegreeRole::WholesalerIn), seq({10, 30, 20}));
  CHECK(in.degrees == std::vector<int>{3, 2, 1});
  CHECK(out.degrees == std::vector<int>{30, 20, 10});
  CHECK(in.role == DegreeRole::WholesalerIn);

  auto [rin, rout] = couple_wholesaler_degrees(seq({2, 2, 2}), seq({20, 20, 20}));
  CHECK(rin.degrees == std::vector<int>{2, 2, 2});
  CHECK(rout.degrees == std::vector<int>{20, 20, 20});

  CHECK(test::kind_of([] { couple_wholesaler_degrees(seq({1}), seq({1, 2})); }) == ErrorKind::LengthMismatch);
}

TEST_CASE("couple_wholesaler_degrees: property, rank correlation one") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 60)(rng);
    // Tie-free inputs: shuffled distinct values give Spearman exactly 1.
    std::vector<int> a(n);
    std::vector<int> b(n);
    std::iota(a.begin(), a.end(), 1);
    std::iota(b.begin(), b.end(), 100);
    std::shuffle(a.begin(), a.end(), rng);
    std::shuffle(b.begin(), b.end(), rng);
    auto [in, out] = couple_wholesaler_degrees(seq(a), seq(b));
    CHECK(test::spearman(std::vector<double>(in.degrees.begin(), in.degrees.end()),
                         std::vector<double>(out.degrees.begin(), out.degrees.end())) ==
          doctest::Approx(1.0));

    // With ties the pairing is still comonotone and a permutation of the input.
    std::vector<int> c(n);
    std::vector<int> d(n);
    for (auto& v : c) v = std::uniform_int_distribution<int>(1, 4)(rng);
    for (auto& v : d) v = std::uniform_int_distribution<int>(1, 40)(rng);
    auto [tin, tout] = couple_wholesaler_degrees(seq(c), seq(d));
    for (std::size_t i = 0; i + 1 < n; ++i) {
      CHECK(tin.degrees[i] >= tin.degrees[i + 1]);
      CHECK(tout.degrees[i] >= tout.degrees[i + 1]);
    }
    CHECK(std::is_permutation(tin.degrees.begin(), tin.degrees.end(), c.begin()));
    CHECK(std::is_permutation(tout.degrees.begin(), tout.degrees.end(), d.begin()));
  }
}

TEST_CASE("mean_gap_ok boundary is inclusive") {
  CHECK(mean_gap_ok(seq({2, 2, 2, 2}), 2.0));
  std::vector<int> over(100, 2);
  for (int i = 0; i < 11; ++i) over[static_cast<std::size_t>(i)] = 3;  // mean 2.11
  CHECK_FALSE(mean_gap_ok(seq(over), 2.0));
  std::vector<int> edge(10, 2);
  edge[0] = 3;  // mean 2.10, gap exactly 5%
  CHECK(mean_gap_ok(seq(edge), 2.0));
  std::vector<int> under(10, 2);
  under[0] = 1;
  under[1] = 1;  // mean 1.8
  CHECK_FALSE(mean_gap_ok(seq(under), 2.0));
}

TEST_CASE("assign_horizontal_groups") {
  Rng rng(8);
  auto groups = assign_horizontal_groups(100, 0.0, HorizontalPolicy::Coalition, rng);
  CHECK(groups.group_count == 100);

  groups = assign_horizontal_groups(100, 1.0, HorizontalPolicy::Coalition, rng);
  CHECK(groups.group_count == 1);
  CHECK(std::all_of(groups.group_of.begin(), groups.group_of.end(), [](int g) { return g == 0; }));

  groups = assign_horizontal_groups(100, 0.5, HorizontalPolicy::Pairs, rng);
  std::map<int, int> sizes;
  for (int g : groups.group_of) ++sizes[g];
  int pairs = 0;
  int singles = 0;
  for (auto [g, size] : sizes) {
    if (size == 2) ++pairs;
    if (size == 1) ++singles;
  }
  CHECK(pairs == 25);
  CHECK(singles == 50);
  CHECK(groups.group_count == 75);

  groups = assign_horizontal_groups(100, 0.3, HorizontalPolicy::Coalition, rng);
  CHECK(groups.group_count == 71);  // one pool of 30 plus 70 singletons

  // Group ids are numbered by first appearance.
  int next = 0;
  for (int g : groups.group_of) {
    CHECK(g <= next);
    if (g == next) ++next;
  }

  CHECK(test::kind_of([&] { assign_horizontal_groups(10, 1.2, HorizontalPolicy::Pairs, rng); }) ==
        ErrorKind::ConfigInvalid);
}

TEST_CASE("build_network: forced 1:1:1 chain") {
  Rng rng(1);
  const auto net = build_network(chain_config(), rng);
  CHECK(net.layer_sw.edges == std::vector<Edge>{{0, 0}});
  CHECK(net.layer_wr.edges == std::vector<Edge>{{0, 0}});
  CHECK(net.groups.group_count == 1);
}

TEST_CASE("build_network: regular baseline edge counts") {
  Rng rng(42);
  ScenarioConfig config;
  const auto net = build_network(config, rng);
  CHECK(net.tiers.n_suppliers == 200);
  CHECK(net.tiers.n_wholesalers == 100);
  CHECK(net.tiers.n_retailers == 1000);
  CHECK(net.layer_sw.edges.size() == 200);
  CHECK(net.layer_wr.edges.size() == 2000);
  CHECK(net.groups.group_count == 100);
}

TEST_CASE("build_network invariants across families and settings") {
  for (auto wholesaler : {DegreeFamily::Regular, DegreeFamily::ZeroTruncatedPoisson, DegreeFamily::ZeroTruncatedPowerLaw}) {
    for (auto retailer : {DegreeFamily::Regular, DegreeFamily::ZeroTruncatedPoisson, DegreeFamily::ZeroTruncatedPowerLaw}) {
      for (bool ordered : {false, true}) {
        ScenarioConfig config;
        config.wholesaler_dist = wholesaler;
        config.retailer_dist = retailer;
        config.ordered_matching = ordered;
        config.rho = 0.4;
        const NetworkBuilder builder(config);
        Rng rng(1234);
        for (int rep = 0; rep < 5; ++rep) {
          CAPTURE(family_token(wholesaler));
          CAPTURE(family_token(retailer));
          const NetworkSample sample = builder.build(rng);
          CHECK(test::network_violations(sample.network, config) == "");
        }
      }
    }
  }
}

TEST_CASE("build_network: retailers are ranked by demand, wholesalers keep rank coupling") {
  ScenarioConfig config;
  config.wholesaler_dist = DegreeFamily::ZeroTruncatedPoisson;
  config.retailer_dist = DegreeFamily::ZeroTruncatedPowerLaw;
  Rng rng(3);
  const auto net = build_network(config, rng);
  const auto& r = net.layer_wr.downstream_degrees.degrees;
  CHECK(std::is_sorted(r.begin(), r.end(), std::greater<>{}));

  const auto& in = net.layer_sw.downstream_degrees.degrees;
  const auto& out = net.layer_wr.upstream_degrees.degrees;
  for (std::size_t i = 0; i < in.size(); ++i) {
    for (std::size_t j = 0; j < in.size(); ++j) {
      if (in[i] > in[j]) CHECK(out[i] >= out[j]);
    }
  }
  // Ids are not in degree order.
  CHECK_FALSE(std::is_sorted(out.begin(), out.end(), std::greater<>{}));
}

TEST_CASE("build_network: rejection cap") {
  ScenarioConfig config;
  config.retailer_dist = DegreeFamily::ZeroTruncatedPowerLaw;
  config.wholesaler_dist = DegreeFamily::ZeroTruncatedPowerLaw;
  config.gap_threshold = 0.0;  // only exact means pass
  config.rejection_cap = 3;
  Rng rng(5);
  const NetworkBuilder builder(config);
  CHECK(test::kind_of([&] {
          for (int i = 0; i < 50; ++i) builder.build(rng);
        }) == ErrorKind::RejectionExhausted);
}

TEST_CASE("write_edge_list format") {
  Rng rng(1);
  const auto net = build_network(chain_config(), rng);
  std::ostringstream os;
  write_edge_list(os, net);
  CHECK(os.str() == "sw\t0\t0\nwr\t0\t0\ngroup\t0\t0\n");
}
