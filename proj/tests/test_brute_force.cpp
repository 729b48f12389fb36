#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <chanalloc/brute_force.hpp>
#include <chanalloc/random.hpp>

using namespace chanalloc;

namespace {

AuctionInstance single_minded_pair() {
  AuctionInstance inst;
  inst.num_bidders = 2;
  inst.num_channels = 1;
  inst.valuations = {ValuationSpec::single_minded(0b1u, Rational(3)),
                     ValuationSpec::single_minded(0b1u, Rational(5))};
  return inst;
}

}  // namespace

TEST_CASE("exhaustive optimum picks the heavier side of an edge") {
  AuctionInstance inst = single_minded_pair();
  ConflictStructure g = ConflictStructure::unweighted(2, {{0, 1}});
  Allocation best = brute_force_opt(inst, g);
  CHECK(best.value == Rational(5));
  CHECK(best.bundles == std::vector<ChannelMask>{0u, 0b1u});
}

TEST_CASE("exhaustive optimum spreads a triangle across channels") {
  AuctionInstance inst;
  inst.num_bidders = 3;
  inst.num_channels = 3;
  inst.valuations = {ValuationSpec::single_minded(0b001u, Rational(1)),
                     ValuationSpec::single_minded(0b010u, Rational(1)),
                     ValuationSpec::single_minded(0b100u, Rational(1))};
  ConflictStructure g = ConflictStructure::unweighted(3, {{0, 1}, {1, 2}, {0, 2}});
  Allocation best = brute_force_opt(inst, g);
  CHECK(best.value == Rational(3));
  CHECK(verify_allocation(g, 3, best).ok);
}

TEST_CASE("no conflicts means everyone takes everything useful") {
  AuctionInstance inst;
  inst.num_bidders = 2;
  inst.num_channels = 2;
  inst.valuations = {ValuationSpec::additive({Rational(1), Rational(2)}),
                     ValuationSpec::additive({Rational(3), Rational(4)})};
  ConflictStructure g = ConflictStructure::unweighted(2, {});
  CHECK(brute_force_opt(inst, g).value == Rational(10));
}

TEST_CASE("fractional conflict weights allow channel sharing below unit mass") {
  AuctionInstance inst = single_minded_pair();
  ConflictStructure loose =
      ConflictStructure::weighted(2, {{0, 1, 0.4}, {1, 0, 0.4}});
  CHECK(brute_force_opt(inst, loose).value == Rational(8));
  ConflictStructure tight = ConflictStructure::weighted(2, {{0, 1, 1.0}});
  CHECK(brute_force_opt(inst, tight).value == Rational(5));
}

TEST_CASE("per-channel layers constrain each channel separately") {
  AuctionInstance inst;
  inst.num_bidders = 2;
  inst.num_channels = 2;
  inst.valuations = {ValuationSpec::additive({Rational(1), Rational(1)}),
                     ValuationSpec::additive({Rational(1), Rational(1)})};
  // conflict on channel 1 only
  ConflictStructure g = ConflictStructure::unweighted_per_channel(2, {{{0, 1}}, {}});
  Allocation best = brute_force_opt(inst, g);
  // both share channel 2, one of them also gets channel 1
  CHECK(best.value == Rational(3));
}

TEST_CASE("the search-tree cap aborts with a dedicated error") {
  AuctionInstance inst;
  inst.num_bidders = 8;
  inst.num_channels = 4;
  for (int i = 0; i < 8; ++i)
    inst.valuations.push_back(ValuationSpec::additive(
        {Rational(1), Rational(2), Rational(3), Rational(4)}));
  ConflictStructure g = ConflictStructure::unweighted(8, {});
  BruteForceOptions opts;
  opts.max_nodes = 100;
  CHECK_THROWS_AS(brute_force_opt(inst, g, opts), SizeCapError);
}

TEST_CASE("enumerating feasible allocations visits exactly the independent ones") {
  ConflictStructure g = ConflictStructure::unweighted(2, {{0, 1}});
  int count = 0;
  bool saw_both_assigned = false;
  for_each_feasible_allocation(g, 1, [&](const std::vector<ChannelMask>& b) {
    ++count;
    Allocation a{b, Rational(0)};
    CHECK(verify_allocation(g, 1, a).ok);
    if (b[0] != 0 && b[1] != 0) saw_both_assigned = true;
  });
  // ({},{}), ({1},{}), ({},{1})
  CHECK(count == 3);
  CHECK_FALSE(saw_both_assigned);
}

TEST_CASE("exhaustive optimum is deterministic") {
  RandomStream rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 4, k = 2;
    AuctionInstance inst;
    inst.num_bidders = n;
    inst.num_channels = k;
    for (int v = 0; v < n; ++v)
      inst.valuations.push_back(ValuationSpec::additive(
          {Rational(static_cast<long long>(rng.next_below(500)), 100),
           Rational(static_cast<long long>(rng.next_below(500)), 100)}));
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.next_bool(0.5)) edges.emplace_back(u, v);
    ConflictStructure g = ConflictStructure::unweighted(n, edges);
    Allocation a = brute_force_opt(inst, g);
    Allocation b = brute_force_opt(inst, g);
    CHECK(a.value == b.value);
    CHECK(a.bundles == b.bundles);
  }
}
