#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <chanalloc/random.hpp>
#include <chanalloc/valuation.hpp>

using namespace chanalloc;

TEST_CASE("explicit valuations value listed bundles only") {
  ValuationSpec s = ValuationSpec::explicit_bundles(
      {{0b01u, Rational(4)}, {0b11u, Rational(5)}});
  CHECK(evaluate(s, 0b01u) == Rational(4));
  CHECK(evaluate(s, 0b11u) == Rational(5));
  CHECK(evaluate(s, 0b10u) == Rational(0));
  CHECK(evaluate(s, 0u) == Rational(0));
  CHECK_THROWS(ValuationSpec::explicit_bundles({{0u, Rational(1)}}));
  CHECK_THROWS(
      ValuationSpec::explicit_bundles({{1u, Rational(1)}, {1u, Rational(2)}}));
  CHECK_THROWS(ValuationSpec::explicit_bundles({{1u, Rational(-1)}}));
}

TEST_CASE("additive valuations sum channel values up to the cap") {
  ValuationSpec s = ValuationSpec::additive(
      {Rational(3), Rational(1), Rational(2)}, std::nullopt);
  CHECK(evaluate(s, 0b111u) == Rational(6));
  CHECK(evaluate(s, 0b101u) == Rational(5));
  CHECK(evaluate(s, 0u) == Rational(0));

  ValuationSpec capped =
      ValuationSpec::additive({Rational(3), Rational(1), Rational(2)}, 2);
  // best two of {3,1,2}
  CHECK(evaluate(capped, 0b111u) == Rational(5));
  CHECK(evaluate(capped, 0b011u) == Rational(4));
  CHECK(evaluate(capped, 0b010u) == Rational(1));
  CHECK_THROWS(ValuationSpec::additive({Rational(1)}, 0));
}

TEST_CASE("single-minded valuations need the whole desired bundle") {
  ValuationSpec s = ValuationSpec::single_minded(0b101u, Rational(7));
  CHECK(evaluate(s, 0b101u) == Rational(7));
  CHECK(evaluate(s, 0b111u) == Rational(7));  // superset still satisfies
  CHECK(evaluate(s, 0b100u) == Rational(0));
  CHECK(evaluate(s, 0b011u) == Rational(0));
  CHECK_THROWS(ValuationSpec::single_minded(0u, Rational(1)));
}

TEST_CASE("unit-demand valuations take the best single channel") {
  ValuationSpec s =
      ValuationSpec::unit_demand({Rational(2), Rational(5), Rational(3)});
  CHECK(evaluate(s, 0b111u) == Rational(5));
  CHECK(evaluate(s, 0b101u) == Rational(3));
  CHECK(evaluate(s, 0b001u) == Rational(2));
  CHECK(evaluate(s, 0u) == Rational(0));
}

TEST_CASE("demand queries maximize utility at given prices") {
  SECTION("additive with cap") {
    ValuationSpec s =
        ValuationSpec::additive({Rational(3), Rational(1), Rational(2)}, 2);
    // margins: 2.5, -1, 1.5 -> channels 1 and 3
    CHECK(demand_query(s, {0.5, 2.0, 0.5}) == 0b101u);
    // all margins negative -> empty
    CHECK(demand_query(s, {4.0, 4.0, 4.0}) == 0u);
  }
  SECTION("single-minded") {
    ValuationSpec s = ValuationSpec::single_minded(0b101u, Rational(7));
    CHECK(demand_query(s, {1.0, 1.0, 1.0}) == 0b101u);
    CHECK(demand_query(s, {4.0, 0.0, 4.0}) == 0u);  // bundle price 8 > 7
  }
  SECTION("unit-demand") {
    ValuationSpec s =
        ValuationSpec::unit_demand({Rational(2), Rational(5), Rational(5)});
    // margins 2, 4, 3: channel 2 wins
    CHECK(demand_query(s, {0.0, 1.0, 2.0}) == 0b010u);
    // equal margins 5 and 5 at zero prices: smaller channel wins
    CHECK(demand_query(s, {2.0, 0.0, 0.0}) == 0b010u);
  }
  SECTION("explicit") {
    ValuationSpec s = ValuationSpec::explicit_bundles(
        {{0b001u, Rational(4)}, {0b011u, Rational(5)}});
    CHECK(demand_query(s, {1.0, 3.0, 0.0}) == 0b001u);  // utilities 3 vs 1
    CHECK(demand_query(s, {0.0, 0.5, 0.0}) == 0b011u);  // 4 vs 4.5
    CHECK(demand_query(s, {9.0, 9.0, 9.0}) == 0u);
  }
  CHECK_THROWS(demand_query(ValuationSpec::unit_demand({Rational(1)}), {-1.0}));
  CHECK_THROWS(demand_query(ValuationSpec::unit_demand({Rational(1)}), {}));
}

TEST_CASE("demand ties break toward the canonical smallest bundle") {
  CHECK(bundle_canonical_less(0b001u, 0b010u));
  CHECK(bundle_canonical_less(0b100u, 0b011u));  // size 1 before size 2
  CHECK(bundle_canonical_less(0b011u, 0b101u));
  CHECK_FALSE(bundle_canonical_less(0b101u, 0b101u));

  ValuationSpec twin = ValuationSpec::explicit_bundles(
      {{0b001u, Rational(3)}, {0b010u, Rational(3)}});
  CHECK(demand_query(twin, {0.0, 0.0}) == 0b001u);

  ValuationSpec sized = ValuationSpec::explicit_bundles(
      {{0b011u, Rational(3)}, {0b100u, Rational(3)}});
  CHECK(demand_query(sized, {0.0, 0.0, 0.0}) == 0b100u);
}

TEST_CASE("demand query beats every bundle, exhaustively") {
  RandomStream rng(99);
  int k = 4;
  for (int trial = 0; trial < 200; ++trial) {
    ValuationSpec s;
    switch (rng.next_below(4)) {
      case 0: {
        std::vector<std::pair<ChannelMask, Rational>> bundles;
        std::vector<char> used(1u << k, 0);
        int m = 1 + static_cast<int>(rng.next_below(6));
        for (int i = 0; i < m; ++i) {
          ChannelMask mask = 1 + static_cast<ChannelMask>(rng.next_below((1u << k) - 1));
          if (used[mask]) continue;
          used[mask] = 1;
          bundles.emplace_back(mask, Rational(static_cast<long long>(rng.next_below(900)), 100));
        }
        s = ValuationSpec::explicit_bundles(std::move(bundles));
        break;
      }
      case 1: {
        std::vector<Rational> vals;
        for (int j = 0; j < k; ++j)
          vals.emplace_back(static_cast<long long>(rng.next_below(900)), 100);
        std::optional<int> cap;
        if (rng.next_bool(0.5)) cap = 1 + static_cast<int>(rng.next_below(k));
        s = ValuationSpec::additive(std::move(vals), cap);
        break;
      }
      case 2:
        s = ValuationSpec::single_minded(
            1 + static_cast<ChannelMask>(rng.next_below((1u << k) - 1)),
            Rational(static_cast<long long>(rng.next_below(900)), 100));
        break;
      default: {
        std::vector<Rational> vals;
        for (int j = 0; j < k; ++j)
          vals.emplace_back(static_cast<long long>(rng.next_below(900)), 100);
        s = ValuationSpec::unit_demand(std::move(vals));
        break;
      }
    }
    std::vector<double> prices(k);
    for (double& p : prices) p = rng.next_range(0.0, 4.0);
    auto utility = [&](ChannelMask m) {
      double total = evaluate(s, m).to_double();
      for (int j : channels_of(m)) total -= prices[j - 1];
      return total;
    };
    ChannelMask pick = demand_query(s, prices);
    double got = utility(pick);
    for (ChannelMask m = 0; m < (1u << k); ++m)
      CHECK(got >= utility(m) - 1e-9);
  }
}

TEST_CASE("instances validate their shape") {
  AuctionInstance inst;
  inst.num_bidders = 1;
  inst.num_channels = 2;
  inst.valuations = {ValuationSpec::additive({Rational(1), Rational(2)})};
  CHECK_NOTHROW(inst.validate());

  inst.valuations = {ValuationSpec::additive({Rational(1)})};
  CHECK_THROWS(inst.validate());

  inst.valuations = {ValuationSpec::single_minded(0b100u, Rational(1))};
  CHECK_THROWS(inst.validate());  // channel 3 with k=2

  inst.num_bidders = 2;
  inst.valuations = {ValuationSpec::additive({Rational(1), Rational(2)})};
  CHECK_THROWS(inst.validate());  // one valuation missing
}

TEST_CASE("allocation values add bidder valuations exactly") {
  AuctionInstance inst;
  inst.num_bidders = 2;
  inst.num_channels = 2;
  inst.valuations = {
      ValuationSpec::additive({Rational(1, 4), Rational(1, 2)}),
      ValuationSpec::single_minded(0b10u, Rational(3, 4)),
  };
  CHECK(allocation_value(inst, {0b01u, 0b10u}) == Rational(1));
  CHECK(allocation_value(inst, {0b11u, 0u}) == Rational(3, 4));
  CHECK_THROWS(allocation_value(inst, {0b01u}));
}
