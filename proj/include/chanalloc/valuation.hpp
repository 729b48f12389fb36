#pragma once

#include <algorithm>
#include <bit>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chanalloc/conflict_graph.hpp"
#include "chanalloc/rational.hpp"

namespace chanalloc {

enum class ValuationKind { Explicit, Additive, SingleMinded, UnitDemand };

inline const char* to_string(ValuationKind k) {
  switch (k) {
    case ValuationKind::Explicit: return "explicit";
    case ValuationKind::Additive: return "additive";
    case ValuationKind::SingleMinded: return "single-minded";
    case ValuationKind::UnitDemand: return "unit-demand";
  }
  return "?";
}

// One bidder's valuation over channel bundles.  All values are exact
// rationals and must be non-negative; the empty bundle is always worth 0.
struct ValuationSpec {
  ValuationKind kind = ValuationKind::Additive;
  // Explicit: value per listed bundle, sorted by mask, unlisted bundles = 0.
  std::vector<std::pair<ChannelMask, Rational>> bundles;
  // Additive / UnitDemand: one value per channel (index j-1 for channel j).
  std::vector<Rational> channel_values;
  std::optional<int> cardinality_cap;  // Additive only
  // SingleMinded: the desired bundle and its value.
  ChannelMask desired = 0;
  Rational desired_value;

  static ValuationSpec explicit_bundles(std::vector<std::pair<ChannelMask, Rational>> b) {
    ValuationSpec s;
    s.kind = ValuationKind::Explicit;
    std::sort(b.begin(), b.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i].first == 0)
        throw std::invalid_argument("explicit valuation lists the empty bundle");
      if (i > 0 && b[i].first == b[i - 1].first)
        throw std::invalid_argument("explicit valuation lists a bundle twice");
      if (b[i].second.is_negative())
        throw std::invalid_argument("negative bid value");
    }
    s.bundles = std::move(b);
    return s;
  }

  static ValuationSpec additive(std::vector<Rational> per_channel,
                                std::optional<int> cap = std::nullopt) {
    ValuationSpec s;
    s.kind = ValuationKind::Additive;
    for (const Rational& r : per_channel)
      if (r.is_negative()) throw std::invalid_argument("negative bid value");
    if (cap && *cap < 1) throw std::invalid_argument("cardinality cap must be >= 1");
    s.channel_values = std::move(per_channel);
    s.cardinality_cap = cap;
    return s;
  }

  static ValuationSpec single_minded(ChannelMask desired, Rational value) {
    if (desired == 0)
      throw std::invalid_argument("single-minded bidder must desire a nonempty bundle");
    if (value.is_negative()) throw std::invalid_argument("negative bid value");
    ValuationSpec s;
    s.kind = ValuationKind::SingleMinded;
    s.desired = desired;
    s.desired_value = value;
    return s;
  }

  static ValuationSpec unit_demand(std::vector<Rational> per_channel) {
    ValuationSpec s = additive(std::move(per_channel));
    s.kind = ValuationKind::UnitDemand;
    return s;
  }
};

struct AuctionInstance {
  int num_bidders = 0;
  int num_channels = 0;
  std::vector<ValuationSpec> valuations;

  void validate() const {
    if (num_bidders < 1) throw std::invalid_argument("instance needs >= 1 bidder");
    if (num_channels < 1 || num_channels > kMaxChannels)
      throw std::invalid_argument("channel count must be in 1.." +
                                  std::to_string(kMaxChannels));
    if (static_cast<int>(valuations.size()) != num_bidders)
      throw std::invalid_argument("one valuation per bidder required");
    ChannelMask all = (ChannelMask{1} << num_channels) - 1;
    for (const ValuationSpec& s : valuations) {
      switch (s.kind) {
        case ValuationKind::Explicit:
          for (const auto& [mask, val] : s.bundles)
            if (mask & ~all)
              throw std::invalid_argument("explicit bundle uses a channel above k");
          break;
        case ValuationKind::Additive:
        case ValuationKind::UnitDemand:
          if (static_cast<int>(s.channel_values.size()) != num_channels)
            throw std::invalid_argument("per-channel values must have length k");
          break;
        case ValuationKind::SingleMinded:
          if (s.desired & ~all)
            throw std::invalid_argument("desired bundle uses a channel above k");
          break;
      }
    }
  }
};

// b_{v,T}: the bidder's exact value for bundle T.
inline Rational evaluate(const ValuationSpec& s, ChannelMask T) {
  if (T == 0) return Rational(0);
  switch (s.kind) {
    case ValuationKind::Explicit: {
      auto it = std::lower_bound(
          s.bundles.begin(), s.bundles.end(), T,
          [](const auto& entry, ChannelMask m) { return entry.first < m; });
      if (it != s.bundles.end() && it->first == T) return it->second;
      return Rational(0);
    }
    case ValuationKind::Additive: {
      std::vector<Rational> vals;
      ChannelMask m = T;
      while (m) {
        int j = std::countr_zero(m);
        if (j < static_cast<int>(s.channel_values.size()))
          vals.push_back(s.channel_values[j]);
        m &= m - 1;
      }
      std::sort(vals.begin(), vals.end(), [](const Rational& a, const Rational& b) {
        return b < a;
      });
      std::size_t take = s.cardinality_cap
                             ? std::min<std::size_t>(vals.size(), *s.cardinality_cap)
                             : vals.size();
      Rational sum(0);
      for (std::size_t i = 0; i < take; ++i) sum += vals[i];
      return sum;
    }
    case ValuationKind::SingleMinded:
      return (T & s.desired) == s.desired ? s.desired_value : Rational(0);
    case ValuationKind::UnitDemand: {
      Rational best(0);
      ChannelMask m = T;
      while (m) {
        int j = std::countr_zero(m);
        if (j < static_cast<int>(s.channel_values.size()) && s.channel_values[j] > best)
          best = s.channel_values[j];
        m &= m - 1;
      }
      return best;
    }
  }
  return Rational(0);
}

// Canonical bundle order used to break demand ties deterministically:
// smaller bundle first, then lexicographic over the sorted channel lists.
inline bool bundle_canonical_less(ChannelMask a, ChannelMask b) {
  int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  while (a && b) {
    int ca = std::countr_zero(a), cb = std::countr_zero(b);
    if (ca != cb) return ca < cb;
    a &= a - 1;
    b &= b - 1;
  }
  return false;
}

// argmax_T { b_{v,T} - sum_{j in T} prices[j-1] }; ties go to the canonical
// smallest bundle and the empty bundle (utility 0) is always in the running.
// Explicit valuations scan their bundle list; the structured models use
// closed forms.
inline ChannelMask demand_query(const ValuationSpec& s,
                                const std::vector<double>& prices) {
  int k = static_cast<int>(prices.size());
  if (k < 1 || k > kMaxChannels)
    throw std::invalid_argument("price vector must have length k in 1.." +
                                std::to_string(kMaxChannels));
  for (double p : prices)
    if (!(p >= 0.0)) throw std::invalid_argument("negative channel price");
  auto price_of = [&](ChannelMask m) {
    double total = 0.0;
    while (m) {
      int j = std::countr_zero(m);
      if (j >= k) throw std::invalid_argument("bundle uses a channel above k");
      total += prices[j];
      m &= m - 1;
    }
    return total;
  };
  ChannelMask best = 0;
  double best_utility = 0.0;
  auto consider = [&](ChannelMask T, double utility) {
    if (utility > best_utility ||
        (utility == best_utility && bundle_canonical_less(T, best))) {
      best = T;
      best_utility = utility;
    }
  };
  switch (s.kind) {
    case ValuationKind::Explicit:
      for (const auto& [mask, val] : s.bundles)
        consider(mask, val.to_double() - price_of(mask));
      break;
    case ValuationKind::Additive: {
      std::vector<std::pair<double, int>> margins;
      for (int j = 0; j < k && j < static_cast<int>(s.channel_values.size()); ++j) {
        double m = s.channel_values[j].to_double() - prices[j];
        if (m > 0.0) margins.emplace_back(m, j);
      }
      std::sort(margins.begin(), margins.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      std::size_t take = s.cardinality_cap
                             ? std::min<std::size_t>(margins.size(), *s.cardinality_cap)
                             : margins.size();
      ChannelMask T = 0;
      double utility = 0.0;
      for (std::size_t i = 0; i < take; ++i) {
        T |= ChannelMask{1} << margins[i].second;
        utility += margins[i].first;
      }
      consider(T, utility);
      break;
    }
    case ValuationKind::SingleMinded:
      consider(s.desired, s.desired_value.to_double() - price_of(s.desired));
      break;
    case ValuationKind::UnitDemand: {
      int best_j = -1;
      double best_m = 0.0;
      for (int j = 0; j < k && j < static_cast<int>(s.channel_values.size()); ++j) {
        double m = s.channel_values[j].to_double() - prices[j];
        if (m > best_m) {  // strict: ties keep the smallest channel id
          best_m = m;
          best_j = j;
        }
      }
      if (best_j >= 0) consider(ChannelMask{1} << best_j, best_m);
      break;
    }
  }
  return best;
}

// Total exact value of an allocation under the instance's valuations.
inline Rational allocation_value(const AuctionInstance& inst,
                                 const std::vector<ChannelMask>& bundles) {
  if (static_cast<int>(bundles.size()) != inst.num_bidders)
    throw std::invalid_argument("allocation size does not match bidder count");
  Rational total(0);
  for (int v = 0; v < inst.num_bidders; ++v)
    total += evaluate(inst.valuations[v], bundles[v]);
  return total;
}

}  // namespace chanalloc
