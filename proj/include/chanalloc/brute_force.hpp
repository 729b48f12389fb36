#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chanalloc/conflict_graph.hpp"
#include "chanalloc/valuation.hpp"

namespace chanalloc {

// Thrown when an exact computation would exceed its configured size cap;
// the CLI maps this to its own exit code.
struct SizeCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BruteForceOptions {
  // Cap on the product over bidders of their candidate-bundle counts.
  double max_nodes = 1e7;
};

namespace detail {

// Per-channel membership state shared by the exhaustive searches.  Incoming
// conflict masses are recomputed from scratch on every query, in ascending
// member order — the same summation the final allocation check performs — so
// the search and the check can never disagree at the strict `< 1` boundary,
// however the floating-point rounding falls.  (Both search loops visit
// bidders in ascending order, so the candidate is always the largest member
// and appending it last reproduces the canonical summation sequence.)
class ChannelLoads {
 public:
  ChannelLoads(const ConflictStructure& g, int k) : g_(g) { members_.resize(k); }

  // True iff bidder v can take every channel in `mask` on top of the
  // current members while all sets stay independent.
  bool can_add(int v, ChannelMask mask) const {
    ChannelMask m = mask;
    while (m) {
      int j = std::countr_zero(m);
      m &= m - 1;
      int layer = g_.layer_for_channel(j + 1);
      double in_v = 0.0;
      for (int u : members_[j]) in_v += g_.weight(layer, u, v);
      if (in_v >= 1.0) return false;
      for (int u : members_[j]) {
        double in_u = 0.0;
        for (int x : members_[j])
          if (x != u) in_u += g_.weight(layer, x, u);
        in_u += g_.weight(layer, v, u);
        if (in_u >= 1.0) return false;
      }
    }
    return true;
  }

  void add(int v, ChannelMask mask) {
    ChannelMask m = mask;
    while (m) {
      int j = std::countr_zero(m);
      m &= m - 1;
      members_[j].push_back(v);
    }
  }

  void remove(int, ChannelMask mask) {
    ChannelMask m = mask;
    while (m) {
      int j = std::countr_zero(m);
      m &= m - 1;
      members_[j].pop_back();
    }
  }

 private:
  const ConflictStructure& g_;
  std::vector<std::vector<int>> members_;
};

}  // namespace detail

// Exact optimum by exhaustive search over candidate bundles per bidder.
// Explicit bidders only ever want their listed bundles; the structured
// models may want any bundle, so all 2^k masks are candidates for them.
inline Allocation brute_force_opt(const AuctionInstance& inst,
                                  const ConflictStructure& g,
                                  const BruteForceOptions& opt = {}) {
  inst.validate();
  if (g.size() != inst.num_bidders)
    throw std::invalid_argument("conflict structure size does not match instance");
  int n = inst.num_bidders;
  int k = inst.num_channels;

  // Candidate bundles per bidder, best value first so the suffix bound prunes.
  std::vector<std::vector<std::pair<ChannelMask, Rational>>> cand(n);
  double nodes = 1.0;
  for (int v = 0; v < n; ++v) {
    const ValuationSpec& s = inst.valuations[v];
    if (s.kind == ValuationKind::Explicit) {
      cand[v].emplace_back(0, Rational(0));
      for (const auto& [mask, val] : s.bundles) cand[v].emplace_back(mask, val);
    } else {
      for (ChannelMask m = 0; m < (ChannelMask{1} << k); ++m)
        cand[v].emplace_back(m, evaluate(s, m));
    }
    std::sort(cand[v].begin(), cand[v].end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return b.second < a.second;
      return bundle_canonical_less(a.first, b.first);
    });
    nodes *= static_cast<double>(cand[v].size());
    if (nodes > opt.max_nodes)
      throw SizeCapError("brute force search space exceeds cap (" +
                         std::to_string(opt.max_nodes) + " nodes)");
  }

  // Best value obtainable from bidders v..n-1 ignoring conflicts.
  std::vector<Rational> suffix(n + 1, Rational(0));
  for (int v = n - 1; v >= 0; --v) suffix[v] = suffix[v + 1] + cand[v][0].second;

  detail::ChannelLoads loads(g, k);
  std::vector<ChannelMask> current(n, 0), best(n, 0);
  Rational current_value(0), best_value(0);

  std::function<void(int)> dfs = [&](int v) {
    if (v == n) {
      if (current_value > best_value) {
        best_value = current_value;
        best = current;
      }
      return;
    }
    if (current_value + suffix[v] <= best_value) return;
    for (const auto& [mask, val] : cand[v]) {
      // Candidates are value-sorted, so once one cannot beat the best,
      // none of the rest can either.
      if (current_value + val + suffix[v + 1] <= best_value) break;
      if (mask != 0 && !loads.can_add(v, mask)) continue;
      if (mask != 0) loads.add(v, mask);
      current[v] = mask;
      current_value += val;
      dfs(v + 1);
      current_value -= val;
      current[v] = 0;
      if (mask != 0) loads.remove(v, mask);
    }
  };
  dfs(0);

  Allocation out;
  out.bundles = std::move(best);
  out.value = best_value;
  return out;
}

// Visits every feasible allocation (each bidder gets any bundle over the k
// channels, every channel's user set independent).  Used by exhaustive
// verification at small sizes.
inline void for_each_feasible_allocation(
    const ConflictStructure& g, int k,
    const std::function<void(const std::vector<ChannelMask>&)>& visit,
    double max_nodes = 1e7) {
  int n = g.size();
  double nodes = std::pow(static_cast<double>(ChannelMask{1} << k), n);
  if (nodes > max_nodes)
    throw SizeCapError("allocation enumeration exceeds cap");
  detail::ChannelLoads loads(g, k);
  std::vector<ChannelMask> current(n, 0);
  std::function<void(int)> dfs = [&](int v) {
    if (v == n) {
      visit(current);
      return;
    }
    for (ChannelMask m = 0; m < (ChannelMask{1} << k); ++m) {
      if (m != 0 && !loads.can_add(v, m)) continue;
      if (m != 0) loads.add(v, m);
      current[v] = m;
      dfs(v + 1);
      current[v] = 0;
      if (m != 0) loads.remove(v, m);
    }
  };
  dfs(0);
}

}  // namespace chanalloc
