#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chanalloc/conflict_graph.hpp"
#include "chanalloc/lp_solver.hpp"
#include "chanalloc/valuation.hpp"

namespace chanalloc {

// Sparse fractional assignment x_{v,T}; entries sorted by (bidder, bundle).
struct FractionalSolution {
  struct Entry {
    int bidder = 0;
    ChannelMask bundle = 0;
    double x = 0.0;
  };
  std::vector<Entry> entries;
  double objective = 0.0;
};

// Dual multipliers of the relaxation: y per (bidder, channel) row, z per
// bidder row.
struct DualPrices {
  int num_bidders = 0;
  int num_channels = 0;
  std::vector<double> y;  // y[v*k + (j-1)]
  std::vector<double> z;  // z[v]

  double y_at(int v, int j) const { return y[v * num_channels + (j - 1)]; }
};

// The relaxation: maximize sum b_{v,T} x_{v,T} subject to, for every bidder
// v and channel j, the backward conflict mass sum_{u in Gamma_pi(v)}
// sum_{T ni j} wbar(u,v) x_{u,T} <= rho, and sum_T x_{v,T} <= 1 per bidder.
// Unweighted structures use coefficient 1 per backward edge; per-channel
// structures use the channel's own weights.
struct AuctionLp {
  LpProblem lp;
  std::vector<std::pair<int, ChannelMask>> col_bundle;  // structural col -> (v,T)
  std::vector<int> row_conflict;  // (v*k + j-1) -> row id or -1 (vacuous)
  std::vector<int> row_bidder;    // v -> row id
  int num_bidders = 0;
  int num_channels = 0;
  double rho = 0.0;
};

namespace detail {

// Coefficient bidder u's bundle puts into row (v, j): how much conflict
// mass u adds at v on channel j when u precedes v.
inline double conflict_coefficient(const ConflictStructure& g, int layer, int u,
                                   int v) {
  if (!g.adjacent(layer, u, v)) return 0.0;
  return g.kind() == ConflictKind::Unweighted ? 1.0 : g.wbar(layer, u, v);
}

}  // namespace detail

inline AuctionLp build_lp(const AuctionInstance& inst, const ConflictStructure& g,
                          const Ordering& pi,
                          const std::vector<std::vector<ChannelMask>>& bundles) {
  inst.validate();
  int n = inst.num_bidders;
  int k = inst.num_channels;
  if (g.size() != n)
    throw std::invalid_argument("conflict structure size does not match instance");
  pi.validate(n);
  if (g.variant() == ChannelVariant::Asymmetric && g.layer_count() != k)
    throw std::invalid_argument("per-channel conflict structure must have k layers");
  if (static_cast<int>(bundles.size()) != n)
    throw std::invalid_argument("need one bundle list per bidder");
  ChannelMask all = (ChannelMask{1} << k) - 1;

  AuctionLp out;
  out.num_bidders = n;
  out.num_channels = k;
  out.rho = pi.rho;

  // Conflict rows first (only where some earlier bidder can load the
  // channel), then one budget row per bidder.
  out.row_conflict.assign(static_cast<std::size_t>(n) * k, -1);
  int rows = 0;
  for (int v = 0; v < n; ++v) {
    for (int j = 1; j <= k; ++j) {
      int layer = g.layer_for_channel(j);
      bool has_backward = false;
      for (int u = 0; u < n && !has_backward; ++u)
        has_backward = u != v && pi.position[u] < pi.position[v] &&
                       g.adjacent(layer, u, v);
      if (has_backward) out.row_conflict[v * k + (j - 1)] = rows++;
    }
  }
  out.row_bidder.resize(n);
  for (int v = 0; v < n; ++v) out.row_bidder[v] = rows++;

  out.lp.num_rows = rows;
  out.lp.rhs.assign(rows, 1.0);
  for (int v = 0; v < n; ++v)
    for (int j = 1; j <= k; ++j)
      if (out.row_conflict[v * k + (j - 1)] >= 0)
        out.lp.rhs[out.row_conflict[v * k + (j - 1)]] = pi.rho;

  for (int u = 0; u < n; ++u) {
    std::vector<ChannelMask> list(bundles[u]);
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    if (list.empty())
      throw std::invalid_argument("bidder " + std::to_string(u) +
                                  " has an empty bundle list");
    for (ChannelMask T : list) {
      if (T == 0)
        throw std::invalid_argument("empty bundle listed for bidder " +
                                    std::to_string(u));
      if (T & ~all)
        throw std::invalid_argument("bundle references a channel above k");
      std::vector<std::pair<int, double>> col;
      col.emplace_back(out.row_bidder[u], 1.0);
      ChannelMask rest = T;
      while (rest) {
        int j = std::countr_zero(rest) + 1;
        rest &= rest - 1;
        int layer = g.layer_for_channel(j);
        for (int v = 0; v < n; ++v) {
          if (v == u || pi.position[v] <= pi.position[u]) continue;
          int row = out.row_conflict[v * k + (j - 1)];
          if (row < 0) continue;
          double coeff = detail::conflict_coefficient(g, layer, u, v);
          if (coeff > 0.0) col.emplace_back(row, coeff);
        }
      }
      std::sort(col.begin(), col.end());
      out.lp.columns.push_back(std::move(col));
      out.lp.objective.push_back(evaluate(inst.valuations[u], T).to_double());
      out.col_bundle.emplace_back(u, T);
    }
  }
  return out;
}

struct LpOutcome {
  FractionalSolution x;
  DualPrices duals;
  int iterations = 0;
};

inline LpOutcome solve_explicit(const AuctionLp& alp,
                                const SimplexSolver::Options& opt = {}) {
  SimplexSolver solver(opt);
  LpSolution sol = solver.solve(alp.lp);
  LpOutcome out;
  out.iterations = sol.iterations;
  for (std::size_t c = 0; c < alp.col_bundle.size(); ++c) {
    double x = std::min(1.0, sol.x[c]);
    if (x > 1e-12) {
      out.x.entries.push_back({alp.col_bundle[c].first, alp.col_bundle[c].second, x});
      out.x.objective += alp.lp.objective[c] * x;
    }
  }
  std::sort(out.x.entries.begin(), out.x.entries.end(),
            [](const FractionalSolution::Entry& a, const FractionalSolution::Entry& b) {
              if (a.bidder != b.bidder) return a.bidder < b.bidder;
              return a.bundle < b.bundle;
            });
  out.duals.num_bidders = alp.num_bidders;
  out.duals.num_channels = alp.num_channels;
  out.duals.y.assign(static_cast<std::size_t>(alp.num_bidders) * alp.num_channels, 0.0);
  out.duals.z.assign(alp.num_bidders, 0.0);
  for (int v = 0; v < alp.num_bidders; ++v) {
    for (int j = 1; j <= alp.num_channels; ++j) {
      int row = alp.row_conflict[v * alp.num_channels + (j - 1)];
      if (row >= 0)
        out.duals.y[v * alp.num_channels + (j - 1)] = std::max(0.0, sol.duals[row]);
    }
    out.duals.z[v] = std::max(0.0, sol.duals[alp.row_bidder[v]]);
  }
  return out;
}

// First violated FractionalSolution invariant, or empty string if feasible.
inline std::string check_fractional(const FractionalSolution& x,
                                    const ConflictStructure& g, const Ordering& pi,
                                    int k, double rho, double tol = 1e-7) {
  int n = g.size();
  std::vector<double> bidder_mass(n, 0.0);
  std::vector<double> channel_mass(static_cast<std::size_t>(n) * k, 0.0);
  for (const auto& e : x.entries) {
    if (e.bidder < 0 || e.bidder >= n) return "entry references a bad bidder";
    if (e.bundle == 0 || (e.bundle & ~((ChannelMask{1} << k) - 1)))
      return "entry references a bad bundle";
    if (e.x < -tol || e.x > 1.0 + tol) return "entry outside [0,1]";
    bidder_mass[e.bidder] += e.x;
    ChannelMask rest = e.bundle;
    while (rest) {
      int j = std::countr_zero(rest) + 1;
      rest &= rest - 1;
      channel_mass[e.bidder * k + (j - 1)] += e.x;
    }
  }
  for (int v = 0; v < n; ++v)
    if (bidder_mass[v] > 1.0 + tol)
      return "bidder " + std::to_string(v) + " has total mass " +
             std::to_string(bidder_mass[v]);
  for (int v = 0; v < n; ++v) {
    for (int j = 1; j <= k; ++j) {
      int layer = g.layer_for_channel(j);
      double mass = 0.0;
      for (int u = 0; u < n; ++u) {
        if (u == v || pi.position[u] >= pi.position[v]) continue;
        double coeff = detail::conflict_coefficient(g, layer, u, v);
        if (coeff > 0.0) mass += coeff * channel_mass[u * k + (j - 1)];
      }
      if (mass > rho + tol)
        return "conflict mass " + std::to_string(mass) + " at bidder " +
               std::to_string(v) + " channel " + std::to_string(j) + " exceeds rho";
    }
  }
  return {};
}

// Embeds a feasible allocation as the 0/1 fractional solution.
inline FractionalSolution allocation_to_fractional(const Allocation& alloc,
                                                   const AuctionInstance& inst,
                                                   const ConflictStructure& g, int k) {
  AllocationCheck chk = verify_allocation(g, k, alloc);
  if (!chk.ok)
    throw std::invalid_argument(
        "allocation is infeasible on channel " + std::to_string(chk.channel) +
        " at bidder " + std::to_string(chk.vertex));
  FractionalSolution x;
  for (int v = 0; v < alloc.size(); ++v) {
    if (alloc.bundles[v] == 0) continue;
    x.entries.push_back({v, alloc.bundles[v], 1.0});
    x.objective += evaluate(inst.valuations[v], alloc.bundles[v]).to_double();
  }
  return x;
}

inline double value_of(const FractionalSolution& x, const AuctionInstance& inst) {
  double total = 0.0;
  for (const auto& e : x.entries)
    total += evaluate(inst.valuations[e.bidder], e.bundle).to_double() * e.x;
  return total;
}

// All 2^k - 1 nonempty bundles; the explicit path only enumerates when the
// bundle space is small.
inline std::vector<ChannelMask> all_bundles(int k) {
  if (k > 6)
    throw std::invalid_argument(
        "full bundle enumeration is limited to k <= 6; pass explicit bundle "
        "lists or use oracle mode");
  std::vector<ChannelMask> out;
  for (ChannelMask m = 1; m < (ChannelMask{1} << k); ++m) out.push_back(m);
  return out;
}

struct OracleSolveOptions {
  int max_rounds = 0;  // 0: default 10*n*k
  SimplexSolver::Options lp;
};

struct OracleSolveResult {
  FractionalSolution x;
  DualPrices duals;
  bool converged = false;
  int rounds = 0;
  int columns = 0;
};

// Column generation against the bidders' demand oracles.  Bidder-specific
// prices charge each forward neighbor's dual: p_{v,j} = sum over u with
// pi(v) < pi(u) of the (v->u, channel j) conflict coefficient times y_{u,j}.
// A bidder whose demand utility beats z_v by more than 1e-7 contributes a
// new column; termination means no bidder can.
inline OracleSolveResult solve_with_oracles(const AuctionInstance& inst,
                                            const ConflictStructure& g,
                                            const Ordering& pi,
                                            const OracleSolveOptions& opt = {}) {
  inst.validate();
  int n = inst.num_bidders;
  int k = inst.num_channels;
  pi.validate(n);
  int max_rounds = opt.max_rounds > 0 ? opt.max_rounds : 10 * n * k;

  std::vector<std::set<ChannelMask>> restricted(n);
  for (int v = 0; v < n; ++v)
    for (int j = 0; j < k; ++j) restricted[v].insert(ChannelMask{1} << j);

  OracleSolveResult res;
  for (int round = 1; round <= max_rounds; ++round) {
    res.rounds = round;
    std::vector<std::vector<ChannelMask>> lists(n);
    for (int v = 0; v < n; ++v)
      lists[v].assign(restricted[v].begin(), restricted[v].end());
    AuctionLp alp = build_lp(inst, g, pi, lists);
    LpOutcome outcome = solve_explicit(alp, opt.lp);
    res.x = outcome.x;
    res.duals = outcome.duals;
    res.columns = static_cast<int>(alp.col_bundle.size());

    bool added = false;
    for (int v = 0; v < n; ++v) {
      std::vector<double> prices(k, 0.0);
      for (int j = 1; j <= k; ++j) {
        int layer = g.layer_for_channel(j);
        double p = 0.0;
        for (int u = 0; u < n; ++u) {
          if (u == v || pi.position[u] <= pi.position[v]) continue;
          double coeff = detail::conflict_coefficient(g, layer, v, u);
          if (coeff > 0.0) p += coeff * outcome.duals.y_at(u, j);
        }
        prices[j - 1] = p;
      }
      ChannelMask T = demand_query(inst.valuations[v], prices);
      if (T == 0) continue;
      double utility = evaluate(inst.valuations[v], T).to_double();
      ChannelMask rest = T;
      while (rest) {
        utility -= prices[std::countr_zero(rest)];
        rest &= rest - 1;
      }
      if (utility > outcome.duals.z[v] + 1e-7 && !restricted[v].count(T)) {
        restricted[v].insert(T);
        added = true;
      }
    }
    if (!added) {
      res.converged = true;
      return res;
    }
  }
  res.converged = false;
  return res;
}

}  // namespace chanalloc
