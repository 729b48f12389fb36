#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chanalloc/auction_lp.hpp"
#include "chanalloc/conflict_graph.hpp"
#include "chanalloc/random.hpp"
#include "chanalloc/valuation.hpp"
#include "chanalloc/wireless.hpp"

namespace chanalloc {

// Counters exposed by the rounding stages, mainly for the statistical
// checks: how many (bidder, bundle) pairs survived the coin flips per half,
// and how many of those the conflict-resolution pass erased again.
struct RoundingStats {
  std::uint64_t rounded[2] = {0, 0};
  std::uint64_t removed[2] = {0, 0};
  int feasible_candidates = 0;  // candidate count of the last repair pass

  void accumulate(const RoundingStats& o) {
    for (int l = 0; l < 2; ++l) {
      rounded[l] += o.rounded[l];
      removed[l] += o.removed[l];
    }
    feasible_candidates = std::max(feasible_candidates, o.feasible_candidates);
  }
};

// Splits x by bundle size: entries with |T|^2 <= k (small bundles, the
// comparison is exact and non-strict) go to the first half, the rest to the
// second.  Both halves inherit feasibility from x.
inline std::pair<FractionalSolution, FractionalSolution> split_by_bundle_size(
    const FractionalSolution& x, int k) {
  FractionalSolution x1, x2;
  for (const auto& e : x.entries) {
    int sz = bundle_size(e.bundle);
    (sz * sz <= k ? x1 : x2).entries.push_back(e);
  }
  return {std::move(x1), std::move(x2)};
}

namespace detail {

// One independent coin per bidder: picks bundle T with probability
// x_{v,T}/scale (bundles in canonical mask order), the leftover mass maps
// to the empty bundle.  Entry order within a bidder follows the sorted
// FractionalSolution layout, so draws are reproducible.
inline std::vector<ChannelMask> sample_tentative(const FractionalSolution& x, int n,
                                                 double scale, RandomStream& rng) {
  std::vector<ChannelMask> tent(n, 0);
  std::size_t i = 0;
  while (i < x.entries.size()) {
    int v = x.entries[i].bidder;
    std::size_t end = i;
    double total = 0.0;
    while (end < x.entries.size() && x.entries[end].bidder == v) {
      total += x.entries[end].x / scale;
      ++end;
    }
    if (total > 1.0 + 1e-6)
      throw std::invalid_argument(
          "rounding probabilities for bidder " + std::to_string(v) +
          " sum to " + std::to_string(total) + " > 1; x is not LP-feasible");
    double u = rng.next_unit();
    double acc = 0.0;
    for (std::size_t t = i; t < end; ++t) {
      acc += x.entries[t].x / scale;
      if (u < acc) {
        tent[v] = x.entries[t].bundle;
        break;
      }
    }
    i = end;
  }
  return tent;
}

// Conflict mass bidder u puts on bidder v given their current bundles.
// Symmetric structures count the full symmetrized weight once if any
// channel is shared; per-channel structures sum the shared channels'
// weights.  Unweighted structures use weight 1 per (shared) adjacency.
inline double shared_conflict_mass(const ConflictStructure& g, int u, int v,
                                   ChannelMask su, ChannelMask sv) {
  ChannelMask shared = su & sv;
  if (!shared) return 0.0;
  if (g.variant() == ChannelVariant::Symmetric) {
    if (!g.adjacent(0, u, v)) return 0.0;
    return g.kind() == ConflictKind::Unweighted ? 1.0 : g.wbar(0, u, v);
  }
  double mass = 0.0;
  ChannelMask rest = shared;
  while (rest) {
    int j = std::countr_zero(rest) + 1;
    rest &= rest - 1;
    int layer = j - 1;
    if (g.adjacent(layer, u, v))
      mass += g.kind() == ConflictKind::Unweighted ? 1.0 : g.wbar(layer, u, v);
  }
  return mass;
}

// True iff u (current bundle su) blocks v (bundle sv) outright: they share
// a channel on which they conflict.
inline bool shares_conflict(const ConflictStructure& g, int u, int v, ChannelMask su,
                            ChannelMask sv) {
  ChannelMask shared = su & sv;
  if (!shared) return false;
  if (g.variant() == ChannelVariant::Symmetric) return g.adjacent(0, u, v);
  ChannelMask rest = shared;
  while (rest) {
    int j = std::countr_zero(rest);
    rest &= rest - 1;
    if (g.adjacent(j, u, v)) return true;
  }
  return false;
}

// Backward conflict mass of v against final/current states `state`,
// counting only bidders earlier in pi.
inline double backward_shared_mass(const ConflictStructure& g, const Ordering& pi,
                                   const std::vector<ChannelMask>& state, int v) {
  double mass = 0.0;
  for (int u = 0; u < g.size(); ++u) {
    if (u == v || pi.position[u] >= pi.position[v]) continue;
    mass += shared_conflict_mass(g, u, v, state[u], state[v]);
  }
  return mass;
}

}  // namespace detail

// Conflict resolution for plain graphs: walk bidders in pi order and erase
// any bidder that shares a channel with an earlier, still-standing bidder.
// Mutates `tent` in place; returns the number of erasures among bidders
// that had a nonempty tentative bundle.
inline std::uint64_t resolve_conflicts_unweighted(const ConflictStructure& g,
                                                  const Ordering& pi,
                                                  std::vector<ChannelMask>& tent) {
  std::uint64_t removed = 0;
  std::vector<int> order = pi.vertices_by_position();
  for (int v : order) {
    if (tent[v] == 0) continue;
    for (int u : order) {
      if (u == v) break;  // order is increasing pi; stop at v itself
      if (tent[u] != 0 && detail::shares_conflict(g, u, v, tent[u], tent[v])) {
        tent[v] = 0;
        ++removed;
        break;
      }
    }
  }
  return removed;
}

// Partial conflict resolution for weighted graphs: erase a bidder only when
// the earlier, still-standing shared mass reaches 1/2.  Survivors satisfy
// the partly-feasible property (backward shared mass < 1/2 everywhere).
inline std::uint64_t resolve_conflicts_partial(const ConflictStructure& g,
                                               const Ordering& pi,
                                               std::vector<ChannelMask>& tent) {
  std::uint64_t removed = 0;
  std::vector<int> order = pi.vertices_by_position();
  for (int v : order) {
    if (tent[v] == 0) continue;
    double mass = 0.0;
    for (int u : order) {
      if (u == v) break;
      if (tent[u] != 0) mass += detail::shared_conflict_mass(g, u, v, tent[u], tent[v]);
    }
    if (mass >= 0.5) {
      tent[v] = 0;
      ++removed;
    }
  }
  return removed;
}

// Randomized rounding for plain conflict graphs: split by bundle size,
// keep each bidder's bundle with probability x/(2*sqrt(k)*rho) per half,
// resolve conflicts in pi order, and return the better half.  The output
// is feasible for every seed.
inline Allocation round_unweighted(const AuctionInstance& inst,
                                   const FractionalSolution& x,
                                   const ConflictStructure& g, const Ordering& pi,
                                   RandomStream& rng, RoundingStats* stats = nullptr) {
  if (g.kind() != ConflictKind::Unweighted ||
      g.variant() != ChannelVariant::Symmetric)
    throw std::invalid_argument("round_unweighted needs a plain shared-channel graph");
  int n = g.size();
  int k = inst.num_channels;
  double scale = std::max(1.0, 2.0 * std::sqrt(static_cast<double>(k)) * pi.rho);
  auto [x1, x2] = split_by_bundle_size(x, k);

  Allocation best;
  Rational best_value(0);
  const FractionalSolution* halves[2] = {&x1, &x2};
  for (int l = 0; l < 2; ++l) {
    std::vector<ChannelMask> tent = detail::sample_tentative(*halves[l], n, scale, rng);
    std::uint64_t nonempty = 0;
    for (ChannelMask m : tent) nonempty += (m != 0);
    std::uint64_t removed = resolve_conflicts_unweighted(g, pi, tent);
    if (stats) {
      stats->rounded[l] += nonempty;
      stats->removed[l] += removed;
    }
    Rational value = allocation_value(inst, tent);
    if (l == 0 || value > best_value) {
      best_value = value;
      best.bundles = std::move(tent);
    }
  }
  best.value = best_value;
  AllocationCheck chk = verify_allocation(g, k, best);
  if (!chk.ok)
    throw std::logic_error("rounding produced an infeasible allocation");
  return best;
}

// Randomized rounding for weighted graphs: probability x/(4*sqrt(k)*rho),
// partial conflict resolution, better half.  The result is only
// partly-feasible; feed it to make_feasible.
inline Allocation round_weighted_partial(const AuctionInstance& inst,
                                         const FractionalSolution& x,
                                         const ConflictStructure& g, const Ordering& pi,
                                         RandomStream& rng,
                                         RoundingStats* stats = nullptr) {
  if (g.kind() != ConflictKind::Weighted || g.variant() != ChannelVariant::Symmetric)
    throw std::invalid_argument("round_weighted_partial needs a weighted graph");
  int n = g.size();
  int k = inst.num_channels;
  double scale = std::max(1.0, 4.0 * std::sqrt(static_cast<double>(k)) * pi.rho);
  auto [x1, x2] = split_by_bundle_size(x, k);

  Allocation best;
  Rational best_value(0);
  const FractionalSolution* halves[2] = {&x1, &x2};
  for (int l = 0; l < 2; ++l) {
    std::vector<ChannelMask> tent = detail::sample_tentative(*halves[l], n, scale, rng);
    std::uint64_t nonempty = 0;
    for (ChannelMask m : tent) nonempty += (m != 0);
    std::uint64_t removed = resolve_conflicts_partial(g, pi, tent);
    if (stats) {
      stats->rounded[l] += nonempty;
      stats->removed[l] += removed;
    }
    Rational value = allocation_value(inst, tent);
    if (l == 0 || value > best_value) {
      best_value = value;
      best.bundles = std::move(tent);
    }
  }
  best.value = best_value;
  for (int v = 0; v < n; ++v) {
    if (best.bundles[v] == 0) continue;
    if (detail::backward_shared_mass(g, pi, best.bundles, v) >= 0.5)
      throw std::logic_error("partial resolution left a bidder above the 1/2 bound");
  }
  return best;
}

// Turns a partly-feasible allocation into a feasible one by candidate
// extraction: repeatedly snapshot the unplaced bidders, keep each one (in
// decreasing pi order) whose shared conflict mass against the snapshot's
// current bundles stays below 1, and emit the kept set as a candidate.
// Every candidate is feasible, the candidate count stays within
// max(1, ceil(log2 n)), the candidate values sum to b(S) exactly, and the
// returned best candidate is within that factor of b(S).  All four
// guarantees are rechecked at runtime.
inline Allocation make_feasible(const AuctionInstance& inst, const Allocation& partly,
                                const ConflictStructure& g, const Ordering& pi,
                                RoundingStats* stats = nullptr) {
  int n = g.size();
  int k = inst.num_channels;
  if (partly.size() != n)
    throw std::invalid_argument("allocation size does not match bidder count");
  pi.validate(n);
  ChannelMask all = (ChannelMask{1} << k) - 1;
  for (int v = 0; v < n; ++v) {
    if (partly.bundles[v] & ~all)
      throw std::invalid_argument("allocation uses a channel above k");
    if (partly.bundles[v] == 0) continue;
    if (detail::backward_shared_mass(g, pi, partly.bundles, v) >= 0.5)
      throw std::invalid_argument(
          "input allocation is not partly-feasible (backward shared mass >= 1/2 "
          "at bidder " + std::to_string(v) + ")");
  }

  std::vector<int> order = pi.vertices_by_position();
  std::vector<char> placed(n, 0);
  int unplaced = n;
  int max_candidates = std::max(1, ceil_log2(n));

  Allocation best;
  Rational best_value(0);
  Rational total(0);
  int candidates = 0;
  while (unplaced > 0) {
    ++candidates;
    if (candidates > max_candidates)
      throw std::logic_error("candidate extraction exceeded its logarithmic bound");
    std::vector<char> snapshot(placed);  // 1 = not part of this candidate
    std::vector<ChannelMask> cand(n, 0);
    for (int v = 0; v < n; ++v)
      if (!snapshot[v]) cand[v] = partly.bundles[v];
    int kept_or_left = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int v = *it;
      if (snapshot[v]) continue;
      double mass = 0.0;
      for (int u = 0; u < n; ++u)
        if (u != v && !snapshot[u])
          mass += detail::shared_conflict_mass(g, u, v, cand[u], cand[v]);
      if (mass < 1.0) {
        placed[v] = 1;  // leaves the unplaced pool with its bundle intact
        ++kept_or_left;
      } else {
        cand[v] = 0;  // stays for a later candidate
      }
    }

    Allocation c;
    c.bundles = cand;
    c.value = allocation_value(inst, cand);
    AllocationCheck chk = verify_allocation(g, k, c);
    if (!chk.ok)
      throw std::logic_error("candidate " + std::to_string(candidates) +
                             " is infeasible on channel " + std::to_string(chk.channel));
    int new_unplaced = unplaced - kept_or_left;
    if (new_unplaced > 0 && 2 * new_unplaced >= unplaced)
      throw std::logic_error("candidate extraction failed to halve the unplaced set");
    unplaced = new_unplaced;

    total += c.value;
    if (candidates == 1 || c.value > best_value) {
      best_value = c.value;
      best = std::move(c);
    }
  }
  if (stats) stats->feasible_candidates = candidates;

  Rational input_value = allocation_value(inst, partly.bundles);
  if (total != input_value)
    throw std::logic_error("candidate values do not decompose the input value");
  if (best_value * Rational(max_candidates) < input_value)
    throw std::logic_error("best candidate misses the logarithmic value share");
  best.value = best_value;
  return best;
}

// Rounding for per-channel conflict structures: same pipeline with scaling
// 2*k*rho (plain layers) or 4*k*rho plus candidate extraction (weighted
// layers); conflicts are always evaluated on the shared channels' own
// layers.  Output is feasible for every seed.
inline Allocation round_asymmetric(const AuctionInstance& inst,
                                   const FractionalSolution& x,
                                   const ConflictStructure& g, const Ordering& pi,
                                   RandomStream& rng, RoundingStats* stats = nullptr) {
  if (g.variant() != ChannelVariant::Asymmetric)
    throw std::invalid_argument("round_asymmetric needs a per-channel structure");
  int n = g.size();
  int k = inst.num_channels;
  if (g.layer_count() != k)
    throw std::invalid_argument("per-channel structure must have k layers");
  bool weighted = g.kind() == ConflictKind::Weighted;
  double scale = std::max(1.0, (weighted ? 4.0 : 2.0) * k * pi.rho);
  auto [x1, x2] = split_by_bundle_size(x, k);

  Allocation best;
  Rational best_value(0);
  const FractionalSolution* halves[2] = {&x1, &x2};
  for (int l = 0; l < 2; ++l) {
    std::vector<ChannelMask> tent = detail::sample_tentative(*halves[l], n, scale, rng);
    std::uint64_t nonempty = 0;
    for (ChannelMask m : tent) nonempty += (m != 0);
    std::uint64_t removed = weighted ? resolve_conflicts_partial(g, pi, tent)
                                     : resolve_conflicts_unweighted(g, pi, tent);
    if (stats) {
      stats->rounded[l] += nonempty;
      stats->removed[l] += removed;
    }
    Rational value = allocation_value(inst, tent);
    if (l == 0 || value > best_value) {
      best_value = value;
      best.bundles = std::move(tent);
    }
  }
  best.value = best_value;
  if (weighted) best = make_feasible(inst, best, g, pi, stats);
  AllocationCheck chk = verify_allocation(g, k, best);
  if (!chk.ok)
    throw std::logic_error("rounding produced an infeasible allocation");
  return best;
}

enum class SolveMode { Explicit, Oracle };

struct SolveOptions {
  int trials = 100;
  std::uint64_t seed = 1;
  SolveMode mode = SolveMode::Explicit;
  // Explicit mode: bundle lists per bidder; empty means "derive" (listed
  // bundles for explicit valuations, all bundles when k <= 6).
  std::vector<std::vector<ChannelMask>> bundles;
  int oracle_max_rounds = 0;
  std::optional<double> rho_override;
  SimplexSolver::Options lp;
};

struct EndToEndReport {
  FractionalSolution x;
  double lp_objective = 0.0;
  Allocation best;
  double mean_value = 0.0;
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double rho_used = 0.0;
  RhoProvenance rho_provenance = RhoProvenance::Heuristic;
  bool oracle_converged = true;
  int oracle_rounds = 0;
  RoundingStats stats;
  int trials = 0;
  std::uint64_t seed = 0;
  double lp_ms = 0.0;
  double rounding_ms = 0.0;
};

// Default bundle lists for the explicit LP path.
inline std::vector<std::vector<ChannelMask>> default_bundles(
    const AuctionInstance& inst) {
  std::vector<std::vector<ChannelMask>> lists(inst.num_bidders);
  bool need_enum = false;
  for (int v = 0; v < inst.num_bidders; ++v) {
    const ValuationSpec& s = inst.valuations[v];
    if (s.kind == ValuationKind::Explicit) {
      for (const auto& [mask, val] : s.bundles) lists[v].push_back(mask);
      if (lists[v].empty()) lists[v].push_back(1);  // values nothing; harmless
    } else {
      need_enum = true;
    }
  }
  if (need_enum) {
    std::vector<ChannelMask> all = all_bundles(inst.num_channels);  // throws if k > 6
    for (int v = 0; v < inst.num_bidders; ++v)
      if (inst.valuations[v].kind != ValuationKind::Explicit) lists[v] = all;
  }
  return lists;
}

// Full pipeline: solve the relaxation (explicit columns or demand oracles),
// then take the best allocation over `trials` independent rounding runs.
inline EndToEndReport solve_end_to_end(const AuctionInstance& inst,
                                       const BuiltModel& model,
                                       const SolveOptions& opts = {}) {
  inst.validate();
  const ConflictStructure& g = model.graph;
  Ordering pi = model.ordering;
  if (opts.rho_override) {
    pi.rho = *opts.rho_override;
    pi.provenance = RhoProvenance::Heuristic;
  }
  pi.validate(g.size());
  if (g.size() != inst.num_bidders)
    throw std::invalid_argument("conflict structure size does not match instance");
  if (opts.trials < 1) throw std::invalid_argument("trials must be >= 1");

  EndToEndReport rep;
  rep.trials = opts.trials;
  rep.seed = opts.seed;
  rep.rho_used = pi.rho;
  rep.rho_provenance = pi.provenance;

  auto t0 = std::chrono::steady_clock::now();
  if (opts.mode == SolveMode::Oracle) {
    OracleSolveOptions oopt;
    oopt.max_rounds = opts.oracle_max_rounds;
    oopt.lp = opts.lp;
    OracleSolveResult res = solve_with_oracles(inst, g, pi, oopt);
    rep.x = res.x;
    rep.oracle_converged = res.converged;
    rep.oracle_rounds = res.rounds;
  } else {
    std::vector<std::vector<ChannelMask>> lists =
        opts.bundles.empty() ? default_bundles(inst) : opts.bundles;
    AuctionLp alp = build_lp(inst, g, pi, lists);
    rep.x = solve_explicit(alp, opts.lp).x;
  }
  rep.lp_objective = rep.x.objective;
  auto t1 = std::chrono::steady_clock::now();
  rep.lp_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  std::string bad = check_fractional(rep.x, g, pi, inst.num_channels, pi.rho, 1e-5);
  if (!bad.empty())
    throw std::runtime_error("LP solution failed its feasibility check: " + bad);

  Rational sum(0);
  Rational best_value(-1);
  for (int t = 0; t < opts.trials; ++t) {
    RandomStream rng(RandomStream::derive(opts.seed, static_cast<std::uint64_t>(t)));
    Allocation alloc;
    if (g.variant() == ChannelVariant::Asymmetric) {
      alloc = round_asymmetric(inst, rep.x, g, pi, rng, &rep.stats);
    } else if (g.kind() == ConflictKind::Unweighted) {
      alloc = round_unweighted(inst, rep.x, g, pi, rng, &rep.stats);
    } else {
      alloc = round_weighted_partial(inst, rep.x, g, pi, rng, &rep.stats);
      alloc = make_feasible(inst, alloc, g, pi, &rep.stats);
    }
    sum += alloc.value;
    if (alloc.value > best_value) {
      best_value = alloc.value;
      rep.best = std::move(alloc);
    }
  }
  auto t2 = std::chrono::steady_clock::now();
  rep.rounding_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  rep.mean_value = sum.to_double() / opts.trials;
  if (rep.lp_objective > 1e-12)
    rep.ratio = rep.best.value.to_double() / rep.lp_objective;
  return rep;
}

}  // namespace chanalloc
