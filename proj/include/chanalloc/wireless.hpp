#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chanalloc/conflict_graph.hpp"

namespace chanalloc {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Transmitters in the plane with transmission radii.
struct TransmitterScene {
  std::vector<Point> points;
  std::vector<double> ranges;

  int size() const { return static_cast<int>(points.size()); }

  void validate() const {
    if (points.size() != ranges.size())
      throw std::invalid_argument("scene needs one range per transmitter");
    if (points.empty()) throw std::invalid_argument("scene has no transmitters");
    for (double r : ranges)
      if (!(r > 0.0)) throw std::invalid_argument("transmission radii must be positive");
  }
};

// Sender/receiver links with path-loss exponent alpha, SINR threshold beta,
// ambient noise nu, and (for the fixed-power variant) per-link powers.
struct LinkScene {
  struct Link {
    Point sender;
    Point receiver;
  };
  std::vector<Link> links;
  double alpha = 2.0;
  double beta = 1.0;
  double nu = 0.0;
  std::optional<std::vector<double>> powers;

  int size() const { return static_cast<int>(links.size()); }
  double length(int i) const { return distance(links[i].sender, links[i].receiver); }

  void validate() const {
    if (links.empty()) throw std::invalid_argument("scene has no links");
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (!(nu >= 0.0)) throw std::invalid_argument("nu must be non-negative");
    for (int i = 0; i < size(); ++i)
      if (!(length(i) > 0.0))
        throw std::invalid_argument("link " + std::to_string(i) +
                                    " has coincident sender and receiver");
    if (powers) {
      if (powers->size() != links.size())
        throw std::invalid_argument("scene needs one power per link");
      for (double p : *powers)
        if (!(p > 0.0)) throw std::invalid_argument("link powers must be positive");
    }
  }
};

// A conflict structure built from a wireless model, together with the
// ordering and rho bound the model certifies.  epsilon/tau are only
// meaningful for the physical-model builders that compute them.
struct BuiltModel {
  ConflictStructure graph;
  Ordering ordering;
  double epsilon = 0.0;
  double tau = 0.0;
};

// Relative tolerance for boundary comparisons on distances.
constexpr double kGeomTol = 1e-12;

namespace detail {

// Indices sorted by decreasing key, ties by smaller index.
inline std::vector<int> order_by_decreasing(const std::vector<double>& key) {
  std::vector<int> idx(key.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (key[a] != key[b]) return key[a] > key[b];
    return a < b;
  });
  return idx;
}

// Validate rho = c*ceil(log2 n) against the backward witness where that is
// affordable; raise it to the witnessed value if the bound is too small.
inline double checked_log_rho(const ConflictStructure& g, const Ordering& pi,
                              double rho, int max_backward = 25) {
  if (max_backward_degree(g, pi) > max_backward) return rho;
  RhoWitness w = compute_rho_witness(g, pi, max_backward);
  return std::max(rho, w.value);
}

}  // namespace detail

// Disks conflict when they overlap; ordering by decreasing radius bounds
// every backward independent set by 5.
inline BuiltModel disk_graph(const TransmitterScene& scene) {
  scene.validate();
  int n = scene.size();
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      double d = distance(scene.points[u], scene.points[v]);
      double reach = scene.ranges[u] + scene.ranges[v];
      if (d <= reach * (1.0 + kGeomTol)) edges.emplace_back(u, v);
    }
  BuiltModel out{ConflictStructure::unweighted(n, edges), Ordering{}};
  out.ordering = Ordering::from_sequence(detail::order_by_decreasing(scene.ranges), 5.0,
                                         RhoProvenance::ModelBound);
  return out;
}

// Square of the disk graph: transmitters conflict when adjacent or sharing
// a disk-graph neighbor.  No closed-form constant is stored; rho is the
// witnessed backward value under the radius ordering (falling back to the
// worst backward degree when neighborhoods are too large to enumerate).
inline BuiltModel distance2_disk_graph(const TransmitterScene& scene) {
  BuiltModel base = disk_graph(scene);
  int n = base.graph.size();
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      bool conflict = base.graph.adjacent(0, u, v);
      for (int w = 0; !conflict && w < n; ++w)
        conflict = w != u && w != v && base.graph.adjacent(0, w, u) &&
                   base.graph.adjacent(0, w, v);
      if (conflict) edges.emplace_back(u, v);
    }
  BuiltModel out{ConflictStructure::unweighted(n, edges), base.ordering};
  if (max_backward_degree(out.graph, out.ordering) <= 25)
    out.ordering.rho = compute_rho_witness(out.graph, out.ordering).value;
  else
    out.ordering.rho = max_backward_degree(out.graph, out.ordering);
  out.ordering.provenance = RhoProvenance::ModelBound;
  return out;
}

// Binary interference: another sender within (1+delta) times a link's own
// length of its receiver blocks that link; either direction makes an edge.
inline BuiltModel protocol_graph(const LinkScene& scene, double delta) {
  scene.validate();
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  int n = scene.size();
  std::vector<double> len(n);
  for (int i = 0; i < n; ++i) len[i] = scene.length(i);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      bool uv = distance(scene.links[u].sender, scene.links[v].receiver) <
                (1.0 + delta) * len[v];
      bool vu = distance(scene.links[v].sender, scene.links[u].receiver) <
                (1.0 + delta) * len[u];
      if (uv || vu) edges.emplace_back(u, v);
    }
  double rho = std::ceil(M_PI / std::asin(delta / (2.0 * (delta + 1.0)))) - 1.0;
  BuiltModel out{ConflictStructure::unweighted(n, edges), Ordering{}};
  out.ordering = Ordering::from_sequence(detail::order_by_decreasing(len), rho,
                                         RhoProvenance::ModelBound);
  return out;
}

// Raw SINR feasibility of a co-channel link set.
inline bool sinr_check(const LinkScene& scene, const std::vector<int>& active) {
  scene.validate();
  if (!scene.powers) throw std::invalid_argument("sinr_check needs link powers");
  std::vector<int> set(active);
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  for (int i : set)
    if (i < 0 || i >= scene.size())
      throw std::invalid_argument("active link id out of range");
  const std::vector<double>& p = *scene.powers;
  for (int i : set) {
    double signal = p[i] / std::pow(scene.length(i), scene.alpha);
    double interference = 0.0;
    for (int j : set) {
      if (j == i) continue;
      double d = distance(scene.links[j].sender, scene.links[i].receiver);
      if (!(d > 0.0))
        throw std::invalid_argument("sender of link " + std::to_string(j) +
                                    " coincides with receiver of link " +
                                    std::to_string(i));
      interference += p[j] / std::pow(d, scene.alpha);
    }
    if (signal < scene.beta * (interference + scene.nu)) return false;
  }
  return true;
}

// Weighted conflicts reproducing the SINR constraint exactly for monotone
// power assignments: a set is independent iff it passes sinr_check.  The
// slack factor 1/(1+epsilon) absorbs rounding of the interference terms.
inline BuiltModel fixed_power_weights(const LinkScene& scene,
                                      double log_rho_constant = 1.0) {
  scene.validate();
  if (!scene.powers)
    throw std::invalid_argument("fixed_power_weights needs link powers");
  int n = scene.size();
  const std::vector<double>& p = *scene.powers;
  std::vector<double> len(n), signal(n);
  for (int i = 0; i < n; ++i) {
    len[i] = scene.length(i);
    signal[i] = p[i] / std::pow(len[i], scene.alpha);
  }

  // Monotonicity: longer links use at least as much power but arrive at
  // most as strong.  Checked pairwise via the length-sorted order.
  {
    std::vector<int> by_len(n);
    std::iota(by_len.begin(), by_len.end(), 0);
    std::stable_sort(by_len.begin(), by_len.end(),
                     [&](int a, int b) { return len[a] < len[b]; });
    for (int t = 0; t + 1 < n; ++t) {
      int a = by_len[t], b = by_len[t + 1];
      if (p[a] > p[b] * (1.0 + 1e-9))
        throw std::invalid_argument("power assignment is not monotone in link length");
      if (signal[a] * (1.0 + 1e-9) < signal[b])
        throw std::invalid_argument(
            "received signal strength is not monotone in link length");
    }
  }

  // Slack from the smallest cross-to-own interference ratio.
  double min_ratio = 1.0;
  bool have_pair = false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double cross = distance(scene.links[j].sender, scene.links[i].receiver);
      if (!(cross > 0.0))
        throw std::invalid_argument("zero cross distance between links " +
                                    std::to_string(j) + " and " + std::to_string(i));
      double ratio = std::pow(len[i] / cross, scene.alpha);
      min_ratio = have_pair ? std::min(min_ratio, ratio) : ratio;
      have_pair = true;
    }
  double epsilon = (scene.beta / 2.0) * min_ratio;
  double scaled_beta = scene.beta / (1.0 + epsilon);

  std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double denom = signal[i] - scaled_beta * scene.nu;
    if (!(denom > 0.0))
      throw std::invalid_argument("noise dominates the signal of link " +
                                  std::to_string(i));
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double cross = distance(scene.links[j].sender, scene.links[i].receiver);
      double interference = p[j] / std::pow(cross, scene.alpha);
      w[j * n + i] = std::min(1.0, scaled_beta * interference / denom);
    }
  }

  BuiltModel out{ConflictStructure::weighted_dense(n, std::move(w)), Ordering{}};
  out.ordering = Ordering::from_sequence(detail::order_by_decreasing(len),
                                         std::max(1.0, log_rho_constant * ceil_log2(n)),
                                         RhoProvenance::ModelBound);
  out.ordering.rho = detail::checked_log_rho(out.graph, out.ordering, out.ordering.rho);
  out.epsilon = epsilon;
  return out;
}

// Weighted conflicts for the variant where transmit powers are chosen later:
// each link burdens only the shorter links after it in the ordering, via
// distance ratios scaled by 1/tau.
inline BuiltModel power_control_weights(const LinkScene& scene,
                                        double log_rho_constant = 1.0) {
  scene.validate();
  if (scene.powers)
    throw std::invalid_argument(
        "power_control_weights chooses powers downstream; scene must not fix them");
  int n = scene.size();
  double tau = 1.0 / (2.0 * std::pow(3.0, scene.alpha) * (4.0 * scene.beta + 2.0));
  std::vector<double> len(n);
  for (int i = 0; i < n; ++i) len[i] = scene.length(i);
  Ordering pi = Ordering::from_sequence(detail::order_by_decreasing(len), 0.0,
                                        RhoProvenance::ModelBound);

  std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v || pi.position[u] >= pi.position[v]) continue;
      double d_uu = len[u];
      double d_u_rv = distance(scene.links[u].sender, scene.links[v].receiver);
      double d_v_ru = distance(scene.links[v].sender, scene.links[u].receiver);
      if (!(d_u_rv > 0.0) || !(d_v_ru > 0.0))
        throw std::invalid_argument("zero cross distance between links " +
                                    std::to_string(u) + " and " + std::to_string(v));
      double own = std::pow(d_uu, scene.alpha);
      double term1 = std::min(1.0, own / std::pow(d_u_rv, scene.alpha));
      double term2 = std::min(1.0, own / std::pow(d_v_ru, scene.alpha));
      w[u * n + v] = (term1 + term2) / tau;
    }

  BuiltModel out{ConflictStructure::weighted_dense(n, std::move(w)), pi};
  out.ordering.rho = std::max(1.0, log_rho_constant * ceil_log2(n));
  out.ordering.rho = detail::checked_log_rho(out.graph, out.ordering, out.ordering.rho);
  out.tau = tau;
  return out;
}

}  // namespace chanalloc
