#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "chanalloc/rational.hpp"

namespace chanalloc {

// Channels are numbered 1..k externally; internally a bundle is a bitmask
// with bit (j-1) standing for channel j.
using ChannelMask = std::uint32_t;
constexpr int kMaxChannels = 31;

inline int bundle_size(ChannelMask m) { return std::popcount(m); }

inline std::vector<int> channels_of(ChannelMask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m) + 1);
    m &= m - 1;
  }
  return out;
}

inline ChannelMask mask_of(const std::vector<int>& channels, int k) {
  ChannelMask m = 0;
  for (int c : channels) {
    if (c < 1 || c > k)
      throw std::invalid_argument("channel id " + std::to_string(c) +
                                  " outside 1.." + std::to_string(k));
    ChannelMask bit = ChannelMask{1} << (c - 1);
    if (m & bit)
      throw std::invalid_argument("duplicate channel id " + std::to_string(c));
    m |= bit;
  }
  return m;
}

// ceil(log2(n)) for n >= 1; 0 for n <= 1.
inline int ceil_log2(int n) {
  if (n <= 1) return 0;
  return std::bit_width(static_cast<unsigned>(n - 1));
}

enum class ConflictKind { Unweighted, Weighted };
enum class ChannelVariant { Symmetric, Asymmetric };
enum class RhoProvenance { Exact, ModelBound, Heuristic };

inline const char* to_string(RhoProvenance p) {
  switch (p) {
    case RhoProvenance::Exact: return "exact";
    case RhoProvenance::ModelBound: return "model-bound";
    case RhoProvenance::Heuristic: return "heuristic";
  }
  return "?";
}

// A bidder ordering pi together with the interference bound rho it certifies.
struct Ordering {
  std::vector<int> position;  // position[v] in [0, n), lower = earlier
  double rho = 0.0;
  RhoProvenance provenance = RhoProvenance::Heuristic;

  int size() const { return static_cast<int>(position.size()); }

  std::vector<int> vertices_by_position() const {
    std::vector<int> order(position.size());
    for (std::size_t v = 0; v < position.size(); ++v) order[position[v]] = static_cast<int>(v);
    return order;
  }

  static Ordering from_sequence(const std::vector<int>& order, double rho,
                                RhoProvenance prov) {
    Ordering o;
    o.position.assign(order.size(), -1);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      int v = order[pos];
      if (v < 0 || v >= static_cast<int>(order.size()) || o.position[v] != -1)
        throw std::invalid_argument("ordering is not a permutation of the bidders");
      o.position[v] = static_cast<int>(pos);
    }
    o.rho = rho;
    o.provenance = prov;
    return o;
  }

  void validate(int n) const {
    if (size() != n)
      throw std::invalid_argument("ordering size does not match bidder count");
    std::vector<char> seen(n, 0);
    for (int v = 0; v < n; ++v) {
      int p = position[v];
      if (p < 0 || p >= n || seen[p])
        throw std::invalid_argument("ordering is not a permutation of the bidders");
      seen[p] = 1;
    }
    if (!(rho >= 0.0))
      throw std::invalid_argument("ordering carries a negative rho");
  }
};

// An allocation assigns each bidder a (possibly empty) channel bundle.
struct Allocation {
  std::vector<ChannelMask> bundles;
  Rational value;  // total bid value, maintained by producers

  int size() const { return static_cast<int>(bundles.size()); }
};

struct AllocationCheck {
  bool ok = true;
  int channel = 0;  // first violated channel (1-based) when !ok
  int vertex = -1;  // a bidder whose incoming conflict mass is >= 1 there
};

struct RhoWitness {
  bool ok = true;
  double value = 0.0;        // largest witnessed backward independent mass
  int vertex = -1;           // bidder attaining it
  int channel = 1;           // channel layer attaining it (1 for symmetric)
  std::vector<int> set;      // the witnessing independent predecessor set
};

namespace detail {

// Branch-and-bound maximizer used by witness checks: among `m` candidate
// vertices with pairwise directed weights w[i][j] (weight i puts on j) and
// per-candidate gains, find the independent subset maximizing total gain.
// A set M is independent iff for every j in M the incoming sum over M is < 1.
// Works for unweighted graphs via 0/1 weights (incoming sum < 1 == no
// neighbor present).  Candidates must be pre-sorted by decreasing gain.
struct SubsetMaximizer {
  int m = 0;
  const std::vector<double>* w = nullptr;     // m*m, row-major, w[i*m+j]
  const std::vector<double>* gain = nullptr;  // size m
  std::vector<double> suffix;                 // suffix gain sums
  std::vector<double> incoming;               // incoming sum per candidate
  std::vector<int> chosen;
  double best_value = 0.0;
  std::vector<int> best_set;

  void run() {
    suffix.assign(m + 1, 0.0);
    for (int i = m - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + (*gain)[i];
    incoming.assign(m, 0.0);
    chosen.clear();
    best_value = 0.0;
    best_set.clear();
    dfs(0, 0.0);
  }

  void dfs(int i, double cur) {
    if (cur > best_value) {
      best_value = cur;
      best_set = chosen;
    }
    if (i >= m) return;
    if (cur + suffix[i] <= best_value) return;
    // Include candidate i if the set stays independent.
    bool can = incoming[i] < 1.0;
    if (can) {
      for (int u : chosen) {
        if (incoming[u] + (*w)[i * m + u] >= 1.0) {
          can = false;
          break;
        }
      }
    }
    if (can) {
      for (int j = 0; j < m; ++j) incoming[j] += (*w)[i * m + j];
      chosen.push_back(i);
      dfs(i + 1, cur + (*gain)[i]);
      chosen.pop_back();
      for (int j = 0; j < m; ++j) incoming[j] -= (*w)[i * m + j];
    }
    dfs(i + 1, cur);
  }
};

}  // namespace detail

// Conflict structure over n bidders: either a plain graph (Unweighted) or a
// directed weight map (Weighted), either shared across channels (Symmetric)
// or one layer per channel (Asymmetric).  Self-weights are fixed to zero.
class ConflictStructure {
 public:
  static ConflictStructure unweighted(int n,
                                      const std::vector<std::pair<int, int>>& edges) {
    return unweighted_layers(n, {edges}, ChannelVariant::Symmetric);
  }

  static ConflictStructure unweighted_per_channel(
      int n, const std::vector<std::vector<std::pair<int, int>>>& layers) {
    return unweighted_layers(n, layers, ChannelVariant::Asymmetric);
  }

  static ConflictStructure weighted(
      int n, const std::vector<std::tuple<int, int, double>>& weights) {
    return weighted_layers(n, {weights}, ChannelVariant::Symmetric);
  }

  static ConflictStructure weighted_per_channel(
      int n, const std::vector<std::vector<std::tuple<int, int, double>>>& layers) {
    return weighted_layers(n, layers, ChannelVariant::Asymmetric);
  }

  // Dense single-layer weighted constructor for the wireless builders;
  // w has n*n entries, w[u*n+v] = weight u puts on v.
  static ConflictStructure weighted_dense(int n, std::vector<double> w) {
    if (static_cast<int>(w.size()) != n * n)
      throw std::invalid_argument("weighted_dense: matrix size mismatch");
    ConflictStructure g;
    g.n_ = n;
    g.kind_ = ConflictKind::Weighted;
    g.variant_ = ChannelVariant::Symmetric;
    for (int v = 0; v < n; ++v) w[v * n + v] = 0.0;
    for (double x : w)
      if (!(x >= 0.0)) throw std::invalid_argument("negative conflict weight");
    g.weights_.push_back(std::move(w));
    g.rebuild_adjacency();
    return g;
  }

  int size() const { return n_; }
  ConflictKind kind() const { return kind_; }
  ChannelVariant variant() const { return variant_; }
  int layer_count() const { return static_cast<int>(weights_.size()); }

  // Maps a 1-based channel id to its weight layer.
  int layer_for_channel(int channel) const {
    if (channel < 1)
      throw std::invalid_argument("channel ids are 1-based");
    if (variant_ == ChannelVariant::Symmetric) return 0;
    if (channel > layer_count())
      throw std::invalid_argument("unknown channel id " + std::to_string(channel) +
                                  " for per-channel conflict structure");
    return channel - 1;
  }

  double weight(int layer, int u, int v) const { return weights_[layer][u * n_ + v]; }

  // Symmetrized weight: what u and v put on each other combined.
  double wbar(int layer, int u, int v) const {
    return weights_[layer][u * n_ + v] + weights_[layer][v * n_ + u];
  }

  bool adjacent(int layer, int u, int v) const {
    return (adj_[layer][v * words_ + (u >> 6)] >> (u & 63)) & 1u;
  }

  const std::uint64_t* adjacency_row(int layer, int v) const {
    return adj_[layer].data() + static_cast<std::size_t>(v) * words_;
  }
  int adjacency_words() const { return words_; }

  // True iff `set` may share one channel: for the unweighted kind no two
  // members are adjacent, for the weighted kind every member's incoming
  // weight sum over the others is strictly below 1.
  bool is_independent(int channel, const std::vector<int>& set) const {
    int layer = layer_for_channel(channel);
    std::vector<int> members = canonical_set(set);
    return independent_in_layer(layer, members) < 0;
  }

  // Backward neighborhood of v under pi: bidders earlier than v that share a
  // conflict with it on any channel layer.
  std::vector<int> backward_set(const Ordering& pi, int v) const {
    pi.validate(n_);
    check_vertex(v);
    std::vector<int> out;
    for (int u = 0; u < n_; ++u) {
      if (u == v || pi.position[u] >= pi.position[v]) continue;
      for (int layer = 0; layer < layer_count(); ++layer) {
        if (adjacent(layer, u, v)) {
          out.push_back(u);
          break;
        }
      }
    }
    return out;
  }

  // Index of a member whose incoming mass within `members` is >= 1 (or that
  // has a neighbor inside, for the unweighted kind); -1 if independent.
  int independent_in_layer(int layer, const std::vector<int>& members) const {
    if (kind_ == ConflictKind::Unweighted) {
      for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = 0; j < members.size(); ++j)
          if (i != j && adjacent(layer, members[j], members[i]))
            return static_cast<int>(i);
      return -1;
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      double in = 0.0;
      for (std::size_t j = 0; j < members.size(); ++j)
        if (i != j) in += weight(layer, members[j], members[i]);
      if (in >= 1.0) return static_cast<int>(i);
    }
    return -1;
  }

 private:
  static ConflictStructure unweighted_layers(
      int n, const std::vector<std::vector<std::pair<int, int>>>& layers,
      ChannelVariant variant) {
    ConflictStructure g;
    g.init(n, ConflictKind::Unweighted, variant, static_cast<int>(layers.size()));
    for (std::size_t layer = 0; layer < layers.size(); ++layer) {
      for (auto [u, v] : layers[layer]) {
        g.check_vertex(u);
        g.check_vertex(v);
        if (u == v) continue;  // self conflicts carry no meaning
        g.weights_[layer][u * n + v] = 1.0;
        g.weights_[layer][v * n + u] = 1.0;
      }
    }
    g.rebuild_adjacency();
    return g;
  }

  static ConflictStructure weighted_layers(
      int n, const std::vector<std::vector<std::tuple<int, int, double>>>& layers,
      ChannelVariant variant) {
    ConflictStructure g;
    g.init(n, ConflictKind::Weighted, variant, static_cast<int>(layers.size()));
    for (std::size_t layer = 0; layer < layers.size(); ++layer) {
      std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
      for (auto [u, v, w] : layers[layer]) {
        g.check_vertex(u);
        g.check_vertex(v);
        if (!(w >= 0.0)) throw std::invalid_argument("negative conflict weight");
        if (u == v) continue;  // self-weights are fixed to 0
        if (seen[u * n + v])
          throw std::invalid_argument("duplicate weight entry for pair (" +
                                      std::to_string(u) + "," + std::to_string(v) + ")");
        seen[u * n + v] = 1;
        g.weights_[layer][u * n + v] = w;
      }
    }
    g.rebuild_adjacency();
    return g;
  }

  void init(int n, ConflictKind kind, ChannelVariant variant, int layers) {
    if (n <= 0) throw std::invalid_argument("conflict structure needs >= 1 bidder");
    if (layers <= 0) throw std::invalid_argument("conflict structure needs >= 1 layer");
    if (variant == ChannelVariant::Symmetric && layers != 1)
      throw std::invalid_argument("symmetric structure has exactly one layer");
    n_ = n;
    kind_ = kind;
    variant_ = variant;
    weights_.assign(layers, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0));
  }

  void rebuild_adjacency() {
    words_ = (n_ + 63) / 64;
    adj_.assign(weights_.size(),
                std::vector<std::uint64_t>(static_cast<std::size_t>(n_) * words_, 0));
    for (std::size_t layer = 0; layer < weights_.size(); ++layer) {
      for (int u = 0; u < n_; ++u) {
        for (int v = 0; v < n_; ++v) {
          if (u == v) continue;
          if (wbar(static_cast<int>(layer), u, v) > 0.0) {
            adj_[layer][v * words_ + (u >> 6)] |= std::uint64_t{1} << (u & 63);
          }
        }
      }
    }
  }

  void check_vertex(int v) const {
    if (v < 0 || v >= n_)
      throw std::invalid_argument("bidder id " + std::to_string(v) + " out of range");
  }

  static std::vector<int> canonical_set(const std::vector<int>& set) {
    std::vector<int> members(set);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return members;
  }

  int n_ = 0;
  ConflictKind kind_ = ConflictKind::Unweighted;
  ChannelVariant variant_ = ChannelVariant::Symmetric;
  int words_ = 0;
  std::vector<std::vector<double>> weights_;       // per layer, dense n*n
  std::vector<std::vector<std::uint64_t>> adj_;    // per layer, row per vertex
};

namespace detail {

// Max independent mass among `candidates` measured into target v on `layer`:
// unweighted graphs count members, weighted graphs sum symmetrized weights.
inline std::pair<double, std::vector<int>> max_backward_mass(
    const ConflictStructure& g, int layer, int v, const std::vector<int>& candidates) {
  int m = static_cast<int>(candidates.size());
  if (m == 0) return {0.0, {}};
  std::vector<int> order(candidates);
  std::vector<double> gains(m);
  auto gain_of = [&](int u) {
    return g.kind() == ConflictKind::Unweighted ? 1.0 : g.wbar(layer, u, v);
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double ga = gain_of(a), gb = gain_of(b);
    if (ga != gb) return ga > gb;
    return a < b;
  });
  std::vector<double> w(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) {
    gains[i] = gain_of(order[i]);
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      w[i * m + j] = g.kind() == ConflictKind::Unweighted
                         ? (g.adjacent(layer, order[i], order[j]) ? 1.0 : 0.0)
                         : g.weight(layer, order[i], order[j]);
    }
  }
  SubsetMaximizer bb;
  bb.m = m;
  bb.w = &w;
  bb.gain = &gains;
  bb.run();
  std::vector<int> witness;
  witness.reserve(bb.best_set.size());
  for (int i : bb.best_set) witness.push_back(order[i]);
  std::sort(witness.begin(), witness.end());
  return {bb.best_value, witness};
}

}  // namespace detail

// Worst backward independent mass over all bidders and channel layers.
// Every backward neighborhood must have at most `max_backward` members.
inline RhoWitness compute_rho_witness(const ConflictStructure& g, const Ordering& pi,
                                      int max_backward = 25) {
  pi.validate(g.size());
  RhoWitness worst;
  for (int layer = 0; layer < g.layer_count(); ++layer) {
    for (int v = 0; v < g.size(); ++v) {
      std::vector<int> candidates;
      for (int u = 0; u < g.size(); ++u) {
        if (u != v && pi.position[u] < pi.position[v] && g.adjacent(layer, u, v))
          candidates.push_back(u);
      }
      if (static_cast<int>(candidates.size()) > max_backward)
        throw std::runtime_error(
            "backward neighborhood of bidder " + std::to_string(v) + " has " +
            std::to_string(candidates.size()) + " members; witness check is capped at " +
            std::to_string(max_backward));
      auto [value, set] = detail::max_backward_mass(g, layer, v, candidates);
      if (value > worst.value) {
        worst.value = value;
        worst.vertex = v;
        worst.channel = g.variant() == ChannelVariant::Asymmetric ? layer + 1 : 1;
        worst.set = std::move(set);
      }
    }
  }
  if (worst.vertex == -1 && g.size() > 0) worst.vertex = 0;
  return worst;
}

// Checks that rho upper-bounds every backward independent mass under pi.
inline RhoWitness verify_rho_witness(const ConflictStructure& g, const Ordering& pi,
                                     double rho, int max_backward = 25) {
  RhoWitness w = compute_rho_witness(g, pi, max_backward);
  w.ok = w.value <= rho + 1e-9;
  return w;
}

// True size of every backward neighborhood under pi (any layer), used to
// decide whether a witness check is affordable.
inline int max_backward_degree(const ConflictStructure& g, const Ordering& pi) {
  int worst = 0;
  for (int v = 0; v < g.size(); ++v) {
    int deg = 0;
    for (int u = 0; u < g.size(); ++u) {
      if (u == v || pi.position[u] >= pi.position[v]) continue;
      for (int layer = 0; layer < g.layer_count(); ++layer) {
        if (g.adjacent(layer, u, v)) {
          ++deg;
          break;
        }
      }
    }
    worst = std::max(worst, deg);
  }
  return worst;
}

// Optimal ordering: repeatedly places last the vertex whose backward
// independent mass against the remaining set is smallest.  The returned rho
// is the minimum achievable witness value over all n! orderings; the greedy
// is optimal because the witness objective is monotone in the predecessor
// set.  Intentionally capped: the per-step maximization is exponential.
inline Ordering exact_rho(const ConflictStructure& g, int max_n = 20) {
  int n = g.size();
  if (n > max_n)
    throw std::runtime_error("exact_rho is capped at " + std::to_string(max_n) +
                             " bidders (got " + std::to_string(n) + ")");
  std::vector<char> active(n, 1);
  std::vector<int> position(n, -1);
  double rho = 0.0;
  for (int pos = n - 1; pos >= 0; --pos) {
    int best_v = -1;
    double best_val = 0.0;
    for (int v = 0; v < n; ++v) {
      if (!active[v]) continue;
      double val = 0.0;
      for (int layer = 0; layer < g.layer_count(); ++layer) {
        std::vector<int> candidates;
        for (int u = 0; u < n; ++u)
          if (u != v && active[u] && g.adjacent(layer, u, v)) candidates.push_back(u);
        val = std::max(val, detail::max_backward_mass(g, layer, v, candidates).first);
      }
      if (best_v == -1 || val < best_val) {
        best_v = v;
        best_val = val;
      }
    }
    position[best_v] = pos;
    active[best_v] = 0;
    rho = std::max(rho, best_val);
  }
  Ordering o;
  o.position = std::move(position);
  o.rho = rho;
  o.provenance = RhoProvenance::Exact;
  return o;
}

// Fast heuristic ordering: places last the vertex with the smallest total
// incoming symmetrized weight (degree, for plain graphs) against the
// remaining set.  The certified rho is the maximum of those totals, which
// upper-bounds the witness value along the same ordering.
inline Ordering greedy_ordering(const ConflictStructure& g) {
  int n = g.size();
  int layers = g.layer_count();
  std::vector<std::vector<double>> sums(layers, std::vector<double>(n, 0.0));
  for (int layer = 0; layer < layers; ++layer)
    for (int v = 0; v < n; ++v)
      for (int u = 0; u < n; ++u)
        if (u != v) sums[layer][v] += g.wbar(layer, u, v);
  std::vector<char> active(n, 1);
  std::vector<int> position(n, -1);
  double rho = 0.0;
  for (int pos = n - 1; pos >= 0; --pos) {
    int best_v = -1;
    double best_val = 0.0;
    for (int v = 0; v < n; ++v) {
      if (!active[v]) continue;
      double val = 0.0;
      for (int layer = 0; layer < layers; ++layer) val = std::max(val, sums[layer][v]);
      if (best_v == -1 || val < best_val) {
        best_v = v;
        best_val = val;
      }
    }
    position[best_v] = pos;
    active[best_v] = 0;
    rho = std::max(rho, best_val);
    for (int layer = 0; layer < layers; ++layer)
      for (int v = 0; v < n; ++v)
        if (active[v]) sums[layer][v] -= g.wbar(layer, best_v, v);
  }
  Ordering o;
  o.position = std::move(position);
  o.rho = rho;
  o.provenance = RhoProvenance::Heuristic;
  return o;
}

// Checks that the allocation's per-channel user sets are independent.
inline AllocationCheck verify_allocation(const ConflictStructure& g, int k,
                                         const Allocation& alloc) {
  if (alloc.size() != g.size())
    throw std::invalid_argument("allocation size does not match bidder count");
  if (k < 1 || k > kMaxChannels)
    throw std::invalid_argument("channel count out of range");
  ChannelMask all = (k == 31) ? 0x7FFFFFFFu : ((ChannelMask{1} << k) - 1);
  for (int v = 0; v < alloc.size(); ++v)
    if (alloc.bundles[v] & ~all)
      throw std::invalid_argument("allocation uses a channel above k for bidder " +
                                  std::to_string(v));
  for (int j = 1; j <= k; ++j) {
    int layer = g.layer_for_channel(j);
    std::vector<int> members;
    for (int v = 0; v < alloc.size(); ++v)
      if (alloc.bundles[v] & (ChannelMask{1} << (j - 1))) members.push_back(v);
    int bad = g.independent_in_layer(layer, members);
    if (bad >= 0) return {false, j, members[bad]};
  }
  return {};
}

// Embeds a plain graph as a weighted structure (edges become weight 1 in
// both directions); independence queries agree between the two forms.
inline ConflictStructure as_weighted(const ConflictStructure& g) {
  if (g.kind() == ConflictKind::Weighted)
    throw std::invalid_argument("as_weighted expects an unweighted structure");
  std::vector<std::vector<std::tuple<int, int, double>>> layers(g.layer_count());
  for (int layer = 0; layer < g.layer_count(); ++layer)
    for (int u = 0; u < g.size(); ++u)
      for (int v = 0; v < g.size(); ++v)
        if (u != v && g.adjacent(layer, u, v))
          layers[layer].emplace_back(u, v, 1.0);
  if (g.variant() == ChannelVariant::Symmetric)
    return ConflictStructure::weighted(g.size(), layers[0]);
  return ConflictStructure::weighted_per_channel(g.size(), layers);
}

}  // namespace chanalloc
