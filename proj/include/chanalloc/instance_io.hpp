#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chanalloc/conflict_graph.hpp"
#include "chanalloc/random.hpp"
#include "chanalloc/rational.hpp"
#include "chanalloc/valuation.hpp"
#include "chanalloc/wireless.hpp"

namespace chanalloc {

using Json = nlohmann::ordered_json;

enum class ConflictModel {
  ExplicitUnweighted,
  ExplicitWeighted,
  Disk,
  Distance2Disk,
  Protocol,
  PhysicalFixed,
  PhysicalPowerControl,
};

inline const char* to_string(ConflictModel m) {
  switch (m) {
    case ConflictModel::ExplicitUnweighted: return "explicit-unweighted";
    case ConflictModel::ExplicitWeighted: return "explicit-weighted";
    case ConflictModel::Disk: return "disk";
    case ConflictModel::Distance2Disk: return "distance2-disk";
    case ConflictModel::Protocol: return "protocol";
    case ConflictModel::PhysicalFixed: return "physical-fixed";
    case ConflictModel::PhysicalPowerControl: return "physical-powercontrol";
  }
  return "?";
}

inline ConflictModel conflict_model_from_string(const std::string& s) {
  for (ConflictModel m :
       {ConflictModel::ExplicitUnweighted, ConflictModel::ExplicitWeighted,
        ConflictModel::Disk, ConflictModel::Distance2Disk, ConflictModel::Protocol,
        ConflictModel::PhysicalFixed, ConflictModel::PhysicalPowerControl})
    if (s == to_string(m)) return m;
  throw std::invalid_argument("unknown conflict model '" + s + "'");
}

enum class PowersKind { None, Uniform, Linear, List };

// In-memory form of an instance file: the auction plus a conflict
// description, with optional explicit ordering / rho overrides.
struct InstanceData {
  AuctionInstance auction;
  ConflictModel model = ConflictModel::ExplicitUnweighted;

  // explicit models (weights kept exact for lossless round-trips)
  std::vector<std::pair<int, int>> edges;
  std::vector<std::tuple<int, int, Rational>> weights;
  std::vector<std::vector<std::tuple<int, int, Rational>>> per_channel;

  // geometric models
  TransmitterScene scene;
  LinkScene links;
  double delta = 1.0;
  PowersKind powers_kind = PowersKind::None;
  std::vector<double> powers_list;

  std::optional<std::vector<int>> ordering;  // bidder ids in pi order
  std::optional<double> rho;
};

namespace detail {

inline const Json& require(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument(std::string("instance file misses '") + key + "'");
  return *it;
}

inline Rational parse_rational(const Json& j, const char* what) {
  if (j.is_string()) return Rational::from_string(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw std::invalid_argument(std::string(what) +
                              " must be a decimal string or integer");
}

inline Json emit_rational(const Rational& r) { return Json(r.to_string()); }

inline Point parse_point(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("a point must be a [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json emit_point(const Point& p) { return Json::array({p.x, p.y}); }

inline std::vector<LinkScene::Link> parse_links(const Json& j) {
  std::vector<LinkScene::Link> out;
  for (const Json& e : j) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("a link must be a [sender, receiver] pair");
    out.push_back({parse_point(e[0]), parse_point(e[1])});
  }
  return out;
}

}  // namespace detail

inline ValuationSpec parse_valuation(const Json& j, int k) {
  std::string type = detail::require(j, "type").get<std::string>();
  if (type == "explicit") {
    std::vector<std::pair<ChannelMask, Rational>> bundles;
    for (const Json& b : detail::require(j, "bundles")) {
      std::vector<int> channels =
          detail::require(b, "channels").get<std::vector<int>>();
      bundles.emplace_back(mask_of(channels, k),
                           detail::parse_rational(detail::require(b, "value"), "value"));
    }
    return ValuationSpec::explicit_bundles(std::move(bundles));
  }
  if (type == "additive" || type == "unit-demand") {
    std::vector<Rational> values;
    for (const Json& v : detail::require(j, "values"))
      values.push_back(detail::parse_rational(v, "value"));
    if (static_cast<int>(values.size()) != k)
      throw std::invalid_argument("per-channel values must have length k");
    if (type == "unit-demand") return ValuationSpec::unit_demand(std::move(values));
    std::optional<int> cap;
    if (j.contains("cap")) cap = j["cap"].get<int>();
    return ValuationSpec::additive(std::move(values), cap);
  }
  if (type == "single-minded") {
    std::vector<int> channels =
        detail::require(j, "channels").get<std::vector<int>>();
    return ValuationSpec::single_minded(
        mask_of(channels, k),
        detail::parse_rational(detail::require(j, "value"), "value"));
  }
  throw std::invalid_argument("unknown valuation type '" + type + "'");
}

inline Json emit_valuation(const ValuationSpec& s) {
  Json j;
  switch (s.kind) {
    case ValuationKind::Explicit: {
      j["type"] = "explicit";
      Json bundles = Json::array();
      for (const auto& [mask, val] : s.bundles) {
        Json b;
        b["channels"] = channels_of(mask);
        b["value"] = detail::emit_rational(val);
        bundles.push_back(std::move(b));
      }
      j["bundles"] = std::move(bundles);
      break;
    }
    case ValuationKind::Additive: {
      j["type"] = "additive";
      Json values = Json::array();
      for (const Rational& r : s.channel_values)
        values.push_back(detail::emit_rational(r));
      j["values"] = std::move(values);
      if (s.cardinality_cap) j["cap"] = *s.cardinality_cap;
      break;
    }
    case ValuationKind::SingleMinded:
      j["type"] = "single-minded";
      j["channels"] = channels_of(s.desired);
      j["value"] = detail::emit_rational(s.desired_value);
      break;
    case ValuationKind::UnitDemand: {
      j["type"] = "unit-demand";
      Json values = Json::array();
      for (const Rational& r : s.channel_values)
        values.push_back(detail::emit_rational(r));
      j["values"] = std::move(values);
      break;
    }
  }
  return j;
}

inline InstanceData parse_instance(const Json& j) {
  InstanceData data;
  data.auction.num_channels = detail::require(j, "k").get<int>();
  if (data.auction.num_channels < 1 || data.auction.num_channels > kMaxChannels)
    throw std::invalid_argument("k out of range");

  const Json& bidders = detail::require(j, "bidders");
  data.auction.num_bidders = static_cast<int>(bidders.size());
  int expected_id = 0;
  for (const Json& b : bidders) {
    if (detail::require(b, "id").get<int>() != expected_id)
      throw std::invalid_argument("bidder ids must be 0..n-1 in order");
    ++expected_id;
    data.auction.valuations.push_back(
        parse_valuation(detail::require(b, "valuation"), data.auction.num_channels));
  }
  data.auction.validate();
  int n = data.auction.num_bidders;

  const Json& conflict = detail::require(j, "conflict");
  data.model =
      conflict_model_from_string(detail::require(conflict, "type").get<std::string>());
  auto check_id = [&](int v) {
    if (v < 0 || v >= n)
      throw std::invalid_argument("conflict references bidder " + std::to_string(v));
  };
  switch (data.model) {
    case ConflictModel::ExplicitUnweighted:
      for (const Json& e : detail::require(conflict, "edges")) {
        int u = e.at(0).get<int>(), v = e.at(1).get<int>();
        check_id(u);
        check_id(v);
        data.edges.emplace_back(u, v);
      }
      break;
    case ConflictModel::ExplicitWeighted: {
      bool has_flat = conflict.contains("weights");
      bool has_layers = conflict.contains("per_channel");
      if (has_flat == has_layers)
        throw std::invalid_argument(
            "explicit-weighted needs exactly one of 'weights' or 'per_channel'");
      auto parse_layer = [&](const Json& layer) {
        std::vector<std::tuple<int, int, Rational>> out;
        for (const Json& e : layer) {
          int u = e.at(0).get<int>(), v = e.at(1).get<int>();
          check_id(u);
          check_id(v);
          out.emplace_back(u, v, detail::parse_rational(e.at(2), "weight"));
        }
        return out;
      };
      if (has_flat) {
        data.weights = parse_layer(conflict["weights"]);
      } else {
        for (const Json& layer : conflict["per_channel"])
          data.per_channel.push_back(parse_layer(layer));
        if (static_cast<int>(data.per_channel.size()) != data.auction.num_channels)
          throw std::invalid_argument("'per_channel' needs one weight list per channel");
      }
      break;
    }
    case ConflictModel::Disk:
    case ConflictModel::Distance2Disk:
      for (const Json& p : detail::require(conflict, "points"))
        data.scene.points.push_back(detail::parse_point(p));
      data.scene.ranges = detail::require(conflict, "ranges").get<std::vector<double>>();
      if (data.scene.size() != n)
        throw std::invalid_argument("scene size does not match bidder count");
      data.scene.validate();
      break;
    case ConflictModel::Protocol:
      data.links.links = detail::parse_links(detail::require(conflict, "links"));
      data.delta = detail::require(conflict, "delta").get<double>();
      if (data.links.size() != n)
        throw std::invalid_argument("scene size does not match bidder count");
      break;
    case ConflictModel::PhysicalFixed:
    case ConflictModel::PhysicalPowerControl: {
      data.links.links = detail::parse_links(detail::require(conflict, "links"));
      data.links.alpha = detail::require(conflict, "alpha").get<double>();
      data.links.beta = detail::require(conflict, "beta").get<double>();
      data.links.nu = conflict.contains("nu") ? conflict["nu"].get<double>() : 0.0;
      if (data.links.size() != n)
        throw std::invalid_argument("scene size does not match bidder count");
      if (data.model == ConflictModel::PhysicalFixed) {
        const Json& powers = detail::require(conflict, "powers");
        if (powers.is_string()) {
          std::string kind = powers.get<std::string>();
          if (kind == "uniform")
            data.powers_kind = PowersKind::Uniform;
          else if (kind == "linear")
            data.powers_kind = PowersKind::Linear;
          else
            throw std::invalid_argument("powers must be 'uniform', 'linear' or a list");
        } else {
          data.powers_kind = PowersKind::List;
          data.powers_list = powers.get<std::vector<double>>();
          if (static_cast<int>(data.powers_list.size()) != n)
            throw std::invalid_argument("powers list size does not match bidder count");
        }
      } else if (conflict.contains("powers")) {
        throw std::invalid_argument("physical-powercontrol must not fix powers");
      }
      break;
    }
  }

  if (j.contains("ordering")) {
    data.ordering = j["ordering"].get<std::vector<int>>();
    if (static_cast<int>(data.ordering->size()) != n)
      throw std::invalid_argument("ordering must list every bidder exactly once");
  }
  if (j.contains("rho")) {
    const Json& r = j["rho"];
    data.rho = r.is_string() ? Rational::from_string(r.get<std::string>()).to_double()
                             : r.get<double>();
    if (!(*data.rho >= 0.0)) throw std::invalid_argument("rho must be non-negative");
  }
  return data;
}

inline Json emit_instance(const InstanceData& data) {
  Json j;
  j["k"] = data.auction.num_channels;
  Json bidders = Json::array();
  for (int v = 0; v < data.auction.num_bidders; ++v) {
    Json b;
    b["id"] = v;
    b["valuation"] = emit_valuation(data.auction.valuations[v]);
    bidders.push_back(std::move(b));
  }
  j["bidders"] = std::move(bidders);

  Json conflict;
  conflict["type"] = to_string(data.model);
  switch (data.model) {
    case ConflictModel::ExplicitUnweighted: {
      Json edges = Json::array();
      for (auto [u, v] : data.edges) edges.push_back(Json::array({u, v}));
      conflict["edges"] = std::move(edges);
      break;
    }
    case ConflictModel::ExplicitWeighted: {
      auto emit_layer = [](const std::vector<std::tuple<int, int, Rational>>& layer) {
        Json out = Json::array();
        for (const auto& [u, v, w] : layer)
          out.push_back(Json::array({u, v, detail::emit_rational(w)}));
        return out;
      };
      if (data.per_channel.empty()) {
        conflict["weights"] = emit_layer(data.weights);
      } else {
        Json layers = Json::array();
        for (const auto& layer : data.per_channel) layers.push_back(emit_layer(layer));
        conflict["per_channel"] = std::move(layers);
      }
      break;
    }
    case ConflictModel::Disk:
    case ConflictModel::Distance2Disk: {
      Json points = Json::array();
      for (const Point& p : data.scene.points) points.push_back(detail::emit_point(p));
      conflict["points"] = std::move(points);
      conflict["ranges"] = data.scene.ranges;
      break;
    }
    case ConflictModel::Protocol:
    case ConflictModel::PhysicalFixed:
    case ConflictModel::PhysicalPowerControl: {
      Json links = Json::array();
      for (const LinkScene::Link& l : data.links.links)
        links.push_back(
            Json::array({detail::emit_point(l.sender), detail::emit_point(l.receiver)}));
      conflict["links"] = std::move(links);
      if (data.model == ConflictModel::Protocol) {
        conflict["delta"] = data.delta;
      } else {
        conflict["alpha"] = data.links.alpha;
        conflict["beta"] = data.links.beta;
        conflict["nu"] = data.links.nu;
        if (data.model == ConflictModel::PhysicalFixed) {
          if (data.powers_kind == PowersKind::Uniform)
            conflict["powers"] = "uniform";
          else if (data.powers_kind == PowersKind::Linear)
            conflict["powers"] = "linear";
          else
            conflict["powers"] = data.powers_list;
        }
      }
      break;
    }
  }
  j["conflict"] = std::move(conflict);
  if (data.ordering) j["ordering"] = *data.ordering;
  if (data.rho) j["rho"] = *data.rho;
  return j;
}

// Resolves the symbolic power assignment of a physical-fixed description.
inline LinkScene resolved_links(const InstanceData& data) {
  LinkScene scene = data.links;
  if (data.model == ConflictModel::PhysicalFixed) {
    int n = scene.size();
    std::vector<double> p(n, 1.0);
    if (data.powers_kind == PowersKind::Linear) {
      for (int i = 0; i < n; ++i) p[i] = std::pow(scene.length(i), scene.alpha);
    } else if (data.powers_kind == PowersKind::List) {
      p = data.powers_list;
    }
    scene.powers = std::move(p);
  }
  return scene;
}

// Builds the conflict structure and ordering an instance file describes,
// applying the file's ordering/rho overrides when given.
inline BuiltModel build_model(const InstanceData& data, int exact_rho_cap = 12) {
  int n = data.auction.num_bidders;
  BuiltModel model;
  switch (data.model) {
    case ConflictModel::ExplicitUnweighted:
      model.graph = ConflictStructure::unweighted(n, data.edges);
      break;
    case ConflictModel::ExplicitWeighted: {
      auto to_double_layer = [](const std::vector<std::tuple<int, int, Rational>>& in) {
        std::vector<std::tuple<int, int, double>> out;
        for (const auto& [u, v, w] : in) out.emplace_back(u, v, w.to_double());
        return out;
      };
      if (data.per_channel.empty()) {
        model.graph = ConflictStructure::weighted(n, to_double_layer(data.weights));
      } else {
        std::vector<std::vector<std::tuple<int, int, double>>> layers;
        for (const auto& layer : data.per_channel)
          layers.push_back(to_double_layer(layer));
        model.graph = ConflictStructure::weighted_per_channel(n, layers);
      }
      break;
    }
    case ConflictModel::Disk:
      model = disk_graph(data.scene);
      break;
    case ConflictModel::Distance2Disk:
      model = distance2_disk_graph(data.scene);
      break;
    case ConflictModel::Protocol:
      model = protocol_graph(data.links, data.delta);
      break;
    case ConflictModel::PhysicalFixed:
      model = fixed_power_weights(resolved_links(data));
      break;
    case ConflictModel::PhysicalPowerControl:
      model = power_control_weights(data.links);
      break;
  }

  bool explicit_model = data.model == ConflictModel::ExplicitUnweighted ||
                        data.model == ConflictModel::ExplicitWeighted;
  if (explicit_model && !data.ordering) {
    model.ordering =
        n <= exact_rho_cap ? exact_rho(model.graph) : greedy_ordering(model.graph);
  }
  if (data.ordering) {
    // A user-specified ordering: certify it with the witness value when
    // affordable, otherwise with the coarser backward-mass bound.
    Ordering pi = Ordering::from_sequence(*data.ordering, 0.0, RhoProvenance::Heuristic);
    if (max_backward_degree(model.graph, pi) <= 25) {
      pi.rho = compute_rho_witness(model.graph, pi).value;
    } else {
      double worst = 0.0;
      for (int layer = 0; layer < model.graph.layer_count(); ++layer)
        for (int v = 0; v < n; ++v) {
          double mass = 0.0;
          for (int u = 0; u < n; ++u)
            if (u != v && pi.position[u] < pi.position[v])
              mass += model.graph.wbar(layer, u, v);
          worst = std::max(worst, mass);
        }
      pi.rho = worst;
    }
    model.ordering = pi;
  }
  if (data.rho) {
    // Never lower rho below a witnessed violation: guarantees would break.
    double rho = *data.rho;
    if (max_backward_degree(model.graph, model.ordering) <= 25) {
      RhoWitness w = verify_rho_witness(model.graph, model.ordering, rho);
      if (!w.ok) rho = w.value;
    }
    model.ordering.rho = rho;
    model.ordering.provenance = RhoProvenance::Heuristic;
  }
  return model;
}

// ---------------------------------------------------------------------------
// Random instance generation
// ---------------------------------------------------------------------------

struct GenParams {
  int n = 10;
  int k = 3;
  std::uint64_t seed = 1;
  double delta = 1.0;   // protocol
  double alpha = 2.5;   // physical
  double beta = 1.0;
  double nu = 0.0;
  std::string powers = "uniform";  // physical-fixed: uniform | linear
  int max_bundles = 8;             // explicit valuations per bidder
  double edge_prob = 0.3;          // explicit conflict density
};

namespace detail {

inline Rational random_value(RandomStream& rng) {
  // Two-decimal values in [0.50, 10.00]: exact and human-readable.
  return Rational(50 + static_cast<long long>(rng.next_below(951)), 100);
}

inline ChannelMask random_bundle(RandomStream& rng, int k) {
  return static_cast<ChannelMask>(1 + rng.next_below((ChannelMask{1} << k) - 1));
}

inline ValuationSpec random_valuation(RandomStream& rng, int k, int max_bundles) {
  switch (rng.next_below(4)) {
    case 0: {  // explicit
      int limit = static_cast<int>(
          std::min<std::uint64_t>(max_bundles, (ChannelMask{1} << k) - 1));
      int m = 1 + static_cast<int>(rng.next_below(limit));
      std::vector<std::pair<ChannelMask, Rational>> bundles;
      std::vector<char> used(ChannelMask{1} << k, 0);
      for (int i = 0; i < m; ++i) {
        ChannelMask mask = random_bundle(rng, k);
        if (used[mask]) continue;  // collisions shrink the list; fine
        used[mask] = 1;
        bundles.emplace_back(mask, random_value(rng));
      }
      return ValuationSpec::explicit_bundles(std::move(bundles));
    }
    case 1: {  // additive, sometimes capped
      std::vector<Rational> values;
      for (int j = 0; j < k; ++j) values.push_back(random_value(rng));
      std::optional<int> cap;
      if (rng.next_bool(0.5)) cap = 1 + static_cast<int>(rng.next_below(k));
      return ValuationSpec::additive(std::move(values), cap);
    }
    case 2: {  // single-minded, value scales with bundle size
      ChannelMask mask = random_bundle(rng, k);
      Rational value = random_value(rng) * Rational(bundle_size(mask));
      return ValuationSpec::single_minded(mask, value);
    }
    default: {  // unit-demand
      std::vector<Rational> values;
      for (int j = 0; j < k; ++j) values.push_back(random_value(rng));
      return ValuationSpec::unit_demand(std::move(values));
    }
  }
}

inline std::vector<std::tuple<int, int, Rational>> random_weight_layer(
    RandomStream& rng, int n, double edge_prob) {
  std::vector<std::tuple<int, int, Rational>> out;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      if (!rng.next_bool(edge_prob)) continue;
      out.emplace_back(u, v,
                       Rational(5 + static_cast<long long>(rng.next_below(56)), 100));
    }
  return out;
}

}  // namespace detail

// Deterministic random instance of the requested model family.
// `asymmetric` switches explicit-weighted generation to per-channel layers.
inline InstanceData gen_instance(ConflictModel model, const GenParams& params,
                                 bool asymmetric = false) {
  if (params.n < 1) throw std::invalid_argument("n must be >= 1");
  if (params.k < 1 || params.k > kMaxChannels)
    throw std::invalid_argument("k out of range");
  if (params.max_bundles < 1) throw std::invalid_argument("max_bundles must be >= 1");
  if (!(params.edge_prob >= 0.0 && params.edge_prob <= 1.0))
    throw std::invalid_argument("edge_prob must be in [0,1]");
  RandomStream rng(params.seed);
  int n = params.n;
  int k = params.k;

  InstanceData data;
  data.model = model;
  data.auction.num_bidders = n;
  data.auction.num_channels = k;
  for (int v = 0; v < n; ++v)
    data.auction.valuations.push_back(
        detail::random_valuation(rng, k, params.max_bundles));

  switch (model) {
    case ConflictModel::ExplicitUnweighted:
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (rng.next_bool(params.edge_prob)) data.edges.emplace_back(u, v);
      break;
    case ConflictModel::ExplicitWeighted:
      if (asymmetric) {
        for (int j = 0; j < k; ++j)
          data.per_channel.push_back(
              detail::random_weight_layer(rng, n, params.edge_prob));
      } else {
        data.weights = detail::random_weight_layer(rng, n, params.edge_prob);
      }
      break;
    case ConflictModel::Disk:
    case ConflictModel::Distance2Disk: {
      double box = 3.0 * std::sqrt(static_cast<double>(n));
      for (int i = 0; i < n; ++i) {
        data.scene.points.push_back({rng.next_range(0.0, box), rng.next_range(0.0, box)});
        data.scene.ranges.push_back(rng.next_range(0.5, 1.5));
      }
      break;
    }
    case ConflictModel::Protocol: {
      if (!(params.delta > 0.0)) throw std::invalid_argument("delta must be positive");
      data.delta = params.delta;
      double box = 4.0 * std::sqrt(static_cast<double>(n));
      for (int i = 0; i < n; ++i) {
        Point s{rng.next_range(0.0, box), rng.next_range(0.0, box)};
        double len = rng.next_range(0.5, 2.0);
        double angle = rng.next_range(0.0, 2.0 * M_PI);
        data.links.links.push_back(
            {s, {s.x + len * std::cos(angle), s.y + len * std::sin(angle)}});
      }
      break;
    }
    case ConflictModel::PhysicalFixed: {
      data.links.alpha = params.alpha;
      data.links.beta = params.beta;
      data.links.nu = params.nu;
      if (params.powers == "uniform")
        data.powers_kind = PowersKind::Uniform;
      else if (params.powers == "linear")
        data.powers_kind = PowersKind::Linear;
      else
        throw std::invalid_argument("generated powers must be 'uniform' or 'linear'");
      double box = 8.0 * std::sqrt(static_cast<double>(n));
      for (int i = 0; i < n; ++i) {
        Point s{rng.next_range(0.0, box), rng.next_range(0.0, box)};
        double len = rng.next_range(1.0, 2.0);
        double angle = rng.next_range(0.0, 2.0 * M_PI);
        data.links.links.push_back(
            {s, {s.x + len * std::cos(angle), s.y + len * std::sin(angle)}});
      }
      break;
    }
    case ConflictModel::PhysicalPowerControl: {
      data.links.alpha = params.alpha;
      data.links.beta = params.beta;
      data.links.nu = params.nu;
      // Links on a coarse jittered grid: weights scale with 1/tau, so only
      // well-separated links make interesting (non-saturated) instances.
      int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
      double cell = 60.0;
      for (int i = 0; i < n; ++i) {
        double cx = (i % cols) * cell + cell / 2 + rng.next_range(-2.0, 2.0);
        double cy = (i / cols) * cell + cell / 2 + rng.next_range(-2.0, 2.0);
        double len = rng.next_range(1.0, 2.0);
        double angle = rng.next_range(0.0, 2.0 * M_PI);
        data.links.links.push_back(
            {{cx, cy}, {cx + len * std::cos(angle), cy + len * std::sin(angle)}});
      }
      break;
    }
  }
  return data;
}

}  // namespace chanalloc
