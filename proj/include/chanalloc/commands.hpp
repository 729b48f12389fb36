#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "chanalloc/brute_force.hpp"
#include "chanalloc/instance_io.hpp"
#include "chanalloc/rounding.hpp"

namespace chanalloc {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

inline Json load_json(const std::string& path) {
  return Json::parse(read_text_file(path));
}

inline Json allocation_json(const std::vector<ChannelMask>& bundles) {
  Json a = Json::array();
  for (ChannelMask m : bundles) a.push_back(channels_of(m));
  return a;
}

// Accepts either a bare per-bidder channel-list array or a solve report
// (any object with an "allocation" member).
inline std::vector<ChannelMask> parse_allocation(const Json& j, int n, int k) {
  const Json* arr = &j;
  if (j.is_object()) arr = &detail::require(j, "allocation");
  if (!arr->is_array() || static_cast<int>(arr->size()) != n)
    throw std::invalid_argument("allocation must list one channel set per bidder");
  std::vector<ChannelMask> out;
  for (const Json& channels : *arr)
    out.push_back(mask_of(channels.get<std::vector<int>>(), k));
  return out;
}

inline Json cmd_gen(ConflictModel model, const GenParams& params, bool asymmetric) {
  return emit_instance(gen_instance(model, params, asymmetric));
}

inline Json cmd_solve(const InstanceData& data, const SolveOptions& opts) {
  BuiltModel model = build_model(data);
  EndToEndReport rep = solve_end_to_end(data.auction, model, opts);
  Json out;
  out["lp_value"] = rep.lp_objective;
  out["allocation"] = allocation_json(rep.best.bundles);
  out["value"] = rep.best.value.to_string();
  if (std::isnan(rep.ratio))
    out["ratio_vs_lp"] = nullptr;
  else
    out["ratio_vs_lp"] = rep.ratio;
  out["rho_used"] = rep.rho_used;
  out["rho_provenance"] = to_string(rep.rho_provenance);
  out["mode"] = opts.mode == SolveMode::Oracle ? "oracle" : "explicit";
  out["trials"] = rep.trials;
  out["seed"] = rep.seed;
  out["mean_value"] = rep.mean_value;
  if (opts.mode == SolveMode::Oracle) {
    out["oracle_converged"] = rep.oracle_converged;
    out["oracle_rounds"] = rep.oracle_rounds;
  }
  Json timings;
  timings["lp_ms"] = rep.lp_ms;
  timings["rounding_ms"] = rep.rounding_ms;
  out["timings"] = std::move(timings);
  Json stats;
  stats["rounded"] = Json::array({rep.stats.rounded[0], rep.stats.rounded[1]});
  stats["removed"] = Json::array({rep.stats.removed[0], rep.stats.removed[1]});
  stats["feasible_candidates"] = rep.stats.feasible_candidates;
  out["stats"] = std::move(stats);
  return out;
}

inline Json cmd_exact(const InstanceData& data, long long max_nodes) {
  BuiltModel model = build_model(data);
  BruteForceOptions opts;
  opts.max_nodes = max_nodes;
  Allocation best = brute_force_opt(data.auction, model.graph, opts);
  Json out;
  out["opt_value"] = best.value.to_string();
  out["allocation"] = allocation_json(best.bundles);
  return out;
}

struct VerifyOutcome {
  bool ok = false;
  Json report;
};

// Checks per-channel independence against the instance's conflict structure;
// for fixed-power physical instances additionally re-checks the raw decoding
// condition per channel, independent of the derived weights.
inline VerifyOutcome cmd_verify(const InstanceData& data,
                                const std::vector<ChannelMask>& bundles) {
  if (static_cast<int>(bundles.size()) != data.auction.num_bidders)
    throw std::invalid_argument("allocation size does not match bidder count");
  BuiltModel model = build_model(data);
  VerifyOutcome outcome;
  Allocation alloc{bundles, allocation_value(data.auction, bundles)};
  AllocationCheck check =
      verify_allocation(model.graph, data.auction.num_channels, alloc);
  if (!check.ok) {
    outcome.report["ok"] = false;
    outcome.report["reason"] = "conflict";
    outcome.report["channel"] = check.channel;
    outcome.report["bidder"] = check.vertex;
    return outcome;
  }
  if (data.model == ConflictModel::PhysicalFixed) {
    LinkScene scene = resolved_links(data);
    for (int j = 1; j <= data.auction.num_channels; ++j) {
      std::vector<int> active;
      for (int v = 0; v < data.auction.num_bidders; ++v)
        if (bundles[v] & (ChannelMask{1} << (j - 1))) active.push_back(v);
      if (!sinr_check(scene, active)) {
        outcome.report["ok"] = false;
        outcome.report["reason"] = "sinr";
        outcome.report["channel"] = j;
        return outcome;
      }
    }
  }
  outcome.ok = true;
  outcome.report["ok"] = true;
  outcome.report["value"] = allocation_value(data.auction, bundles).to_string();
  return outcome;
}

// ---------------------------------------------------------------------------
// Benchmark runner
// ---------------------------------------------------------------------------

struct GenRequest {
  ConflictModel model = ConflictModel::Disk;
  GenParams params;
  bool asymmetric = false;
};

inline GenRequest parse_gen_request(const Json& g) {
  GenRequest r;
  r.model = conflict_model_from_string(detail::require(g, "model").get<std::string>());
  if (g.contains("n")) r.params.n = g["n"].get<int>();
  if (g.contains("k")) r.params.k = g["k"].get<int>();
  if (g.contains("seed")) r.params.seed = g["seed"].get<std::uint64_t>();
  if (g.contains("delta")) r.params.delta = g["delta"].get<double>();
  if (g.contains("alpha")) r.params.alpha = g["alpha"].get<double>();
  if (g.contains("beta")) r.params.beta = g["beta"].get<double>();
  if (g.contains("nu")) r.params.nu = g["nu"].get<double>();
  if (g.contains("powers")) r.params.powers = g["powers"].get<std::string>();
  if (g.contains("edge_prob")) r.params.edge_prob = g["edge_prob"].get<double>();
  if (g.contains("max_bundles")) r.params.max_bundles = g["max_bundles"].get<int>();
  if (g.contains("asymmetric")) r.asymmetric = g["asymmetric"].get<bool>();
  return r;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

struct BenchEntry {
  std::string name;
  InstanceData data;
  SolveOptions opts;
  long long opt_cap = 0;
};

inline std::string bench_row(const BenchEntry& entry) {
  auto start = std::chrono::steady_clock::now();
  BuiltModel model = build_model(entry.data);
  EndToEndReport rep = solve_end_to_end(entry.data.auction, model, entry.opts);
  double ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - start)
                  .count();
  std::string opt_value;
  if (entry.opt_cap > 0) {
    try {
      BruteForceOptions b;
      b.max_nodes = entry.opt_cap;
      opt_value = brute_force_opt(entry.data.auction, model.graph, b).value.to_string();
    } catch (const SizeCapError&) {
      // too large to enumerate: leave the column empty
    }
  }
  std::string ratio =
      std::isnan(rep.ratio) ? std::string() : format_double(rep.ratio);
  std::ostringstream row;
  row << entry.name << ',' << entry.data.auction.num_bidders << ','
      << entry.data.auction.num_channels << ',' << format_double(rep.rho_used) << ','
      << format_double(rep.lp_objective) << ',' << opt_value << ','
      << rep.best.value.to_string() << ',' << ratio << ',' << format_double(ms);
  return row.str();
}

}  // namespace detail

// Suite format: {"defaults": {trials, seed, mode, opt_cap}, "instances":
// [{"name", "file"} | {"name", "gen": {...}}, per-instance overrides]}.
// Instances run concurrently; the row order matches the suite order.
inline std::string cmd_bench(const Json& suite) {
  SolveOptions base;
  base.trials = 50;
  long long base_opt_cap = 200000;
  if (suite.contains("defaults")) {
    const Json& d = suite["defaults"];
    if (d.contains("trials")) base.trials = d["trials"].get<int>();
    if (d.contains("seed")) base.seed = d["seed"].get<std::uint64_t>();
    if (d.contains("mode"))
      base.mode = d["mode"].get<std::string>() == "oracle" ? SolveMode::Oracle
                                                           : SolveMode::Explicit;
    if (d.contains("opt_cap")) base_opt_cap = d["opt_cap"].get<long long>();
  }

  std::vector<detail::BenchEntry> entries;
  for (const Json& item : detail::require(suite, "instances")) {
    detail::BenchEntry entry;
    entry.opts = base;
    entry.opt_cap = base_opt_cap;
    if (item.contains("file")) {
      entry.name = item.contains("name") ? item["name"].get<std::string>()
                                         : item["file"].get<std::string>();
      entry.data = parse_instance(load_json(item["file"].get<std::string>()));
    } else {
      GenRequest req = parse_gen_request(detail::require(item, "gen"));
      entry.name = item.contains("name")
                       ? item["name"].get<std::string>()
                       : std::string(to_string(req.model)) + "-" +
                             std::to_string(req.params.seed);
      entry.data = gen_instance(req.model, req.params, req.asymmetric);
    }
    if (item.contains("trials")) entry.opts.trials = item["trials"].get<int>();
    if (item.contains("seed")) entry.opts.seed = item["seed"].get<std::uint64_t>();
    if (item.contains("mode"))
      entry.opts.mode = item["mode"].get<std::string>() == "oracle"
                            ? SolveMode::Oracle
                            : SolveMode::Explicit;
    if (item.contains("rho_override"))
      entry.opts.rho_override = item["rho_override"].get<double>();
    if (item.contains("opt_cap")) entry.opt_cap = item["opt_cap"].get<long long>();
    entries.push_back(std::move(entry));
  }

  std::vector<std::string> rows(entries.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < entries.size();) {
      try {
        rows[i] = detail::bench_row(entries[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned workers = std::thread::hardware_concurrency();
  if (workers > entries.size()) workers = static_cast<unsigned>(entries.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::string out = "instance,n,k,rho,lp_value,opt_value,achieved,ratio,runtime_ms\n";
  for (const std::string& row : rows) {
    out += row;
    out += '\n';
  }
  return out;
}

}  // namespace chanalloc
