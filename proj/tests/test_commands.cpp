#include <catch2/catch_amalgamated.hpp>

#include "chanalloc/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace chanalloc;

namespace {

InstanceData gen_disk(std::uint64_t seed, int n = 8, int k = 3) {
  GenParams p;
  p.n = n;
  p.k = k;
  p.seed = seed;
  return gen_instance(ConflictModel::Disk, p);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("solve reports a verifiable allocation") {
  InstanceData data = gen_disk(101);
  SolveOptions opts;
  opts.trials = 40;
  opts.seed = 5;
  Json report = cmd_solve(data, opts);

  CHECK(report["mode"] == Json("explicit"));
  CHECK(report["trials"] == Json(40));
  CHECK(report["lp_value"].get<double>() >= 0.0);
  CHECK(report["rho_used"].get<double>() > 0.0);
  CHECK(report["timings"]["lp_ms"].get<double>() >= 0.0);
  CHECK(report["stats"]["rounded"].size() == 2);

  std::vector<ChannelMask> bundles =
      parse_allocation(report, data.auction.num_bidders, data.auction.num_channels);
  VerifyOutcome verdict = cmd_verify(data, bundles);
  CHECK(verdict.ok);
  CHECK(verdict.report["ok"] == Json(true));
  CHECK(verdict.report["value"] == report["value"]);
}

TEST_CASE("solve is deterministic for a fixed seed") {
  InstanceData data = gen_disk(103);
  SolveOptions opts;
  opts.trials = 25;
  opts.seed = 9;
  auto without_timings = [](Json j) {
    j.erase("timings");
    return j.dump();
  };
  CHECK(without_timings(cmd_solve(data, opts)) ==
        without_timings(cmd_solve(data, opts)));
  opts.seed = 10;
  Json other = cmd_solve(data, opts);
  CHECK(other["seed"] == Json(10));
}

TEST_CASE("exact search agrees with verification and bounds the solver") {
  InstanceData data = gen_disk(107, 6, 2);
  Json exact = cmd_exact(data, 10'000'000);
  std::vector<ChannelMask> bundles =
      parse_allocation(exact, data.auction.num_bidders, data.auction.num_channels);
  VerifyOutcome verdict = cmd_verify(data, bundles);
  CHECK(verdict.ok);
  CHECK(verdict.report["value"] == exact["opt_value"]);

  SolveOptions opts;
  opts.trials = 60;
  Json solved = cmd_solve(data, opts);
  CHECK(Rational::from_string(solved["value"].get<std::string>()) <=
        Rational::from_string(exact["opt_value"].get<std::string>()));
  // The relaxation upper-bounds the optimum.
  CHECK(solved["lp_value"].get<double>() + 1e-6 >=
        Rational::from_string(exact["opt_value"].get<std::string>()).to_double());
}

TEST_CASE("verification flags a manufactured clash") {
  Json j;
  j["k"] = 1;
  j["bidders"] = Json::array();
  for (int v = 0; v < 2; ++v)
    j["bidders"].push_back(Json{
        {"id", v},
        {"valuation", Json{{"type", "additive"}, {"values", Json::array({"1"})}}}});
  j["conflict"] = {{"type", "explicit-unweighted"},
                   {"edges", Json::array({Json::array({0, 1})})}};
  InstanceData data = parse_instance(j);

  VerifyOutcome bad = cmd_verify(data, {0b1u, 0b1u});
  CHECK_FALSE(bad.ok);
  CHECK(bad.report["reason"] == Json("conflict"));
  CHECK(bad.report["channel"] == Json(1));

  VerifyOutcome good = cmd_verify(data, {0b1u, 0u});
  CHECK(good.ok);
  CHECK(good.report["value"] == Json("1"));

  CHECK_THROWS_AS(cmd_verify(data, {0b1u}), std::invalid_argument);
}

TEST_CASE("allocations parse from bare arrays and solve reports") {
  Json bare = Json::array({Json::array({1, 3}), Json::array(), Json::array({2})});
  std::vector<ChannelMask> masks = parse_allocation(bare, 3, 3);
  REQUIRE(masks.size() == 3);
  CHECK(masks[0] == 0b101u);
  CHECK(masks[1] == 0u);
  CHECK(masks[2] == 0b010u);

  Json wrapped;
  wrapped["allocation"] = bare;
  CHECK(parse_allocation(wrapped, 3, 3) == masks);

  CHECK_THROWS_AS(parse_allocation(bare, 4, 3), std::invalid_argument);
  Json high = Json::array({Json::array({4})});
  CHECK_THROWS_AS(parse_allocation(high, 1, 3), std::invalid_argument);
}

TEST_CASE("gen emits a parseable instance with request overrides") {
  Json req = {{"model", "protocol"}, {"n", 5}, {"k", 2},
              {"seed", 77},          {"delta", 0.5}};
  GenRequest parsed = parse_gen_request(req);
  CHECK(parsed.model == ConflictModel::Protocol);
  CHECK(parsed.params.n == 5);
  CHECK(parsed.params.delta == 0.5);

  Json emitted = cmd_gen(parsed.model, parsed.params, parsed.asymmetric);
  InstanceData data = parse_instance(emitted);
  CHECK(data.model == ConflictModel::Protocol);
  CHECK(data.delta == 0.5);
  CHECK(data.auction.num_bidders == 5);
}

TEST_CASE("bench produces one deterministic row per suite entry") {
  Json suite;
  suite["defaults"] = {{"trials", 10}, {"seed", 3}, {"opt_cap", 50000}};
  suite["instances"] = Json::array({
      Json{{"name", "disk-a"},
           {"gen", Json{{"model", "disk"}, {"n", 6}, {"k", 2}, {"seed", 1}}}},
      Json{{"gen", Json{{"model", "explicit-weighted"}, {"n", 5}, {"k", 2},
                        {"seed", 2}}},
           {"trials", 5}},
      Json{{"name", "big"},
           {"gen", Json{{"model", "disk"}, {"n", 24}, {"k", 3}, {"seed", 4}}},
           {"opt_cap", 10}},
  });

  std::string csv = cmd_bench(suite);
  std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "instance,n,k,rho,lp_value,opt_value,achieved,ratio,runtime_ms");
  CHECK(lines[1].rfind("disk-a,6,2,", 0) == 0);
  CHECK(lines[2].rfind("explicit-weighted-2,5,2,", 0) == 0);
  CHECK(lines[3].rfind("big,24,3,", 0) == 0);

  // The capped entry skips the exhaustive column but still reports a ratio
  // against the relaxation.
  std::istringstream big_row(lines[3]);
  std::vector<std::string> cells;
  for (std::string cell; std::getline(big_row, cell, ',');) cells.push_back(cell);
  REQUIRE(cells.size() == 9);
  CHECK(cells[5].empty());

  // Runtime is the only non-reproducible column.
  std::string again = cmd_bench(suite);
  std::vector<std::string> relines = split_lines(again);
  REQUIRE(relines.size() == lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    CHECK(lines[i].substr(0, lines[i].rfind(',')) ==
          relines[i].substr(0, relines[i].rfind(',')));
  }
}

TEST_CASE("bench propagates instance failures") {
  Json suite;
  suite["instances"] =
      Json::array({Json{{"gen", Json{{"model", "disk"}, {"n", 0}}}}});
  CHECK_THROWS_AS(cmd_bench(suite), std::invalid_argument);
  Json empty;
  CHECK_THROWS_AS(cmd_bench(empty), std::invalid_argument);
}

TEST_CASE("text files round trip through the small helpers") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "chanalloc-test-io";
  fs::create_directories(dir);
  fs::path file = dir / "inst.json";

  GenParams params;
  params.n = 5;
  params.k = 2;
  params.seed = 21;
  Json emitted = cmd_gen(ConflictModel::Disk, params, false);
  write_text_file(file.string(), emitted.dump(2));
  CHECK(load_json(file.string()) == emitted);
  CHECK(read_text_file(file.string()) == emitted.dump(2));
  CHECK_THROWS_AS(read_text_file((dir / "missing.json").string()),
                  std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("command line binary wires the commands together") {
  const char* bin = std::getenv("CHANALLOC_BIN");
  if (bin == nullptr || *bin == '\0') {
    SUCCEED("CHANALLOC_BIN not set; run through ctest to exercise the binary");
    return;
  }
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "chanalloc-test-cli";
  fs::create_directories(dir);
  fs::path inst = dir / "inst.json";
  fs::path report = dir / "report.json";
  std::string quiet = " > /dev/null 2>&1";

  std::string gen = std::string(bin) + " gen --model disk --n 6 --k 2 --seed 4 -o " +
                    inst.string() + quiet;
  REQUIRE(std::system(gen.c_str()) == 0);
  InstanceData data = parse_instance(load_json(inst.string()));
  CHECK(data.auction.num_bidders == 6);

  std::string solve = std::string(bin) + " solve " + inst.string() +
                      " --trials 20 --seed 2 -o " + report.string() + quiet;
  REQUIRE(std::system(solve.c_str()) == 0);
  Json solved = load_json(report.string());

  std::string verify = std::string(bin) + " verify " + inst.string() + " " +
                       report.string() + quiet;
  CHECK(std::system(verify.c_str()) == 0);

  // A deliberately clashing allocation exits with the dedicated status.
  Json everything = Json::array();
  for (int v = 0; v < 6; ++v) everything.push_back(Json::array({1, 2}));
  fs::path bad = dir / "bad.json";
  write_text_file(bad.string(), everything.dump());
  std::string verify_bad =
      std::string(bin) + " verify " + inst.string() + " " + bad.string() + quiet;
  int status = std::system(verify_bad.c_str());
  bool has_conflict = false;
  {
    BuiltModel model = build_model(data);
    std::vector<ChannelMask> all(6, 0b11u);
    Allocation alloc{all, allocation_value(data.auction, all)};
    has_conflict = !verify_allocation(model.graph, 2, alloc).ok;
  }
  if (has_conflict) {
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 2);
  }

  std::string bogus = std::string(bin) + " solve " + (dir / "nope.json").string() + quiet;
  int missing = std::system(bogus.c_str());
  REQUIRE(WIFEXITED(missing));
  CHECK(WEXITSTATUS(missing) == 1);
  fs::remove_all(dir);
}
