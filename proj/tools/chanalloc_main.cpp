// Command line front end: generate, solve, verify and benchmark channel
// allocation instances over conflict graphs.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <chanalloc/commands.hpp>

using namespace chanalloc;

namespace {

void emit_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"channel allocation for conflict-constrained spectrum auctions"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance file");
  std::string gen_model = "disk";
  GenParams gp;
  bool gen_asymmetric = false;
  std::string gen_out;
  gen->add_option("--model", gen_model,
                  "explicit-unweighted | explicit-weighted | disk | distance2-disk | "
                  "protocol | physical-fixed | physical-powercontrol")
      ->capture_default_str();
  gen->add_option("--n", gp.n, "number of bidders")->capture_default_str();
  gen->add_option("--k", gp.k, "number of channels")->capture_default_str();
  gen->add_option("--seed", gp.seed, "generator seed")->capture_default_str();
  gen->add_option("--delta", gp.delta, "protocol guard parameter")
      ->capture_default_str();
  gen->add_option("--alpha", gp.alpha, "path loss exponent")->capture_default_str();
  gen->add_option("--beta", gp.beta, "decoding threshold")->capture_default_str();
  gen->add_option("--nu", gp.nu, "ambient noise")->capture_default_str();
  gen->add_option("--powers", gp.powers, "uniform | linear (physical-fixed)")
      ->capture_default_str();
  gen->add_option("--edge-prob", gp.edge_prob, "edge density for explicit models")
      ->capture_default_str();
  gen->add_option("--max-bundles", gp.max_bundles,
                  "cap on bundles per explicit valuation")
      ->capture_default_str();
  gen->add_flag("--asymmetric", gen_asymmetric,
                "per-channel weight layers (explicit-weighted only)");
  gen->add_option("-o,--output", gen_out, "write to file instead of stdout");

  // solve
  auto* solve = app.add_subcommand("solve", "run the LP + rounding pipeline");
  std::string solve_file;
  std::string solve_mode = "explicit";
  SolveOptions sopts;
  std::optional<double> rho_override;
  std::string solve_out;
  solve->add_option("file", solve_file, "instance file")->required();
  solve->add_option("--mode", solve_mode, "explicit | oracle")->capture_default_str();
  solve->add_option("--trials", sopts.trials, "independent rounding trials")
      ->capture_default_str();
  solve->add_option("--seed", sopts.seed, "rounding seed")->capture_default_str();
  solve->add_option("--rho-override", rho_override,
                    "replace the instance's independence bound");
  solve->add_option("-o,--output", solve_out, "write the report to a file");

  // exact
  auto* exact = app.add_subcommand("exact", "exhaustive optimum (small instances)");
  std::string exact_file;
  long long max_nodes = 10000000;
  std::string exact_out;
  exact->add_option("file", exact_file, "instance file")->required();
  exact->add_option("--max-bruteforce", max_nodes,
                    "search-tree size cap; exceeding it aborts with exit code 3")
      ->capture_default_str();
  exact->add_option("-o,--output", exact_out, "write the report to a file");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "check an allocation against an instance's conflicts");
  std::string verify_file;
  std::string alloc_file;
  verify->add_option("file", verify_file, "instance file")->required();
  verify->add_option("allocation", alloc_file,
                     "allocation file (channel lists, or a solve report)")
      ->required();

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark suite, emit CSV");
  std::string bench_file;
  std::string bench_out;
  bench->add_option("suite", bench_file, "suite description file")->required();
  bench->add_option("-o,--output", bench_out, "write the CSV to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      Json out = cmd_gen(conflict_model_from_string(gen_model), gp, gen_asymmetric);
      emit_output(out.dump(2) + "\n", gen_out);
    } else if (solve->parsed()) {
      if (solve_mode == "oracle")
        sopts.mode = SolveMode::Oracle;
      else if (solve_mode != "explicit")
        throw std::invalid_argument("--mode must be 'explicit' or 'oracle'");
      sopts.rho_override = rho_override;
      InstanceData data = parse_instance(load_json(solve_file));
      emit_output(cmd_solve(data, sopts).dump(2) + "\n", solve_out);
    } else if (exact->parsed()) {
      InstanceData data = parse_instance(load_json(exact_file));
      emit_output(cmd_exact(data, max_nodes).dump(2) + "\n", exact_out);
    } else if (verify->parsed()) {
      InstanceData data = parse_instance(load_json(verify_file));
      std::vector<ChannelMask> bundles =
          parse_allocation(load_json(alloc_file), data.auction.num_bidders,
                           data.auction.num_channels);
      VerifyOutcome outcome = cmd_verify(data, bundles);
      std::cout << outcome.report.dump(2) << "\n";
      return outcome.ok ? 0 : 2;
    } else if (bench->parsed()) {
      emit_output(cmd_bench(load_json(bench_file)), bench_out);
    }
  } catch (const SizeCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
