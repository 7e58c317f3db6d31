// pdfa: parse, inspect, execute, and analyze probabilistic While
// programs from the command line.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "pdfa/cfg.hpp"
#include "pdfa/json_io.hpp"
#include "pdfa/monotone.hpp"
#include "pdfa/parser.hpp"
#include "pdfa/prob_analysis.hpp"
#include "pdfa/semantics.hpp"

namespace {

using namespace pdfa;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitSolver = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("no such file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Program load_program(const std::string& path) {
  return parse_program(read_file(path));
}

/// "uniform" stays literal; anything else is a path to a JSON file.
ProbVector input_distribution(const std::string& spec, const StateSpace& ss) {
  if (spec == "uniform") return load_distribution(spec, ss);
  return load_distribution(read_file(spec), ss);
}

void print_warnings(const BranchInfo& info) {
  for (const std::string& w : info.warnings)
    std::cerr << "warning: " << w << "\n";
}

struct CommonFlags {
  std::string input;
  std::string format = "json";
  std::string dist = "uniform";
  std::string abstraction = "id";
};

BranchInfo branch_phase(const Program& p, const CommonFlags& flags,
                        const std::string& static_probs_path,
                        double* residual_out) {
  FlowGraph g = flow(p);
  if (!static_probs_path.empty()) {
    auto probs = load_static_probs(read_file(static_probs_path));
    if (residual_out) *residual_out = 0.0;
    return static_branch_info(g, probs);
  }
  StateSpace ss(p.decls);
  ProbVector rho0 = input_distribution(flags.dist, ss);
  Abstraction abs = parse_abstraction_spec(flags.abstraction, ss);
  ProbSolution sol = solve_prob_forward(p, rho0, abs);
  if (residual_out) *residual_out = sol.residual;
  return extract_branch_probs(sol, g);
}

int run(int argc, char** argv) {
  CLI::App app{
      "Probabilistic data-flow analysis for a labelled While language"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string static_probs;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 42;
  std::uint64_t max_steps = 1000000;
  std::size_t table_n = 10;
  bool include_concrete = false;

  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("input", flags.input, "program file")->required();
  };

  CLI::App* parse_cmd = app.add_subcommand("parse", "parse and dump the AST");
  add_input(parse_cmd);

  CLI::App* pretty_cmd =
      app.add_subcommand("pretty", "parse and print the canonical source");
  add_input(pretty_cmd);

  CLI::App* cfg_cmd = app.add_subcommand("cfg", "emit the flow graph");
  add_input(cfg_cmd);
  cfg_cmd->add_option("--format", flags.format, "json or dot")
      ->check(CLI::IsMember({"json", "dot"}));

  CLI::App* analyze = app.add_subcommand("analyze", "data-flow analyses");
  analyze->require_subcommand(1);
  CLI::App* lv_cmd =
      analyze->add_subcommand("lv", "classical live variables");
  add_input(lv_cmd);
  CLI::App* plv_cmd =
      analyze->add_subcommand("plv", "probabilistic live variables");
  add_input(plv_cmd);
  plv_cmd->add_option("--input-dist", flags.dist,
                      "\"uniform\" or a distribution JSON file");
  plv_cmd->add_option("--abstraction", flags.abstraction,
                      "per-variable spec, e.g. forgetful:z,parity:x");
  plv_cmd->add_option("--static-probs", static_probs,
                      "JSON file {\"label\": p_true}; skips the forward phase");

  CLI::App* branch_cmd =
      app.add_subcommand("branch-probs", "estimate branch probabilities");
  add_input(branch_cmd);
  branch_cmd->add_option("--input-dist", flags.dist,
                         "\"uniform\" or a distribution JSON file");
  branch_cmd->add_option("--abstraction", flags.abstraction,
                         "per-variable spec, e.g. forgetful:z");

  CLI::App* abstract_cmd = app.add_subcommand(
      "abstract-test", "parity/primality abstraction quality tables");
  abstract_cmd->add_option("--n", table_n, "range size")->required();
  abstract_cmd->add_option("--format", flags.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  CLI::App* exec_cmd =
      app.add_subcommand("exec", "run the Monte Carlo interpreter");
  add_input(exec_cmd);
  exec_cmd->add_option("--trials", trials, "number of independent runs");
  exec_cmd->add_option("--seed", seed, "master seed");
  exec_cmd->add_option("--max-steps", max_steps, "per-run step budget");
  exec_cmd->add_option("--input-dist", flags.dist,
                       "\"uniform\" or a distribution JSON file");

  CLI::App* ops_cmd = app.add_subcommand(
      "ops", "dump block transfer operators and abstract test matrices");
  add_input(ops_cmd);
  ops_cmd->add_option("--abstraction", flags.abstraction,
                      "per-variable spec, e.g. forgetful:z");
  ops_cmd->add_flag("--concrete", include_concrete,
                    "include the full state-space operators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the flag diagnostic
    return code == 0 ? kExitOk : kExitInput;
  }

  if (parse_cmd->parsed()) {
    std::cout << program_to_json(load_program(flags.input));
    return kExitOk;
  }
  if (pretty_cmd->parsed()) {
    std::cout << pretty_print(load_program(flags.input));
    return kExitOk;
  }
  if (cfg_cmd->parsed()) {
    FlowGraph g = flow(load_program(flags.input));
    std::cout << (flags.format == "dot" ? to_dot(g) : cfg_to_json(g));
    return kExitOk;
  }
  if (lv_cmd->parsed()) {
    std::cout << lv_to_json(solve_lv(load_program(flags.input)));
    return kExitOk;
  }
  if (plv_cmd->parsed()) {
    Program p = load_program(flags.input);
    double residual = 0.0;
    BranchInfo info = branch_phase(p, flags, static_probs, &residual);
    print_warnings(info);
    PlvSolution sol = solve_plv(p, info);
    std::cout << plv_to_json(sol, info);
    return kExitOk;
  }
  if (branch_cmd->parsed()) {
    Program p = load_program(flags.input);
    double residual = 0.0;
    BranchInfo info = branch_phase(p, flags, "", &residual);
    print_warnings(info);
    std::cout << branch_info_to_json(info, residual);
    return kExitOk;
  }
  if (abstract_cmd->parsed()) {
    QualityTable t = quality_table(table_n);
    std::cout << (flags.format == "text" ? quality_table_to_text(t)
                                         : quality_table_to_json(t));
    return kExitOk;
  }
  if (exec_cmd->parsed()) {
    Program p = load_program(flags.input);
    StateSpace ss(p.decls);
    ProbVector rho0 = input_distribution(flags.dist, ss);
    auto report = run_monte_carlo(p, rho0, trials, seed, max_steps);
    std::cout << monte_carlo_to_json(report);
    return kExitOk;
  }
  if (ops_cmd->parsed()) {
    Program p = load_program(flags.input);
    StateSpace ss(p.decls);
    Abstraction abs = parse_abstraction_spec(flags.abstraction, ss);
    std::cout << ops_to_json(p, abs, include_concrete);
    return kExitOk;
  }
  return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  bool json_errors = true;
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--format" && i + 1 < argc)
      json_errors = std::string(argv[i + 1]) == "json";
  try {
    return run(argc, argv);
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    if (json_errors) std::cout << error_to_json("solver", e.what());
    return kExitSolver;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (json_errors) std::cout << error_to_json("input", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (json_errors) std::cout << error_to_json("input", e.what());
    return kExitInput;
  }
}
