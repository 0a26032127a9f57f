// Command-line front end: single trajectories, experiment batches, the
// brute-force oracle, per-level analytics, and the selftest battery.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cckp/harness.hpp"
#include "cckp/reference.hpp"

namespace {

using namespace cckp;

std::string opt_str(const std::optional<std::uint64_t>& value) {
  return value ? std::to_string(*value) : std::string("-");
}

void print_level_table(const ProblemInstance& inst, std::ostream& out) {
  const auto levels = level_summaries(inst);
  out << "level  balanced_cov  unbalanced_cov  cov_bound     feasible\n";
  for (const auto& summary : levels) {
    char line[160];
    if (summary.feasible_covariance_bound) {
      std::snprintf(line, sizeof(line), "%-6d %-13.6g %-15.6g %-13.6g %s\n",
                    summary.level, summary.balanced_covariance,
                    summary.most_unbalanced_covariance,
                    *summary.feasible_covariance_bound,
                    summary.level_feasible ? "yes" : "no");
    } else {
      std::snprintf(line, sizeof(line), "%-6d %-13.6g %-15.6g %-13s %s\n",
                    summary.level, summary.balanced_covariance,
                    summary.most_unbalanced_covariance, "-",
                    summary.level_feasible ? "yes" : "no");
    }
    out << line;
  }
  out << "max feasible level: " << max_feasible_level(inst) << "\n";
}

int cmd_run(const std::string& spec_path, const std::string& algo,
            std::uint64_t seed, const std::string& budget,
            const std::string& target_name, const std::string& init_name,
            bool trajectory) {
  const ProblemInstance inst = generate_instance(load_instance_spec(spec_path));

  AlgorithmConfig config;
  config.kind = parse_algorithm(algo);
  config.seed = seed;
  config.max_evaluations = parse_budget_rule(budget).evaluations_for(
      inst.num_items());
  if (init_name == "uniform")
    config.init = InitKind::uniform_random;
  else if (init_name == "all-ones")
    config.init = InitKind::all_ones;
  else if (init_name == "all-zeros")
    config.init = InitKind::all_zeros;
  else
    throw std::invalid_argument("unknown init: " + init_name);
  if (trajectory) config.trajectory = TrajectoryMode::improvements;

  std::optional<FitnessValue> target;
  if (target_name == "feasible")
    config.stop_at_feasible = true;
  else if (target_name == "oracle")
    target = brute_force_optimum(inst).optimum_fitness;
  else if (target_name == "closed-form")
    target = closed_form_target(inst);
  else if (target_name != "none")
    throw std::invalid_argument("unknown target: " + target_name);

  const RunRecord record = run(inst, config, target);
  std::cout << "algorithm:     " << algorithm_name(config.kind) << "\n"
            << "seed:          " << record.seed << "\n"
            << "evaluations:   " << record.evaluations << "\n"
            << "t_feasible:    " << opt_str(record.t_feasible) << "\n"
            << "t_optimal:     " << opt_str(record.t_optimal) << "\n";
  if (target)
    std::cout << "target:        profit=" << target->profit
              << " beta=" << target->beta << "\n";
  std::cout << "final fitness: profit=" << record.final_fitness.profit
            << " beta=" << record.final_fitness.beta << "\n"
            << "final bits:    " << record.final_solution.to_string() << "\n";
  if (trajectory) {
    std::cout << "improvements:\n";
    for (const auto& point : record.trajectory)
      std::cout << "  eval " << point.evaluation
                << "  profit=" << point.fitness.profit
                << " beta=" << point.fitness.beta << "\n";
  }
  return 0;
}

int cmd_experiment(const std::string& spec_path, const std::string& out_path,
                   int workers, bool summarize,
                   const std::optional<std::uint64_t>& seed,
                   const std::optional<int>& trials, const std::string& algo,
                   const std::string& budget, const std::string& target) {
  ExperimentSpec spec = load_experiment_spec(spec_path);
  if (seed) spec.master_seed = *seed;
  if (trials) spec.trials = *trials;
  if (!algo.empty()) {
    spec.algorithms.clear();
    if (algo == "both") {
      spec.algorithms = {AlgorithmKind::rls, AlgorithmKind::one_plus_one_ea};
    } else {
      spec.algorithms = {parse_algorithm(algo)};
    }
  }
  if (!budget.empty()) spec.budget = parse_budget_rule(budget);
  if (!target.empty()) {
    if (target == "feasible")
      spec.target = TargetKind::feasibility;
    else if (target == "oracle")
      spec.target = TargetKind::oracle_optimum;
    else if (target == "closed-form")
      spec.target = TargetKind::closed_form_optimum;
    else
      throw std::invalid_argument("unknown target: " + target);
  }

  const auto rows = run_experiment(spec, workers);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  write_csv(rows, out);
  out.close();
  std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";

  if (summarize) {
    const std::vector<ScalingModel> models{
        ScalingModel::n_log_n, ScalingModel::n2, ScalingModel::n2_log_n,
        ScalingModel::n3, ScalingModel::n3_log_n};
    for (const auto& report : scaling_summary(rows, spec.target, models))
      std::cout << format_report(report);
  }
  return 0;
}

int cmd_oracle(const std::string& spec_path, bool exact) {
  const ProblemInstance inst = generate_instance(load_instance_spec(spec_path));
  OracleOptions options;
  options.exact_compare = exact;
  const OracleResult result = brute_force_optimum(inst, options);
  std::cout << "optimum fitness:    profit=" << result.optimum_fitness.profit
            << " beta=" << result.optimum_fitness.beta << "\n"
            << "maximizers:         " << result.optimum_solutions.size() << "\n"
            << "example maximizer:  "
            << result.optimum_solutions.front().to_string() << "\n"
            << "max feasible level: " << result.max_feasible_level << "\n";
  print_level_table(inst, std::cout);
  return 0;
}

int cmd_levels(const std::string& spec_path) {
  const ProblemInstance inst = generate_instance(load_instance_spec(spec_path));
  print_level_table(inst, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chance-constrained knapsack with correlated uniform weights: "
               "RLS / (1+1) EA runner and analysis harness"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_path;
  std::string algo = "rls";
  std::string budget = "1000000";
  std::string target = "none";
  std::string init = "uniform";
  std::uint64_t seed = 1;
  bool trajectory = false;

  auto* run_cmd = app.add_subcommand("run", "run one trajectory");
  run_cmd->add_option("--spec", spec_path, "instance spec (JSON)")->required();
  run_cmd->add_option("--algo", algo, "rls or ea");
  run_cmd->add_option("--seed", seed, "rng seed");
  run_cmd->add_option("--budget", budget,
                      "evaluations: integer or MULT*MODEL (e.g. 10*n3logn)");
  run_cmd->add_option("--target", target,
                      "none, feasible, oracle, or closed-form");
  run_cmd->add_option("--init", init, "uniform, all-ones, or all-zeros");
  run_cmd->add_flag("--trajectory", trajectory, "print improvement steps");

  std::optional<std::uint64_t> seed_override;
  std::optional<int> trials_override;
  std::string exp_algo;
  std::string exp_budget;
  std::string exp_target;
  int workers = 0;
  bool summarize = false;

  auto* exp_cmd = app.add_subcommand("experiment", "run a trial batch to CSV");
  exp_cmd->add_option("--spec", spec_path, "experiment spec (JSON)")
      ->required();
  exp_cmd->add_option("--out", out_path, "output CSV path")->required();
  exp_cmd->add_option("--workers", workers,
                      "worker threads (default: CCKP_WORKERS or hardware)");
  exp_cmd->add_option("--seed", seed_override, "override master seed");
  exp_cmd->add_option("--trials", trials_override, "override trials per cell");
  exp_cmd->add_option("--algo", exp_algo, "override: rls, ea, or both");
  exp_cmd->add_option("--budget", exp_budget, "override budget rule");
  exp_cmd->add_option("--target", exp_target,
                      "override: feasible, oracle, or closed-form");
  exp_cmd->add_flag("--summarize", summarize, "print scaling summary");

  bool exact = false;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "brute-force report for a small instance");
  oracle_cmd->add_option("--spec", spec_path, "instance spec (JSON)")
      ->required();
  oracle_cmd->add_flag("--exact", exact, "exact rational comparisons");

  auto* levels_cmd =
      app.add_subcommand("levels", "per-level covariance and feasibility");
  levels_cmd->add_option("--spec", spec_path, "instance spec (JSON)")
      ->required();

  std::uint64_t selftest_seed = 1;
  auto* selftest_cmd =
      app.add_subcommand("selftest", "invariant battery on random instances");
  selftest_cmd->add_option("--seed", selftest_seed, "rng seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed())
      return cmd_run(spec_path, algo, seed, budget, target, init, trajectory);
    if (exp_cmd->parsed())
      return cmd_experiment(spec_path, out_path, workers, summarize,
                            seed_override, trials_override, exp_algo,
                            exp_budget, exp_target);
    if (oracle_cmd->parsed()) return cmd_oracle(spec_path, exact);
    if (levels_cmd->parsed()) return cmd_levels(spec_path);
    if (selftest_cmd->parsed())
      return cckp::selftest(selftest_seed, std::cout) ? 0 : 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
