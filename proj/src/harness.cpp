#include "cckp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace cckp {

namespace {

using nlohmann::json;

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

// ---------------------------------------------------------------------------
// Instance generation

ProblemInstance generate_instance(const InstanceSpec& spec) {
  std::vector<std::string> issues;
  std::vector<double> profits;
  const bool shape_ok = spec.groups >= 1 && spec.group_size >= 1;
  const std::size_t expected =
      shape_ok ? static_cast<std::size_t>(spec.groups) * spec.group_size : 0;

  switch (spec.profit_kind) {
    case ProfitKind::uniform:
      profits.assign(expected, 1.0);
      break;
    case ProfitKind::mirrored: {
      if (shape_ok && static_cast<int>(spec.mirrored_values.size()) !=
                          spec.group_size) {
        std::ostringstream msg;
        msg << "mirrored profit list must have group_size = "
            << spec.group_size << " entries, got "
            << spec.mirrored_values.size();
        issues.push_back(msg.str());
        profits.assign(expected, 1.0);
        break;
      }
      for (std::size_t i = 1; i < spec.mirrored_values.size(); ++i) {
        if (spec.mirrored_values[i] > spec.mirrored_values[i - 1]) {
          issues.push_back("mirrored profit list must be nonincreasing");
          break;
        }
      }
      for (int g = 0; g < spec.groups; ++g)
        profits.insert(profits.end(), spec.mirrored_values.begin(),
                       spec.mirrored_values.end());
      break;
    }
    case ProfitKind::explicit_matrix:
      if (shape_ok && spec.explicit_profits.size() != expected) {
        std::ostringstream msg;
        msg << "explicit profit matrix must have " << expected
            << " entries, got " << spec.explicit_profits.size();
        issues.push_back(msg.str());
        profits.assign(expected, 1.0);
      } else {
        profits = spec.explicit_profits;
      }
      break;
  }

  try {
    ProblemInstance inst(spec.groups, spec.group_size, spec.expected_weight,
                         spec.variance, spec.covariance, spec.budget,
                         spec.tolerance, std::move(profits));
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return inst;
  } catch (const ValidationError& err) {
    std::vector<std::string> all = issues;
    for (const auto& issue : err.issues())
      if (std::find(all.begin(), all.end(), issue) == all.end())
        all.push_back(issue);
    throw ValidationError(std::move(all));
  }
}

// ---------------------------------------------------------------------------
// JSON I/O

namespace {

InstanceSpec instance_spec_from_json(const json& doc) {
  InstanceSpec spec;
  spec.groups = doc.at("groups").get<int>();
  spec.group_size = doc.at("group_size").get<int>();
  spec.expected_weight = doc.at("expected_weight").get<double>();
  spec.variance = doc.at("variance").get<double>();
  spec.covariance = doc.at("covariance").get<double>();
  spec.budget = doc.at("budget").get<double>();
  spec.tolerance = doc.at("tolerance").get<double>();
  const auto& profits = doc.at("profits");
  const std::string kind = profits.at("kind").get<std::string>();
  if (kind == "uniform") {
    spec.profit_kind = ProfitKind::uniform;
  } else if (kind == "mirrored") {
    spec.profit_kind = ProfitKind::mirrored;
    spec.mirrored_values = profits.at("values").get<std::vector<double>>();
  } else if (kind == "explicit") {
    spec.profit_kind = ProfitKind::explicit_matrix;
    for (const auto& row : profits.at("matrix"))
      for (const auto& entry : row)
        spec.explicit_profits.push_back(entry.get<double>());
  } else {
    throw std::invalid_argument("unknown profit kind: " + kind);
  }
  return spec;
}

json instance_spec_to_json_doc(const InstanceSpec& spec) {
  json doc{{"groups", spec.groups},
           {"group_size", spec.group_size},
           {"expected_weight", spec.expected_weight},
           {"variance", spec.variance},
           {"covariance", spec.covariance},
           {"budget", spec.budget},
           {"tolerance", spec.tolerance}};
  switch (spec.profit_kind) {
    case ProfitKind::uniform:
      doc["profits"] = {{"kind", "uniform"}};
      break;
    case ProfitKind::mirrored:
      doc["profits"] = {{"kind", "mirrored"},
                        {"values", spec.mirrored_values}};
      break;
    case ProfitKind::explicit_matrix: {
      std::vector<std::vector<double>> matrix;
      for (int g = 0; g < spec.groups; ++g)
        matrix.emplace_back(
            spec.explicit_profits.begin() + g * spec.group_size,
            spec.explicit_profits.begin() + (g + 1) * spec.group_size);
      doc["profits"] = {{"kind", "explicit"}, {"matrix", matrix}};
      break;
    }
  }
  return doc;
}

json parse_json_text(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& err) {
    throw std::invalid_argument(std::string("malformed ") + what + ": " +
                                err.what());
  }
}

json load_json_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument(std::string("cannot open ") + what + ": " +
                                path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str(), what);
}

}  // namespace

InstanceSpec parse_instance_spec(const std::string& json_text) {
  try {
    return instance_spec_from_json(parse_json_text(json_text, "instance spec"));
  } catch (const json::exception& err) {
    throw std::invalid_argument(std::string("malformed instance spec: ") +
                                err.what());
  }
}

InstanceSpec load_instance_spec(const std::string& path) {
  try {
    return instance_spec_from_json(load_json_file(path, "instance spec"));
  } catch (const json::exception& err) {
    throw std::invalid_argument(std::string("malformed instance spec: ") +
                                err.what());
  }
}

std::string instance_spec_to_json(const InstanceSpec& spec) {
  return instance_spec_to_json_doc(spec).dump(2);
}

// ---------------------------------------------------------------------------
// Closed-form optimum

namespace {

// Groups must all carry the same profit multiset.
void require_shared_group_profile(const ProblemInstance& inst) {
  const int m = inst.group_size();
  std::vector<double> first;
  for (int g = 0; g < inst.groups(); ++g) {
    std::vector<double> profile;
    profile.reserve(m);
    for (int j = 0; j < m; ++j) profile.push_back(inst.profit(g, j));
    std::sort(profile.begin(), profile.end());
    if (g == 0)
      first = std::move(profile);
    else if (profile != first)
      throw std::invalid_argument(
          "closed_form_target requires every group to share one profit "
          "multiset (uniform or mirrored instances)");
  }
}

}  // namespace

Solution closed_form_witness(const ProblemInstance& inst) {
  require_shared_group_profile(inst);
  const int r = max_feasible_level(inst);
  const auto tops = sorted_profits(inst);
  int positive = 0;
  for (double p : tops)
    if (p > 0.0) ++positive;
  // Zero-profit items only raise the violation bound, so the optimum stops
  // at the positive prefix even when deeper levels stay feasible.
  const int level = std::min(r, positive);
  return balanced_solution(inst, level);
}

FitnessValue closed_form_target(const ProblemInstance& inst) {
  return fitness_of(inst, closed_form_witness(inst));
}

// ---------------------------------------------------------------------------
// Budgets and scaling models

namespace {

double model_value(BudgetModel model, int n) {
  const double nd = n;
  switch (model) {
    case BudgetModel::absolute:
      return 0.0;
    case BudgetModel::n_log_n:
      return nd * std::log(nd);
    case BudgetModel::n2:
      return nd * nd;
    case BudgetModel::n2_log_n:
      return nd * nd * std::log(nd);
    case BudgetModel::n3:
      return nd * nd * nd;
    case BudgetModel::n3_log_n:
      return nd * nd * nd * std::log(nd);
  }
  throw std::logic_error("unreachable budget model");
}

const std::vector<std::pair<std::string, BudgetModel>>& budget_model_names() {
  static const std::vector<std::pair<std::string, BudgetModel>> names{
      {"nlogn", BudgetModel::n_log_n},
      {"n2", BudgetModel::n2},
      {"n2logn", BudgetModel::n2_log_n},
      {"n3", BudgetModel::n3},
      {"n3logn", BudgetModel::n3_log_n}};
  return names;
}

}  // namespace

std::uint64_t BudgetRule::evaluations_for(int n) const {
  if (model == BudgetModel::absolute) return absolute_evaluations;
  const double value = std::ceil(multiplier * model_value(model, n));
  if (!(value >= 1.0)) return 1;
  return static_cast<std::uint64_t>(value);
}

BudgetRule parse_budget_rule(const std::string& text) {
  BudgetRule rule;
  const auto star = text.find('*');
  if (star == std::string::npos) {
    rule.model = BudgetModel::absolute;
    try {
      rule.absolute_evaluations = std::stoull(text);
    } catch (const std::exception&) {
      throw std::invalid_argument("budget must be an integer or MULT*MODEL: " +
                                  text);
    }
    return rule;
  }
  try {
    rule.multiplier = std::stod(text.substr(0, star));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad budget multiplier in: " + text);
  }
  const std::string name = text.substr(star + 1);
  for (const auto& [token, model] : budget_model_names()) {
    if (name == token) {
      rule.model = model;
      return rule;
    }
  }
  throw std::invalid_argument(
      "unknown budget model '" + name +
      "' (expected nlogn, n2, n2logn, n3, or n3logn)");
}

double scaling_value(ScalingModel model, int n) {
  switch (model) {
    case ScalingModel::n_log_n:
      return model_value(BudgetModel::n_log_n, n);
    case ScalingModel::n2:
      return model_value(BudgetModel::n2, n);
    case ScalingModel::n2_log_n:
      return model_value(BudgetModel::n2_log_n, n);
    case ScalingModel::n3:
      return model_value(BudgetModel::n3, n);
    case ScalingModel::n3_log_n:
      return model_value(BudgetModel::n3_log_n, n);
  }
  throw std::logic_error("unreachable scaling model");
}

std::string scaling_model_name(ScalingModel model) {
  switch (model) {
    case ScalingModel::n_log_n:
      return "nlogn";
    case ScalingModel::n2:
      return "n2";
    case ScalingModel::n2_log_n:
      return "n2logn";
    case ScalingModel::n3:
      return "n3";
    case ScalingModel::n3_log_n:
      return "n3logn";
  }
  throw std::logic_error("unreachable scaling model");
}

// ---------------------------------------------------------------------------
// Experiments

InstanceSpec InstanceTemplate::materialize(int groups, int group_size) const {
  InstanceSpec spec;
  spec.groups = groups;
  spec.group_size = group_size;
  spec.expected_weight = expected_weight;
  spec.variance = variance;
  spec.covariance = covariance;
  spec.tolerance = tolerance;
  spec.budget = budget_proportional
                    ? budget * expected_weight * groups * group_size
                    : budget;
  spec.profit_kind = profit_kind;
  if (profit_kind == ProfitKind::mirrored) {
    if (mirrored_descending) {
      spec.mirrored_values.resize(group_size);
      for (int j = 0; j < group_size; ++j)
        spec.mirrored_values[j] = group_size - j;
    } else {
      spec.mirrored_values = mirrored_values;
    }
  }
  return spec;
}

namespace {

TargetKind parse_target_kind(const std::string& name) {
  if (name == "feasibility" || name == "feasible") return TargetKind::feasibility;
  if (name == "oracle") return TargetKind::oracle_optimum;
  if (name == "closed-form" || name == "closed_form")
    return TargetKind::closed_form_optimum;
  throw std::invalid_argument("unknown target kind: " + name);
}

InitKind parse_init_kind(const std::string& name) {
  if (name == "uniform" || name == "uniform_random")
    return InitKind::uniform_random;
  if (name == "all-ones" || name == "all_ones") return InitKind::all_ones;
  if (name == "all-zeros" || name == "all_zeros") return InitKind::all_zeros;
  throw std::invalid_argument("unknown init kind: " + name);
}

ExperimentSpec experiment_spec_from_json(const json& doc) {
  ExperimentSpec spec;
  const auto& inst = doc.at("instance");
  spec.instance.expected_weight = inst.at("expected_weight").get<double>();
  spec.instance.variance = inst.at("variance").get<double>();
  spec.instance.covariance = inst.at("covariance").get<double>();
  spec.instance.tolerance = inst.at("tolerance").get<double>();
  const auto& budget = inst.at("budget");
  if (budget.is_object()) {
    spec.instance.budget_proportional = true;
    spec.instance.budget = budget.at("proportional").get<double>();
  } else {
    spec.instance.budget = budget.get<double>();
  }
  const auto& profits = inst.at("profits");
  const std::string kind = profits.at("kind").get<std::string>();
  if (kind == "uniform") {
    spec.instance.profit_kind = ProfitKind::uniform;
  } else if (kind == "mirrored_descending") {
    spec.instance.profit_kind = ProfitKind::mirrored;
    spec.instance.mirrored_descending = true;
  } else if (kind == "mirrored") {
    spec.instance.profit_kind = ProfitKind::mirrored;
    spec.instance.mirrored_values =
        profits.at("values").get<std::vector<double>>();
  } else {
    throw std::invalid_argument("unknown experiment profit kind: " + kind);
  }

  for (const auto& size : doc.at("sizes"))
    spec.sizes.emplace_back(size.at(0).get<int>(), size.at(1).get<int>());
  if (doc.contains("algorithms")) {
    spec.algorithms.clear();
    for (const auto& name : doc.at("algorithms"))
      spec.algorithms.push_back(parse_algorithm(name.get<std::string>()));
  }
  spec.trials = doc.at("trials").get<int>();
  spec.master_seed = doc.at("master_seed").get<std::uint64_t>();
  const auto& budget_rule = doc.at("budget");
  if (budget_rule.at("kind").get<std::string>() == "absolute") {
    spec.budget.model = BudgetModel::absolute;
    spec.budget.absolute_evaluations =
        budget_rule.at("evaluations").get<std::uint64_t>();
  } else {
    const std::string model = budget_rule.at("model").get<std::string>();
    bool found = false;
    for (const auto& [token, value] : budget_model_names()) {
      if (model == token) {
        spec.budget.model = value;
        found = true;
        break;
      }
    }
    if (!found)
      throw std::invalid_argument("unknown budget model: " + model);
    spec.budget.multiplier = budget_rule.at("multiplier").get<double>();
  }
  spec.target = parse_target_kind(doc.at("target").get<std::string>());
  if (doc.contains("init"))
    spec.init = parse_init_kind(doc.at("init").get<std::string>());
  return spec;
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
  try {
    return experiment_spec_from_json(
        parse_json_text(json_text, "experiment spec"));
  } catch (const json::exception& err) {
    throw std::invalid_argument(std::string("malformed experiment spec: ") +
                                err.what());
  }
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  try {
    return experiment_spec_from_json(load_json_file(path, "experiment spec"));
  } catch (const json::exception& err) {
    throw std::invalid_argument(std::string("malformed experiment spec: ") +
                                err.what());
  }
}

std::vector<TrialRow> run_experiment(const ExperimentSpec& spec, int workers) {
  if (spec.sizes.empty())
    throw std::invalid_argument("experiment needs at least one size");
  if (spec.algorithms.empty())
    throw std::invalid_argument("experiment needs at least one algorithm");
  if (spec.trials < 1)
    throw std::invalid_argument("experiment needs at least one trial");

  struct Cell {
    ProblemInstance instance;
    std::optional<FitnessValue> target;
  };
  std::vector<Cell> cells;
  cells.reserve(spec.sizes.size());
  for (const auto& [groups, group_size] : spec.sizes) {
    ProblemInstance inst =
        generate_instance(spec.instance.materialize(groups, group_size));
    std::optional<FitnessValue> target;
    switch (spec.target) {
      case TargetKind::feasibility:
        break;
      case TargetKind::oracle_optimum:
        target = brute_force_optimum(inst).optimum_fitness;
        break;
      case TargetKind::closed_form_optimum:
        target = closed_form_target(inst);
        break;
    }
    cells.push_back(Cell{std::move(inst), target});
  }

  const std::size_t algo_count = spec.algorithms.size();
  const std::size_t total =
      spec.sizes.size() * algo_count * static_cast<std::size_t>(spec.trials);
  std::vector<TrialRow> rows(total);

  parallel_for(total, workers, [&](std::size_t index) {
    const int trial = static_cast<int>(index % spec.trials);
    const std::size_t rest = index / spec.trials;
    const std::size_t algo_index = rest % algo_count;
    const std::size_t size_index = rest / algo_count;

    const Cell& cell = cells[size_index];
    const ProblemInstance& inst = cell.instance;

    AlgorithmConfig config;
    config.kind = spec.algorithms[algo_index];
    config.init = spec.init;
    config.seed = derive_stream_seed(spec.master_seed, index);
    config.max_evaluations = spec.budget.evaluations_for(inst.num_items());
    config.stop_at_feasible = spec.target == TargetKind::feasibility;

    const RunRecord record = run(inst, config, cell.target);

    TrialRow& row = rows[index];
    row.algorithm = config.kind;
    row.groups = inst.groups();
    row.group_size = inst.group_size();
    row.n = inst.num_items();
    row.trial = trial;
    row.seed = config.seed;
    row.t_feasible = record.t_feasible;
    row.t_optimal = record.t_optimal;
    row.evaluations = record.evaluations;
    row.final_profit = record.final_fitness.profit;
    row.final_beta = record.final_fitness.beta;
    if (cell.target) {
      row.target_profit = cell.target->profit;
      row.target_beta = cell.target->beta;
    }
    row.censored = spec.target == TargetKind::feasibility
                       ? !record.t_feasible.has_value()
                       : !record.t_optimal.has_value();
  });

  return rows;
}

void write_csv(const std::vector<TrialRow>& rows, std::ostream& out) {
  out << "algorithm,K,m,n,trial,seed,t_feasible,t_optimal,evaluations,"
         "final_profit,final_beta,target_profit,target_beta,censored\n";
  const auto opt_u64 = [](const std::optional<std::uint64_t>& value) {
    return value ? std::to_string(*value) : std::string("NA");
  };
  const auto opt_double = [](const std::optional<double>& value) {
    return value ? format_double(*value) : std::string("NA");
  };
  for (const TrialRow& row : rows) {
    out << algorithm_name(row.algorithm) << ',' << row.groups << ','
        << row.group_size << ',' << row.n << ',' << row.trial << ','
        << row.seed << ',' << opt_u64(row.t_feasible) << ','
        << opt_u64(row.t_optimal) << ',' << row.evaluations << ','
        << format_double(row.final_profit) << ','
        << format_double(row.final_beta) << ','
        << opt_double(row.target_profit) << ','
        << opt_double(row.target_beta) << ',' << (row.censored ? 1 : 0)
        << '\n';
  }
}

std::string csv_string(const std::vector<TrialRow>& rows) {
  std::ostringstream out;
  write_csv(rows, out);
  return out.str();
}

// ---------------------------------------------------------------------------
// Scaling summaries

const ModelFit& ScalingReport::fit_for(ScalingModel model) const {
  for (const ModelFit& fit : fits)
    if (fit.model == model) return fit;
  throw std::invalid_argument("model not part of this report");
}

std::vector<ScalingReport> scaling_summary(
    const std::vector<TrialRow>& rows, TargetKind target,
    const std::vector<ScalingModel>& models, double threshold) {
  std::vector<AlgorithmKind> algorithms;
  for (const TrialRow& row : rows)
    if (std::find(algorithms.begin(), algorithms.end(), row.algorithm) ==
        algorithms.end())
      algorithms.push_back(row.algorithm);

  std::vector<ScalingReport> reports;
  for (AlgorithmKind algorithm : algorithms) {
    std::vector<int> sizes;
    for (const TrialRow& row : rows)
      if (row.algorithm == algorithm &&
          std::find(sizes.begin(), sizes.end(), row.n) == sizes.end())
        sizes.push_back(row.n);
    std::sort(sizes.begin(), sizes.end());

    ScalingReport report;
    report.algorithm = algorithm;
    report.target = target;
    report.threshold = threshold;

    for (int n : sizes) {
      std::vector<std::uint64_t> hits;
      int censored = 0;
      for (const TrialRow& row : rows) {
        if (row.algorithm != algorithm || row.n != n) continue;
        const auto& value = target == TargetKind::feasibility
                                ? row.t_feasible
                                : row.t_optimal;
        if (value)
          hits.push_back(*value);
        else
          ++censored;
      }
      std::sort(hits.begin(), hits.end());
      SizeStats stats;
      stats.n = n;
      stats.completed = static_cast<int>(hits.size());
      stats.censored = censored;
      if (!hits.empty()) {
        const std::size_t k = hits.size();
        stats.median =
            (static_cast<double>(hits[(k - 1) / 2]) + hits[k / 2]) / 2.0;
        const std::size_t q_index = static_cast<std::size_t>(
            std::ceil(0.9 * static_cast<double>(k))) - 1;
        stats.quantile90 = static_cast<double>(hits[q_index]);
      }
      report.sizes.push_back(stats);
    }

    std::vector<std::string> problems;
    if (report.sizes.size() < 3)
      problems.push_back("need >= 3 sizes, have " +
                         std::to_string(report.sizes.size()));
    for (const SizeStats& stats : report.sizes)
      if (stats.completed < 30)
        problems.push_back("size n=" + std::to_string(stats.n) + " has only " +
                           std::to_string(stats.completed) +
                           " completed trials (need 30)");
    if (!problems.empty()) {
      std::string message =
          "insufficient data for " + algorithm_name(algorithm) + ":";
      for (const auto& problem : problems) message += " " + problem + ";";
      throw InsufficientDataError(message);
    }

    for (ScalingModel model : models) {
      ModelFit fit;
      fit.model = model;
      double numerator = 0.0;
      double denominator = 0.0;
      for (const SizeStats& stats : report.sizes) {
        const double g = scaling_value(model, stats.n);
        numerator += stats.median * g;
        denominator += g * g;
      }
      fit.fitted_constant = denominator > 0.0 ? numerator / denominator : 0.0;
      double running_min = std::numeric_limits<double>::infinity();
      fit.no_super_model_growth = true;
      for (const SizeStats& stats : report.sizes) {
        const double g = scaling_value(model, stats.n);
        const double per_size = stats.median / g;
        fit.per_size_constant.push_back(per_size);
        const double predicted = fit.fitted_constant * g;
        const double residual =
            predicted > 0.0 ? stats.median / predicted - 1.0 : 0.0;
        fit.relative_residuals.push_back(residual);
        fit.max_abs_residual =
            std::max(fit.max_abs_residual, std::fabs(residual));
        if (per_size > (1.0 + threshold) * running_min)
          fit.no_super_model_growth = false;
        running_min = std::min(running_min, per_size);
      }
      fit.stable = fit.max_abs_residual <= threshold;
      report.fits.push_back(fit);
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string format_report(const ScalingReport& report) {
  std::ostringstream out;
  out << "algorithm " << algorithm_name(report.algorithm) << ", target "
      << (report.target == TargetKind::feasibility ? "feasibility"
                                                   : "optimum")
      << "\n";
  out << "  n      completed censored median       q90\n";
  for (const SizeStats& stats : report.sizes) {
    char line[128];
    std::snprintf(line, sizeof(line), "  %-6d %-9d %-8d %-12.1f %.1f\n",
                  stats.n, stats.completed, stats.censored, stats.median,
                  stats.quantile90);
    out << line;
  }
  for (const ModelFit& fit : report.fits) {
    char line[160];
    std::snprintf(line, sizeof(line),
                  "  model %-7s C=%-12.5g max|res|=%-8.3f stable=%s "
                  "no_super_growth=%s\n",
                  scaling_model_name(fit.model).c_str(), fit.fitted_constant,
                  fit.max_abs_residual, fit.stable ? "yes" : "no",
                  fit.no_super_model_growth ? "yes" : "no");
    out << line;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Randomized instances

InstanceSpec random_instance_spec(Rng& rng, const GeneratorOptions& options) {
  // All values are multiples of 1/16 (1/8 for the budget factor), so every
  // derived moment is an exactly representable dyadic rational.
  const auto grid16 = [&rng](int lo, int hi) {
    return static_cast<double>(lo + rng.uniform_index(hi - lo + 1)) / 16.0;
  };

  InstanceSpec spec;
  do {
    spec.groups = 1 + static_cast<int>(rng.uniform_index(options.max_groups));
    spec.group_size =
        1 + static_cast<int>(rng.uniform_index(options.max_group_size));
  } while (spec.groups * spec.group_size < options.min_items ||
           spec.groups * spec.group_size > options.max_items);

  spec.expected_weight = grid16(4, 64);  // 0.25 .. 4.0
  spec.variance = grid16(4, 64);
  spec.covariance = grid16(4, 64);
  spec.tolerance =
      static_cast<double>(1 + rng.uniform_index(15)) / 16.0;  // 1/16 .. 15/16
  const double budget_factor =
      static_cast<double>(1 + rng.uniform_index(10)) / 8.0;  // 1/8 .. 10/8
  spec.budget =
      spec.expected_weight * spec.groups * spec.group_size * budget_factor;

  std::vector<ProfitKind> kinds;
  if (options.allow_uniform) kinds.push_back(ProfitKind::uniform);
  if (options.allow_mirrored) kinds.push_back(ProfitKind::mirrored);
  if (options.allow_explicit) kinds.push_back(ProfitKind::explicit_matrix);
  if (kinds.empty()) throw std::invalid_argument("no profit kind allowed");
  spec.profit_kind = kinds[rng.uniform_index(kinds.size())];

  const int profit_lo = options.positive_profits ? 1 : 0;
  if (spec.profit_kind == ProfitKind::mirrored) {
    spec.mirrored_values.resize(spec.group_size);
    for (double& value : spec.mirrored_values)
      value = grid16(profit_lo, 128);  // up to 8.0
    std::sort(spec.mirrored_values.begin(), spec.mirrored_values.end(),
              std::greater<>());
  } else if (spec.profit_kind == ProfitKind::explicit_matrix) {
    spec.explicit_profits.resize(
        static_cast<std::size_t>(spec.groups) * spec.group_size);
    for (double& value : spec.explicit_profits)
      value = grid16(profit_lo, 128);
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Misc

std::string algorithm_name(AlgorithmKind kind) {
  return kind == AlgorithmKind::rls ? "rls" : "ea";
}

AlgorithmKind parse_algorithm(const std::string& name) {
  if (name == "rls") return AlgorithmKind::rls;
  if (name == "ea" || name == "1+1ea" || name == "one_plus_one_ea")
    return AlgorithmKind::one_plus_one_ea;
  throw std::invalid_argument("unknown algorithm: " + name);
}

int default_worker_count() {
  if (const char* env = std::getenv("CCKP_WORKERS")) {
    const int value = std::atoi(env);
    if (value >= 1) return value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers <= 0) workers = default_worker_count();
  const std::size_t thread_count =
      std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  if (thread_count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(thread_count);
  for (std::size_t t = 0; t < thread_count; ++t) {
    threads.emplace_back([&] {
      while (true) {
        const std::size_t index = next.fetch_add(1);
        if (index >= count) return;
        try {
          fn(index);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& thread : threads) thread.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace cckp
