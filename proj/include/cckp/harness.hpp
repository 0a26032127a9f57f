#ifndef CCKP_HARNESS_HPP
#define CCKP_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cckp/algorithms.hpp"
#include "cckp/analysis.hpp"
#include "cckp/model.hpp"

namespace cckp {

enum class ProfitKind { uniform, mirrored, explicit_matrix };

/// Declarative description of one instance; see generate_instance.
struct InstanceSpec {
  int groups = 1;
  int group_size = 1;
  double expected_weight = 1.0;
  double variance = 1.0;
  double covariance = 1.0;
  double budget = 1.0;
  double tolerance = 0.5;
  ProfitKind profit_kind = ProfitKind::uniform;
  /// For mirrored: group_size values, nonincreasing; every group gets them.
  std::vector<double> mirrored_values;
  /// For explicit_matrix: groups * group_size values, row-major.
  std::vector<double> explicit_profits;
};

/// Materializes the profit matrix and validates every field constraint,
/// throwing ValidationError that lists all violations at once.
ProblemInstance generate_instance(const InstanceSpec& spec);

InstanceSpec parse_instance_spec(const std::string& json_text);
InstanceSpec load_instance_spec(const std::string& path);
std::string instance_spec_to_json(const InstanceSpec& spec);

/// Fitness of the structural optimum of an instance whose groups all share
/// one profit multiset (uniform profits are the special case of that).
/// Computed from the maximal feasible level and a balanced top-profit
/// solution; throws std::invalid_argument when the groups differ.
FitnessValue closed_form_target(const ProblemInstance& inst);

/// The balanced top-profit solution realizing closed_form_target.
Solution closed_form_witness(const ProblemInstance& inst);

// ---------------------------------------------------------------------------
// Experiments

enum class TargetKind { feasibility, oracle_optimum, closed_form_optimum };

enum class BudgetModel { absolute, n_log_n, n2, n2_log_n, n3, n3_log_n };

/// Evaluation budget: either a fixed count or multiplier * g(n) with g one
/// of the candidate growth models (natural logarithm, rounded up).
struct BudgetRule {
  BudgetModel model = BudgetModel::absolute;
  std::uint64_t absolute_evaluations = 1'000'000;
  double multiplier = 1.0;

  std::uint64_t evaluations_for(int n) const;
};

/// Per-size instance template. The budget may be fixed or proportional to
/// the total expected weight (budget_fraction * a * n), and mirrored
/// profiles may be regenerated per size as group_size, group_size-1, ..., 1.
struct InstanceTemplate {
  double expected_weight = 1.0;
  double variance = 1.0;
  double covariance = 1.0;
  double tolerance = 0.5;
  bool budget_proportional = false;
  double budget = 1.0;           // absolute budget, or fraction when proportional
  ProfitKind profit_kind = ProfitKind::uniform;
  bool mirrored_descending = false;  // mirrored profile m, m-1, ..., 1 per size
  std::vector<double> mirrored_values;

  InstanceSpec materialize(int groups, int group_size) const;
};

struct ExperimentSpec {
  InstanceTemplate instance;
  std::vector<std::pair<int, int>> sizes;  // (groups, group_size)
  std::vector<AlgorithmKind> algorithms{AlgorithmKind::rls,
                                        AlgorithmKind::one_plus_one_ea};
  int trials = 1;
  std::uint64_t master_seed = 0;
  BudgetRule budget;
  TargetKind target = TargetKind::feasibility;
  InitKind init = InitKind::uniform_random;
};

ExperimentSpec parse_experiment_spec(const std::string& json_text);
ExperimentSpec load_experiment_spec(const std::string& path);

/// One CSV row. Hitting times are evaluation indices; absent means the
/// event did not occur within the budget.
struct TrialRow {
  AlgorithmKind algorithm = AlgorithmKind::rls;
  int groups = 0;
  int group_size = 0;
  int n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> t_feasible;
  std::optional<std::uint64_t> t_optimal;
  std::uint64_t evaluations = 0;
  double final_profit = 0.0;
  double final_beta = 0.0;
  std::optional<double> target_profit;
  std::optional<double> target_beta;
  bool censored = false;
};

/// Runs every (size, algorithm, trial) cell on a bounded worker pool and
/// returns rows in canonical order (size, then algorithm, then trial)
/// regardless of scheduling. Child seeds derive from (master_seed, cell
/// index), so the result is a pure function of the spec. Guard violations
/// (oracle target with n > 24, closed-form target on non-mirrored profits)
/// fail fast before any trial runs.
std::vector<TrialRow> run_experiment(const ExperimentSpec& spec,
                                     int workers = 0);

/// Fixed column set; floating-point fields carry 17 significant digits and
/// absent values serialize as "NA", so equal specs yield identical bytes.
void write_csv(const std::vector<TrialRow>& rows, std::ostream& out);
std::string csv_string(const std::vector<TrialRow>& rows);

// ---------------------------------------------------------------------------
// Scaling summaries

enum class ScalingModel { n_log_n, n2, n2_log_n, n3, n3_log_n };

/// g(n) for a model, natural logarithm.
double scaling_value(ScalingModel model, int n);

struct SizeStats {
  int n = 0;
  int completed = 0;
  int censored = 0;
  double median = 0.0;
  double quantile90 = 0.0;
};

struct ModelFit {
  ScalingModel model = ScalingModel::n_log_n;
  double fitted_constant = 0.0;            // least squares through the origin
  std::vector<double> per_size_constant;   // median_i / g(n_i)
  std::vector<double> relative_residuals;  // median_i / (C * g_i) - 1
  double max_abs_residual = 0.0;
  /// Two-sided: every relative residual within the threshold.
  bool stable = false;
  /// One-sided: the per-size constant never grows by more than the
  /// threshold over any smaller size (observed growth does not exceed the
  /// model).
  bool no_super_model_growth = false;
};

struct ScalingReport {
  AlgorithmKind algorithm = AlgorithmKind::rls;
  TargetKind target = TargetKind::feasibility;
  double threshold = 0.25;
  std::vector<SizeStats> sizes;
  std::vector<ModelFit> fits;

  const ModelFit& fit_for(ScalingModel model) const;
};

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-algorithm hitting-time summaries and constant fits over the model
/// set. Uses t_feasible when target == feasibility, t_optimal otherwise.
/// Requires >= 3 sizes with >= 30 completed trials each per algorithm.
std::vector<ScalingReport> scaling_summary(
    const std::vector<TrialRow>& rows, TargetKind target,
    const std::vector<ScalingModel>& models, double threshold = 0.25);

std::string format_report(const ScalingReport& report);

// ---------------------------------------------------------------------------
// Randomized instances and the selftest battery

/// Knobs for randomized test instances. All numeric parameters are drawn
/// from dyadic grids (multiples of 1/16 or coarser), so derived quantities
/// round-trip exactly through doubles and sums of profits are exact.
struct GeneratorOptions {
  int max_groups = 4;
  int max_group_size = 4;
  int min_items = 2;
  int max_items = 16;
  bool allow_uniform = true;
  bool allow_mirrored = true;
  bool allow_explicit = true;
  bool positive_profits = false;
};

InstanceSpec random_instance_spec(Rng& rng, const GeneratorOptions& options);

/// Quick invariant battery over randomized instances; prints one line per
/// check to `out` and returns true iff all pass.
bool selftest(std::uint64_t seed, std::ostream& out);

// ---------------------------------------------------------------------------
// Misc

std::string algorithm_name(AlgorithmKind kind);
AlgorithmKind parse_algorithm(const std::string& name);
std::string scaling_model_name(ScalingModel model);
BudgetRule parse_budget_rule(const std::string& text);

/// CCKP_WORKERS environment variable, else hardware concurrency.
int default_worker_count();

/// Runs fn(0..count-1) on `workers` threads; any exception is rethrown.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace cckp

#endif  // CCKP_HARNESS_HPP
