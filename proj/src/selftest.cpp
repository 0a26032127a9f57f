#include <bit>
#include <cmath>
#include <ostream>
#include <sstream>

#include "cckp/harness.hpp"
#include "cckp/reference.hpp"

namespace cckp {

namespace {

struct CheckRunner {
  std::ostream& out;
  bool all_ok = true;

  void report(const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "[ ok ] " : "[FAIL] ") << name;
    if (!ok && !detail.empty()) out << ": " << detail;
    out << "\n";
    all_ok = all_ok && ok;
  }
};

Solution random_solution(const ProblemInstance& inst, Rng& rng) {
  Solution x = Solution::empty(inst);
  for (int i = 0; i < inst.num_items(); ++i)
    if (rng.uniform_index(2) == 1) x.flip(inst, i);
  return x;
}

bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::string check_moments(Rng rng) {
  GeneratorOptions options;
  for (int trial = 0; trial < 100; ++trial) {
    const ProblemInstance inst =
        generate_instance(random_instance_spec(rng, options));
    for (int draw = 0; draw < 50; ++draw) {
      const Solution x = random_solution(inst, rng);
      const double closed = weight_variance(inst, x);
      const double oracle = reference::quadratic_form_variance(inst, x.bits());
      if (!rel_close(closed, oracle, 1e-12))
        return "variance mismatch on " + x.to_string();
      const double cov = covariance_term(inst, x);
      const double cov_oracle = reference::pairwise_covariance(inst, x.bits());
      if (!rel_close(cov, cov_oracle, 1e-12))
        return "covariance mismatch on " + x.to_string();
    }
  }
  return {};
}

std::string check_bound_equivalence(Rng rng) {
  GeneratorOptions options;
  options.max_items = 12;
  for (int trial = 0; trial < 30; ++trial) {
    const ProblemInstance inst =
        generate_instance(random_instance_spec(rng, options));
    const int n = inst.num_items();
    Solution x = Solution::empty(inst);
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << n); ++i) {
      x.flip(inst, std::countr_zero(i));
      if (expected_weight(inst, x) >= inst.budget()) {
        if (is_surrogate_feasible(inst, x))
          return "penalty-branch solution reported feasible: " + x.to_string();
        continue;
      }
      const double bound = feasible_covariance_bound(inst, x.ones());
      const bool by_bound = approx_leq(covariance_term(inst, x), bound);
      if (by_bound != is_surrogate_feasible(inst, x))
        return "bound equivalence broken on " + x.to_string();
    }
  }
  return {};
}

std::string check_covariance_extremes(Rng rng) {
  GeneratorOptions options;
  options.max_items = 14;
  for (int trial = 0; trial < 20; ++trial) {
    const ProblemInstance inst =
        generate_instance(random_instance_spec(rng, options));
    const int n = inst.num_items();
    Solution x = Solution::empty(inst);
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << n); ++i) {
      x.flip(inst, std::countr_zero(i));
      const double cov = covariance_term(inst, x);
      if (!approx_leq(balanced_covariance(inst, x.ones()), cov) ||
          !approx_leq(cov, most_unbalanced_covariance(inst, x.ones())))
        return "covariance outside [balanced, most unbalanced] on " +
               x.to_string();
    }
  }
  return {};
}

std::string check_fitness_order(Rng rng) {
  const auto random_fitness = [&rng]() {
    const bool infeasible = rng.uniform_index(4) == 0;
    FitnessValue f;
    if (infeasible) {
      f.profit = -1.0;
      f.beta = 1.0 + static_cast<double>(rng.uniform_index(64)) / 8.0;
    } else {
      f.profit = static_cast<double>(rng.uniform_index(32)) / 4.0;
      f.beta = static_cast<double>(rng.uniform_index(256)) / 256.0;
    }
    return f;
  };
  for (int trial = 0; trial < 20000; ++trial) {
    const FitnessValue a = random_fitness();
    const FitnessValue b = random_fitness();
    const FitnessValue c = random_fitness();
    const auto ab = compare(a, b);
    const auto ba = compare(b, a);
    if ((ab == std::weak_ordering::less) != (ba == std::weak_ordering::greater))
      return "comparison not antisymmetric";
    if (compare(a, a) != std::weak_ordering::equivalent)
      return "comparison not reflexive";
    const auto bc = compare(b, c);
    if (ab != std::weak_ordering::less && bc != std::weak_ordering::less &&
        compare(a, c) == std::weak_ordering::less)
      return "comparison not transitive";
  }
  return {};
}

std::string check_monotone_additions(Rng rng) {
  GeneratorOptions options;
  for (int trial = 0; trial < 200; ++trial) {
    const ProblemInstance inst =
        generate_instance(random_instance_spec(rng, options));
    Solution x = random_solution(inst, rng);
    for (int i = 0; i < inst.num_items(); ++i) {
      if (x.bit(i)) continue;
      const double mean_before = expected_weight(inst, x);
      const double var_before = weight_variance(inst, x);
      const bool below =
          mean_before < inst.budget() &&
          inst.item_expected_weight() * (x.ones() + 1) < inst.budget();
      const double beta_before =
          below ? chebyshev_surrogate(inst, x) : 0.0;
      x.flip(inst, i);
      if (!(expected_weight(inst, x) > mean_before) ||
          !(weight_variance(inst, x) > var_before))
        return "moments did not strictly increase on item addition";
      if (below && !(chebyshev_surrogate(inst, x) > beta_before))
        return "surrogate did not strictly increase on item addition";
      x.flip(inst, i);
    }
  }
  return {};
}

std::string check_exchange_monotonicity(Rng rng) {
  GeneratorOptions options;
  options.max_groups = 6;
  options.max_group_size = 6;
  options.max_items = 24;
  for (int trial = 0; trial < 300; ++trial) {
    const ProblemInstance inst =
        generate_instance(random_instance_spec(rng, options));
    Solution x = random_solution(inst, rng);
    const auto& counts = x.group_counts();
    for (int big = 0; big < inst.groups(); ++big) {
      for (int small = 0; small < inst.groups(); ++small) {
        if (counts[small] >= counts[big] - 1) continue;
        int remove = -1, add = -1;
        for (int j = 0; j < inst.group_size(); ++j) {
          const int big_index = big * inst.group_size() + j;
          const int small_index = small * inst.group_size() + j;
          if (remove < 0 && x.bit(big_index)) remove = big_index;
          if (add < 0 && !x.bit(small_index)) add = small_index;
        }
        if (remove < 0 || add < 0) continue;
        const double before = covariance_term(inst, x);
        const int ones_before = x.ones();
        x.flip(inst, remove);
        x.flip(inst, add);
        const bool ok = covariance_term(inst, x) < before &&
                        x.ones() == ones_before;
        x.flip(inst, add);
        x.flip(inst, remove);
        if (!ok) return "rebalancing swap failed to reduce covariance";
      }
    }
  }
  return {};
}

std::string check_mutation_distributions(Rng rng) {
  const int n = 8;
  const int draws = 100000;
  int single = 0;
  for (int i = 0; i < draws; ++i)
    if (rls_flip_indices(n, rng).size() == 1) ++single;
  const double sigma = std::sqrt(draws * 0.25);
  if (std::fabs(single - draws * 0.5) > 3.0 * sigma) {
    std::ostringstream msg;
    msg << "RLS single-flip count " << single << " outside 3 sigma of "
        << draws / 2;
    return msg.str();
  }

  std::vector<int> per_bit(n, 0);
  long long total = 0;
  for (int i = 0; i < draws; ++i)
    for (int index : ea_flip_indices(n, rng)) {
      ++per_bit[index];
      ++total;
    }
  const double p = 1.0 / n;
  const double bit_sigma = std::sqrt(draws * p * (1 - p));
  for (int b = 0; b < n; ++b)
    if (std::fabs(per_bit[b] - draws * p) > 4.0 * bit_sigma) {
      std::ostringstream msg;
      msg << "EA bit " << b << " flip count " << per_bit[b]
          << " outside 4 sigma of " << draws * p;
      return msg.str();
    }
  const double total_sigma = std::sqrt(draws * n * p * (1 - p));
  if (std::fabs(total - draws) > 3.0 * total_sigma)
    return "EA total flip count off the one-per-offspring expectation";
  return {};
}

std::string check_runs(Rng rng) {
  GeneratorOptions options;
  options.max_items = 12;
  options.min_items = 4;
  for (int trial = 0; trial < 10; ++trial) {
    const ProblemInstance inst =
        generate_instance(random_instance_spec(rng, options));
    for (AlgorithmKind kind :
         {AlgorithmKind::rls, AlgorithmKind::one_plus_one_ea}) {
      AlgorithmConfig config;
      config.kind = kind;
      config.seed = rng.next_u64();
      config.max_evaluations = 4000;
      config.trajectory = TrajectoryMode::accepted;
      config.debug_checks = true;

      bool monotone = true;
      bool absorbed = true;
      bool was_feasible = false;
      std::optional<FitnessValue> last;
      const StepObserver observer = [&](const StepEvent& event) {
        if (!event.accepted) return;
        if (last && compare(event.current_fitness, *last) ==
                        std::weak_ordering::less)
          monotone = false;
        if (was_feasible && event.current_fitness.profit < 0.0)
          absorbed = false;
        was_feasible = was_feasible || event.current_fitness.profit >= 0.0;
        last = event.current_fitness;
      };

      const RunRecord first = run(inst, config, std::nullopt, observer);
      const RunRecord second = run(inst, config);
      if (!monotone) return "accepted fitness decreased along a trajectory";
      if (!absorbed) return "feasible trajectory re-entered infeasibility";
      if (!(second.final_solution == first.final_solution) ||
          second.evaluations != first.evaluations ||
          second.t_feasible != first.t_feasible)
        return "identical configs produced different runs";
      for (std::size_t i = 1; i < first.trajectory.size(); ++i)
        if (compare(first.trajectory[i].fitness,
                    first.trajectory[i - 1].fitness) ==
            std::weak_ordering::less)
          return "recorded trajectory not nondecreasing";
    }
  }
  return {};
}

std::string check_closed_form(Rng rng) {
  GeneratorOptions options;
  options.max_items = 12;
  options.allow_explicit = false;
  for (int trial = 0; trial < 25; ++trial) {
    const ProblemInstance inst =
        generate_instance(random_instance_spec(rng, options));
    const FitnessValue closed = closed_form_target(inst);
    const OracleResult oracle = brute_force_optimum(inst);
    if (closed.profit != oracle.optimum_fitness.profit ||
        closed.beta != oracle.optimum_fitness.beta)
      return "closed form disagrees with enumeration";
    if (oracle.max_feasible_level != max_feasible_level(inst))
      return "enumerated max feasible level disagrees with closed form";
    for (const LevelSummary& summary : oracle.per_level) {
      const bool enumerated_feasible =
          summary.level <= oracle.max_feasible_level;
      if (summary.level_feasible != enumerated_feasible)
        return "level feasibility flag disagrees with enumeration at level " +
               std::to_string(summary.level);
    }
  }
  return {};
}

}  // namespace

bool selftest(std::uint64_t seed, std::ostream& out) {
  CheckRunner runner{out};
  const auto check = [&](const char* name,
                         std::string (*fn)(Rng), std::uint64_t stream) {
    const std::string detail = fn(Rng::child(seed, stream));
    runner.report(name, detail.empty(), detail);
  };
  check("moment oracle agreement", check_moments, 1);
  check("feasibility bound equivalence", check_bound_equivalence, 2);
  check("covariance extremes per level", check_covariance_extremes, 3);
  check("fitness order totality", check_fitness_order, 4);
  check("strict growth under additions", check_monotone_additions, 5);
  check("rebalancing swaps reduce covariance", check_exchange_monotonicity, 6);
  check("mutation flip distributions", check_mutation_distributions, 7);
  check("run determinism and monotone selection", check_runs, 8);
  check("closed form matches enumeration", check_closed_form, 9);
  return runner.all_ok;
}

}  // namespace cckp
