#include "cckp/analysis.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace cckp {

namespace {

using Rational = boost::multiprecision::cpp_rational;

void check_level_range(const ProblemInstance& inst, int level,
                       const char* what) {
  if (level < 0 || level > inst.num_items()) {
    std::ostringstream msg;
    msg << what << ": level " << level << " outside [0, " << inst.num_items()
        << "]";
    throw std::domain_error(msg.str());
  }
}

// Exact fitness for the enumeration's rational comparison mode. All doubles
// convert to rationals exactly, so two candidates compare the way real
// arithmetic would.
struct ExactEvaluator {
  Rational a, d, c, budget, tolerance;
  std::vector<Rational> profits;

  explicit ExactEvaluator(const ProblemInstance& inst)
      : a(inst.item_expected_weight()),
        d(inst.item_variance()),
        c(inst.pair_covariance()),
        budget(inst.budget()),
        tolerance(inst.tolerance()) {
    profits.reserve(inst.num_items());
    for (int i = 0; i < inst.num_items(); ++i)
      profits.emplace_back(inst.profit(i));
  }

  std::pair<Rational, Rational> fitness(int ones, std::int64_t pair_sum,
                                        const Rational& profit) const {
    const Rational mean = a * ones;
    Rational beta;
    if (mean < budget) {
      const Rational var = d * ones + c * pair_sum;
      const Rational slack = budget - mean;
      beta = var / (var + slack * slack);
    } else {
      beta = 1 + mean - budget;
    }
    const Rational p = beta <= tolerance ? profit : Rational(-1);
    return {p, beta};
  }

  // Lexicographic: larger profit first, then smaller beta.
  static std::weak_ordering compare(const std::pair<Rational, Rational>& x,
                                    const std::pair<Rational, Rational>& y) {
    if (x.first != y.first)
      return x.first < y.first ? std::weak_ordering::less
                               : std::weak_ordering::greater;
    if (x.second == y.second) return std::weak_ordering::equivalent;
    return x.second < y.second ? std::weak_ordering::greater
                               : std::weak_ordering::less;
  }
};

}  // namespace

double balanced_covariance(const ProblemInstance& inst, int level) {
  check_level_range(inst, level, "balanced_covariance");
  const std::int64_t groups = inst.groups();
  const std::int64_t base = level / groups;
  const std::int64_t extra_groups = level - base * groups;
  const std::int64_t pair_sum = (groups - extra_groups) * base * (base - 1) +
                                extra_groups * (base + 1) * base;
  return inst.pair_covariance() * static_cast<double>(pair_sum);
}

double most_unbalanced_covariance(const ProblemInstance& inst, int level) {
  check_level_range(inst, level, "most_unbalanced_covariance");
  const std::int64_t size = inst.group_size();
  const std::int64_t full = level / size;
  const std::int64_t rest = level - full * size;
  const std::int64_t pair_sum = full * size * (size - 1) + rest * (rest - 1);
  return inst.pair_covariance() * static_cast<double>(pair_sum);
}

double feasible_covariance_bound(const ProblemInstance& inst, int level) {
  check_level_range(inst, level, "feasible_covariance_bound");
  const double mean = inst.item_expected_weight() * level;
  if (mean >= inst.budget())
    throw std::domain_error(
        "feasible_covariance_bound requires expected weight below budget");
  const double slack = inst.budget() - mean;
  const double alpha = inst.tolerance();
  return slack * slack * alpha / (1.0 - alpha) -
         level * inst.item_variance();
}

std::vector<LevelSummary> level_summaries(const ProblemInstance& inst) {
  std::vector<LevelSummary> levels;
  levels.reserve(inst.num_items() + 1);
  for (int level = 0; level <= inst.num_items(); ++level) {
    LevelSummary summary;
    summary.level = level;
    summary.balanced_covariance = balanced_covariance(inst, level);
    summary.most_unbalanced_covariance =
        most_unbalanced_covariance(inst, level);
    const double mean = inst.item_expected_weight() * level;
    if (mean < inst.budget()) {
      summary.feasible_covariance_bound = feasible_covariance_bound(inst, level);
      summary.level_feasible = approx_leq(summary.balanced_covariance,
                                          *summary.feasible_covariance_bound);
    }
    levels.push_back(summary);
  }
  return levels;
}

int max_feasible_level(const ProblemInstance& inst) {
  int best = 0;
  for (const auto& summary : level_summaries(inst))
    if (summary.level_feasible) best = summary.level;
  return best;
}

Solution balanced_solution(const ProblemInstance& inst, int level) {
  check_level_range(inst, level, "balanced_solution");
  const int groups = inst.groups();
  const int base = level / groups;
  const int extra_groups = level - base * groups;
  Solution x = Solution::empty(inst);
  for (int g = 0; g < groups; ++g) {
    const int take = base + (g < extra_groups ? 1 : 0);
    // Highest-profit positions first; ties broken by position.
    std::vector<int> order(inst.group_size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
      return inst.profit(g, lhs) > inst.profit(g, rhs);
    });
    for (int k = 0; k < take; ++k)
      x.flip(inst, g * inst.group_size() + order[k]);
  }
  return x;
}

LevelMembership classify_level_member(const ProblemInstance& inst,
                                      const Solution& x) {
  if (!is_surrogate_feasible(inst, x)) return LevelMembership::infeasible;
  Solution probe = x;
  for (int i = 0; i < inst.num_items(); ++i) {
    if (probe.bit(i)) continue;
    probe.flip(inst, i);
    const bool extendable = is_surrogate_feasible(inst, probe);
    probe.flip(inst, i);
    if (extendable) return LevelMembership::extendable;
  }
  return LevelMembership::saturated;
}

OracleResult brute_force_optimum(const ProblemInstance& inst,
                                 const OracleOptions& options) {
  constexpr int kMaxItems = 24;
  const int n = inst.num_items();
  if (n > kMaxItems) {
    std::ostringstream msg;
    msg << "brute_force_optimum guard: n = " << n << " exceeds " << kMaxItems;
    throw std::length_error(msg.str());
  }

  OracleResult result;
  result.per_level = level_summaries(inst);

  Solution x = Solution::empty(inst);
  std::optional<ExactEvaluator> exact;
  Rational exact_profit = 0;
  std::pair<Rational, Rational> best_exact;
  if (options.exact_compare) exact.emplace(inst);

  FitnessValue best = fitness_of(inst, x);
  if (exact) best_exact = exact->fitness(0, 0, exact_profit);
  result.optimum_solutions.push_back(x);
  result.max_feasible_level = 0;  // the empty solution is feasible for B > 0

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    // Gray-code walk: consecutive subsets differ in exactly bit ctz(i).
    const int flipped = std::countr_zero(i);
    x.flip(inst, flipped);
    if (exact) {
      if (x.bit(flipped))
        exact_profit += exact->profits[flipped];
      else
        exact_profit -= exact->profits[flipped];
    }

    const FitnessValue fitness = fitness_of(inst, x);
    std::weak_ordering order = std::weak_ordering::equivalent;
    bool feasible = false;
    if (exact) {
      const auto candidate =
          exact->fitness(x.ones(), x.pair_sum(), exact_profit);
      feasible = candidate.second <= exact->tolerance;
      order = ExactEvaluator::compare(candidate, best_exact);
      if (order == std::weak_ordering::greater) best_exact = candidate;
    } else {
      feasible = is_surrogate_feasible(inst, x);
      order = compare(fitness, best);
    }
    if (order == std::weak_ordering::greater) {
      best = fitness;
      result.optimum_solutions.clear();
      result.optimum_solutions.push_back(x);
    } else if (order == std::weak_ordering::equivalent) {
      result.optimum_solutions.push_back(x);
    }
    if (feasible && x.ones() > result.max_feasible_level)
      result.max_feasible_level = x.ones();
  }

  result.optimum_fitness = fitness_of(inst, result.optimum_solutions.front());
  return result;
}

std::vector<double> profit_profile(const ProblemInstance& inst,
                                   const Solution& x) {
  std::vector<double> profile;
  profile.reserve(x.ones());
  for (int i = 0; i < inst.num_items(); ++i)
    if (x.bit(i)) profile.push_back(inst.profit(i));
  std::sort(profile.begin(), profile.end(), std::greater<>());
  return profile;
}

std::vector<double> sorted_profits(const ProblemInstance& inst) {
  std::vector<double> all = inst.profits();
  std::sort(all.begin(), all.end(), std::greater<>());
  return all;
}

bool profile_contains(const std::vector<double>& profile, int j,
                      const ProblemInstance& inst) {
  if (j < 0 || j > inst.num_items())
    throw std::invalid_argument("profile_contains: j outside [0, n]");
  if (j == 0) return true;
  if (j > static_cast<int>(profile.size())) return false;
  const auto tops = sorted_profits(inst);
  // Greedy multiset inclusion over descending lists.
  std::size_t pos = 0;
  for (int k = 0; k < j; ++k) {
    while (pos < profile.size() && profile[pos] > tops[k]) ++pos;
    if (pos == profile.size() || profile[pos] != tops[k]) return false;
    ++pos;
  }
  return true;
}

int max_contained_prefix(const std::vector<double>& profile,
                         const ProblemInstance& inst) {
  const auto tops = sorted_profits(inst);
  // A profile drawn from the instance satisfies profile[k] <= tops[k], so
  // containment of the top-j multiset is equivalent to an exact prefix match.
  int j = 0;
  while (j < static_cast<int>(profile.size()) && profile[j] == tops[j]) ++j;
  return j;
}

}  // namespace cckp
