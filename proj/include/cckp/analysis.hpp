#ifndef CCKP_ANALYSIS_HPP
#define CCKP_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "cckp/model.hpp"

namespace cckp {

/// Closed-form analytics for one level (number of selected items).
struct LevelSummary {
  int level = 0;
  /// Covariance of a balanced solution: group counts differ by at most one.
  double balanced_covariance = 0.0;
  /// Covariance of the most unbalanced solution: full groups plus remainder.
  double most_unbalanced_covariance = 0.0;
  /// (B - a*level)^2 * alpha / (1 - alpha) - level * d; absent when the
  /// expected weight already reaches the budget.
  std::optional<double> feasible_covariance_bound;
  /// True iff some solution with this many items is surrogate-feasible.
  bool level_feasible = false;
};

/// Membership of a feasible solution within its level: solutions with no
/// feasible single-item addition versus those with at least one.
enum class LevelMembership { saturated, extendable, infeasible };

/// Result of exhaustive enumeration.
struct OracleResult {
  FitnessValue optimum_fitness;
  std::vector<Solution> optimum_solutions;
  /// Largest number of ones over enumerated surrogate-feasible solutions.
  int max_feasible_level = 0;
  std::vector<LevelSummary> per_level;
};

struct OracleOptions {
  /// Compare fitness values in exact rational arithmetic instead of
  /// floating point (inputs converted exactly from their double values).
  bool exact_compare = false;
};

/// Covariance c * sum r_i (r_i - 1) of a balanced solution with `level`
/// ones: floor(level/K) items in each group, plus one extra item in
/// (level mod K) groups. Throws std::domain_error when level is outside
/// [0, n] (no such distribution fits the group capacity).
double balanced_covariance(const ProblemInstance& inst, int level);

/// Covariance of the most unbalanced solution with `level` ones:
/// floor(level/m) full groups and the remainder in one further group.
double most_unbalanced_covariance(const ProblemInstance& inst, int level);

/// Upper bound on the covariance of any surrogate-feasible solution with
/// `level` ones. Requires a * level < B; throws std::domain_error otherwise.
double feasible_covariance_bound(const ProblemInstance& inst, int level);

/// Summaries for every level 0..n.
std::vector<LevelSummary> level_summaries(const ProblemInstance& inst);

/// Largest level with a surrogate-feasible solution, from the closed form
/// (the balanced solution witnesses level feasibility).
int max_feasible_level(const ProblemInstance& inst);

/// A balanced solution with `level` ones that selects, within each group,
/// the positions with the largest profits. Extra items go to the first
/// (level mod K) groups.
Solution balanced_solution(const ProblemInstance& inst, int level);

LevelMembership classify_level_member(const ProblemInstance& inst,
                                      const Solution& x);

/// Enumerates all 2^n bit vectors (guard: n <= 24, throws std::length_error
/// beyond) and returns the lexicographic optimum, all maximizers, the
/// maximal feasible level, and per-level summaries.
OracleResult brute_force_optimum(const ProblemInstance& inst,
                                 const OracleOptions& options = {});

/// Multiset of selected profit values, sorted descending.
std::vector<double> profit_profile(const ProblemInstance& inst,
                                   const Solution& x);

/// All n profit values of the instance, sorted descending.
std::vector<double> sorted_profits(const ProblemInstance& inst);

/// True iff `profile` (descending) contains the j largest profit values of
/// the instance with multiplicity.
bool profile_contains(const std::vector<double>& profile, int j,
                      const ProblemInstance& inst);

/// Largest j such that the profile contains the top-j profits.
int max_contained_prefix(const std::vector<double>& profile,
                         const ProblemInstance& inst);

}  // namespace cckp

#endif  // CCKP_ANALYSIS_HPP
