#ifndef CCKP_MODEL_HPP
#define CCKP_MODEL_HPP

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cckp {

/// Exception carrying every field violation found during validation.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Knapsack instance with correlated uniform weights.
///
/// n = groups * group_size items, laid out row-major: item (i, j) is the
/// j-th item of group i at flat index i * group_size + j. All items share
/// expected weight `a` and variance `d`; weights of two distinct items in
/// the same group have covariance `c`, items in different groups are
/// uncorrelated. A solution must violate the capacity `budget` only with
/// probability at most `tolerance`.
class ProblemInstance {
 public:
  /// Validates all field constraints; throws ValidationError listing every
  /// violated one. `profits` is row-major with groups * group_size entries.
  ProblemInstance(int groups, int group_size, double expected_weight,
                  double variance, double covariance, double budget,
                  double tolerance, std::vector<double> profits);

  int groups() const { return groups_; }
  int group_size() const { return group_size_; }
  int num_items() const { return groups_ * group_size_; }
  double item_expected_weight() const { return expected_weight_; }
  double item_variance() const { return variance_; }
  double pair_covariance() const { return covariance_; }
  double budget() const { return budget_; }
  double tolerance() const { return tolerance_; }

  double profit(int group, int pos) const {
    return profits_[static_cast<std::size_t>(group) * group_size_ + pos];
  }
  double profit(int flat_index) const { return profits_[flat_index]; }
  const std::vector<double>& profits() const { return profits_; }
  double max_profit() const { return max_profit_; }

  int group_of(int flat_index) const { return flat_index / group_size_; }

 private:
  int groups_;
  int group_size_;
  double expected_weight_;
  double variance_;
  double covariance_;
  double budget_;
  double tolerance_;
  std::vector<double> profits_;
  double max_profit_;
};

/// Bit vector over the items of one instance, with caches that make a
/// fitness evaluation O(1): the number of selected items, per-group
/// selection counts, the integer pair sum  sum_i r_i (r_i - 1)  (so the
/// solution covariance is c * pair_sum), and the selected profit total.
/// Single-bit flips maintain all caches in O(1).
class Solution {
 public:
  Solution() = default;
  static Solution empty(const ProblemInstance& inst);
  static Solution all_ones(const ProblemInstance& inst);
  static Solution from_bits(const ProblemInstance& inst,
                            const std::vector<std::uint8_t>& bits);

  bool bit(int index) const { return bits_[index] != 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  int num_items() const { return static_cast<int>(bits_.size()); }
  int ones() const { return ones_; }
  const std::vector<int>& group_counts() const { return group_counts_; }
  std::int64_t pair_sum() const { return pair_sum_; }
  double profit_sum() const { return profit_sum_; }

  /// Toggles one bit and updates all caches.
  void flip(const ProblemInstance& inst, int index);

  /// Applies a batch of flips; returns the profit cache value from before
  /// so revert_flips can restore the solution bit-exactly.
  double apply_flips(const ProblemInstance& inst,
                     const std::vector<int>& indices);

  /// Undoes a prior apply_flips with the same index list. The integer
  /// caches revert through the inverse flips; the profit cache is restored
  /// from the saved value to avoid floating-point round-trip drift.
  void revert_flips(const ProblemInstance& inst,
                    const std::vector<int>& indices,
                    double saved_profit_sum);

  bool shape_matches(const ProblemInstance& inst) const;

  /// Compact 0/1 string in flat index order, for diagnostics.
  std::string to_string() const;

  bool operator==(const Solution& other) const { return bits_ == other.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
  std::vector<int> group_counts_;
  int group_size_ = 0;
  int ones_ = 0;
  std::int64_t pair_sum_ = 0;
  double profit_sum_ = 0.0;
};

/// Lexicographic fitness pair. `profit` is -1 exactly when the solution's
/// penalized constraint value exceeds the tolerance; otherwise it is the
/// selected profit total. Larger profit wins; on equal profit the smaller
/// `beta` wins.
struct FitnessValue {
  double profit = 0.0;
  double beta = 0.0;
};

/// Relative tolerance for treating two beta values as tied. Guards against
/// accept/reject flips between algebraically equal values computed along
/// different floating-point paths.
inline constexpr double kBetaTieTolerance = 1e-12;

/// True when |x - y| <= kBetaTieTolerance * max(1, |x|, |y|).
bool nearly_equal(double x, double y);

/// x <= y, treating nearly_equal values as equal.
bool approx_leq(double x, double y);

/// Total preorder on fitness values: profit compared exactly, beta with the
/// tie tolerance. greater = strictly better.
std::weak_ordering compare(const FitnessValue& a, const FitnessValue& b);

/// Selection predicate of both algorithms: a is at least as good as b.
bool at_least_as_good(const FitnessValue& a, const FitnessValue& b);

/// E[W(x)] = a * |x|_1.
double expected_weight(const ProblemInstance& inst, const Solution& x);

/// Covariance contribution c * sum_i r_i (r_i - 1) of the selected set.
double covariance_term(const ProblemInstance& inst, const Solution& x);

/// Var[W(x)] = d * |x|_1 + covariance_term.
double weight_variance(const ProblemInstance& inst, const Solution& x);

/// One-sided Chebyshev bound Var / (Var + (B - E)^2) on the violation
/// probability. Defined only for E[W(x)] < B; throws std::domain_error
/// otherwise (penalized_beta is the total wrapper).
double chebyshev_surrogate(const ProblemInstance& inst, const Solution& x);

/// chebyshev_surrogate when E[W(x)] < B, else the penalty 1 + E[W(x)] - B.
double penalized_beta(const ProblemInstance& inst, const Solution& x);

/// Selected profit total, or -1 when penalized_beta exceeds the tolerance.
double penalized_profit(const ProblemInstance& inst, const Solution& x);

/// True iff penalized_beta(inst, x) <= tolerance (ties count as feasible).
bool is_surrogate_feasible(const ProblemInstance& inst, const Solution& x);

FitnessValue fitness_of(const ProblemInstance& inst, const Solution& x);

}  // namespace cckp

#endif  // CCKP_MODEL_HPP
