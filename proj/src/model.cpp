#include "cckp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cckp {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::ostringstream out;
  out << "invalid instance (" << issues.size() << " issue(s)):";
  for (const auto& issue : issues) out << "\n  - " << issue;
  return out.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::invalid_argument(join_issues(issues)), issues_(std::move(issues)) {}

ProblemInstance::ProblemInstance(int groups, int group_size,
                                 double expected_weight, double variance,
                                 double covariance, double budget,
                                 double tolerance, std::vector<double> profits)
    : groups_(groups),
      group_size_(group_size),
      expected_weight_(expected_weight),
      variance_(variance),
      covariance_(covariance),
      budget_(budget),
      tolerance_(tolerance),
      profits_(std::move(profits)),
      max_profit_(0.0) {
  std::vector<std::string> issues;
  if (groups_ < 1) issues.push_back("groups must be >= 1");
  if (group_size_ < 1) issues.push_back("group_size must be >= 1");
  if (!(expected_weight_ > 0.0) || !std::isfinite(expected_weight_))
    issues.push_back("expected_weight must be finite and > 0");
  if (!(variance_ > 0.0) || !std::isfinite(variance_))
    issues.push_back("variance must be finite and > 0");
  if (!(covariance_ > 0.0) || !std::isfinite(covariance_))
    issues.push_back("covariance must be finite and > 0");
  if (!(budget_ > 0.0) || !std::isfinite(budget_))
    issues.push_back("budget must be finite and > 0");
  if (!(tolerance_ > 0.0 && tolerance_ < 1.0))
    issues.push_back("tolerance must lie in (0, 1)");
  if (groups_ >= 1 && group_size_ >= 1) {
    const auto expected = static_cast<std::size_t>(groups_) * group_size_;
    if (profits_.size() != expected) {
      std::ostringstream msg;
      msg << "profits must have exactly " << expected << " entries, got "
          << profits_.size();
      issues.push_back(msg.str());
    }
  }
  for (std::size_t i = 0; i < profits_.size(); ++i) {
    if (!(profits_[i] >= 0.0) || !std::isfinite(profits_[i])) {
      std::ostringstream msg;
      msg << "profit entry " << i << " must be finite and >= 0";
      issues.push_back(msg.str());
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  max_profit_ = *std::max_element(profits_.begin(), profits_.end());
}

Solution Solution::empty(const ProblemInstance& inst) {
  Solution s;
  s.bits_.assign(inst.num_items(), 0);
  s.group_counts_.assign(inst.groups(), 0);
  s.group_size_ = inst.group_size();
  return s;
}

Solution Solution::all_ones(const ProblemInstance& inst) {
  Solution s = empty(inst);
  for (int i = 0; i < inst.num_items(); ++i) s.flip(inst, i);
  return s;
}

Solution Solution::from_bits(const ProblemInstance& inst,
                             const std::vector<std::uint8_t>& bits) {
  if (static_cast<int>(bits.size()) != inst.num_items())
    throw std::invalid_argument("bit vector length does not match instance");
  Solution s = empty(inst);
  for (int i = 0; i < inst.num_items(); ++i)
    if (bits[i]) s.flip(inst, i);
  return s;
}

void Solution::flip(const ProblemInstance& inst, int index) {
  const int group = index / group_size_;
  int& count = group_counts_[group];
  if (bits_[index]) {
    bits_[index] = 0;
    // r -> r-1 removes r-1 ordered pairs on each side of the diagonal.
    pair_sum_ -= 2 * static_cast<std::int64_t>(count - 1);
    --count;
    --ones_;
    profit_sum_ -= inst.profit(index);
  } else {
    bits_[index] = 1;
    pair_sum_ += 2 * static_cast<std::int64_t>(count);
    ++count;
    ++ones_;
    profit_sum_ += inst.profit(index);
  }
}

double Solution::apply_flips(const ProblemInstance& inst,
                             const std::vector<int>& indices) {
  const double saved = profit_sum_;
  for (int index : indices) flip(inst, index);
  return saved;
}

void Solution::revert_flips(const ProblemInstance& inst,
                            const std::vector<int>& indices,
                            double saved_profit_sum) {
  for (int index : indices) flip(inst, index);
  profit_sum_ = saved_profit_sum;
}

bool Solution::shape_matches(const ProblemInstance& inst) const {
  return static_cast<int>(bits_.size()) == inst.num_items() &&
         group_size_ == inst.group_size();
}

std::string Solution::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_) out.push_back(b ? '1' : '0');
  return out;
}

bool nearly_equal(double x, double y) {
  const double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
  return std::fabs(x - y) <= kBetaTieTolerance * scale;
}

bool approx_leq(double x, double y) { return x <= y || nearly_equal(x, y); }

std::weak_ordering compare(const FitnessValue& a, const FitnessValue& b) {
  if (a.profit < b.profit) return std::weak_ordering::less;
  if (a.profit > b.profit) return std::weak_ordering::greater;
  if (nearly_equal(a.beta, b.beta)) return std::weak_ordering::equivalent;
  return a.beta < b.beta ? std::weak_ordering::greater
                         : std::weak_ordering::less;
}

bool at_least_as_good(const FitnessValue& a, const FitnessValue& b) {
  return compare(a, b) != std::weak_ordering::less;
}

double expected_weight(const ProblemInstance& inst, const Solution& x) {
  return inst.item_expected_weight() * x.ones();
}

double covariance_term(const ProblemInstance& inst, const Solution& x) {
  return inst.pair_covariance() * static_cast<double>(x.pair_sum());
}

double weight_variance(const ProblemInstance& inst, const Solution& x) {
  return inst.item_variance() * x.ones() + covariance_term(inst, x);
}

double chebyshev_surrogate(const ProblemInstance& inst, const Solution& x) {
  const double mean = expected_weight(inst, x);
  if (mean >= inst.budget())
    throw std::domain_error(
        "chebyshev_surrogate undefined for expected weight >= budget");
  const double var = weight_variance(inst, x);
  const double slack = inst.budget() - mean;
  return var / (var + slack * slack);
}

double penalized_beta(const ProblemInstance& inst, const Solution& x) {
  const double mean = expected_weight(inst, x);
  if (mean < inst.budget()) {
    const double var = weight_variance(inst, x);
    const double slack = inst.budget() - mean;
    return var / (var + slack * slack);
  }
  return 1.0 + mean - inst.budget();
}

double penalized_profit(const ProblemInstance& inst, const Solution& x) {
  if (!is_surrogate_feasible(inst, x)) return -1.0;
  return x.profit_sum();
}

bool is_surrogate_feasible(const ProblemInstance& inst, const Solution& x) {
  return approx_leq(penalized_beta(inst, x), inst.tolerance());
}

FitnessValue fitness_of(const ProblemInstance& inst, const Solution& x) {
  const double beta = penalized_beta(inst, x);
  const double profit = approx_leq(beta, inst.tolerance()) ? x.profit_sum()
                                                           : -1.0;
  return FitnessValue{profit, beta};
}

}  // namespace cckp
