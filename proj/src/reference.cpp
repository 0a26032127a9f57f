#include "cckp/reference.hpp"

#include <cmath>

namespace cckp::reference {

double quadratic_form_variance(const ProblemInstance& inst,
                               const std::vector<std::uint8_t>& bits) {
  const int n = inst.num_items();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!bits[i]) continue;
    for (int j = 0; j < n; ++j) {
      if (!bits[j]) continue;
      if (i == j)
        total += inst.item_variance();
      else if (inst.group_of(i) == inst.group_of(j))
        total += inst.pair_covariance();
    }
  }
  return total;
}

double pairwise_covariance(const ProblemInstance& inst,
                           const std::vector<std::uint8_t>& bits) {
  const int m = inst.group_size();
  double total = 0.0;
  for (int g = 0; g < inst.groups(); ++g) {
    for (int j1 = 0; j1 < m; ++j1) {
      for (int j2 = j1 + 1; j2 < m; ++j2) {
        if (bits[g * m + j1] && bits[g * m + j2])
          total += 2.0 * inst.pair_covariance();
      }
    }
  }
  return total;
}

double profit_sum(const ProblemInstance& inst,
                  const std::vector<std::uint8_t>& bits) {
  double total = 0.0;
  for (int i = 0; i < inst.num_items(); ++i)
    if (bits[i]) total += inst.profit(i);
  return total;
}

FitnessValue fitness_from_bits(const ProblemInstance& inst,
                               const std::vector<std::uint8_t>& bits) {
  int ones = 0;
  for (auto b : bits) ones += b ? 1 : 0;
  const double mean = inst.item_expected_weight() * ones;
  double beta;
  if (mean < inst.budget()) {
    const double var =
        inst.item_variance() * ones + pairwise_covariance(inst, bits);
    const double slack = inst.budget() - mean;
    beta = var / (var + slack * slack);
  } else {
    beta = 1.0 + mean - inst.budget();
  }
  const double profit =
      approx_leq(beta, inst.tolerance()) ? profit_sum(inst, bits) : -1.0;
  return FitnessValue{profit, beta};
}

bool caches_consistent(const ProblemInstance& inst, const Solution& x) {
  if (!x.shape_matches(inst)) return false;
  int ones = 0;
  std::int64_t pair_sum = 0;
  std::vector<int> counts(inst.groups(), 0);
  for (int i = 0; i < inst.num_items(); ++i)
    if (x.bit(i)) {
      ++ones;
      ++counts[inst.group_of(i)];
    }
  for (int r : counts) pair_sum += static_cast<std::int64_t>(r) * (r - 1);
  if (ones != x.ones() || pair_sum != x.pair_sum() ||
      counts != x.group_counts())
    return false;
  const double profit = profit_sum(inst, x.bits());
  return std::fabs(profit - x.profit_sum()) <=
         1e-9 * std::max(1.0, std::fabs(profit));
}

}  // namespace cckp::reference
