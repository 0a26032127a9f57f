#ifndef CCKP_REFERENCE_HPP
#define CCKP_REFERENCE_HPP

#include <cstdint>
#include <vector>

#include "cckp/model.hpp"

namespace cckp::reference {

// Deliberately naive recomputations, independent of the cached closed forms
// in the model. They exist to be checked against, not to be fast.

/// Var[W(x)] as the quadratic form x^T S x over the explicit n x n
/// covariance matrix (d on the diagonal, c inside group blocks, 0 across).
double quadratic_form_variance(const ProblemInstance& inst,
                               const std::vector<std::uint8_t>& bits);

/// 2c * (number of selected same-group pairs), by pair enumeration.
double pairwise_covariance(const ProblemInstance& inst,
                           const std::vector<std::uint8_t>& bits);

/// Selected profit total by direct summation.
double profit_sum(const ProblemInstance& inst,
                  const std::vector<std::uint8_t>& bits);

/// Fitness recomputed from raw bits, bypassing Solution caches.
FitnessValue fitness_from_bits(const ProblemInstance& inst,
                               const std::vector<std::uint8_t>& bits);

/// True when a Solution's caches agree with its bits.
bool caches_consistent(const ProblemInstance& inst, const Solution& x);

}  // namespace cckp::reference

#endif  // CCKP_REFERENCE_HPP
