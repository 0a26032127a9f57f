#ifndef CCKP_TESTS_SUPPORT_UTIL_HPP
#define CCKP_TESTS_SUPPORT_UTIL_HPP

#include <initializer_list>
#include <vector>

#include "cckp/harness.hpp"
#include "cckp/model.hpp"

namespace cckp::test {

inline ProblemInstance make_uniform(int groups, int group_size, double a,
                                    double d, double c, double budget,
                                    double tolerance) {
  return ProblemInstance(
      groups, group_size, a, d, c, budget, tolerance,
      std::vector<double>(static_cast<std::size_t>(groups) * group_size, 1.0));
}

/// Solution selecting the given flat indices.
inline Solution select(const ProblemInstance& inst,
                       std::initializer_list<int> indices) {
  Solution x = Solution::empty(inst);
  for (int index : indices) x.flip(inst, index);
  return x;
}

inline Solution random_solution(const ProblemInstance& inst, Rng& rng) {
  Solution x = Solution::empty(inst);
  for (int i = 0; i < inst.num_items(); ++i)
    if (rng.uniform_index(2) == 1) x.flip(inst, i);
  return x;
}

inline ProblemInstance random_instance(Rng& rng,
                                       const GeneratorOptions& options) {
  return generate_instance(random_instance_spec(rng, options));
}

}  // namespace cckp::test

#endif  // CCKP_TESTS_SUPPORT_UTIL_HPP
