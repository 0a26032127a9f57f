#include <bit>
#include <cmath>

#include "doctest.h"

#include "cckp/model.hpp"
#include "cckp/reference.hpp"
#include "cckp/rng.hpp"
#include "support/util.hpp"

using namespace cckp;
using test::make_uniform;
using test::select;

TEST_CASE("instance validation reports every violation at once") {
  std::vector<double> profits{1.0, -2.0};
  try {
    ProblemInstance bad(0, 2, -1.0, 0.0, 1.0, 2.0, 1.5, profits);
    FAIL("expected ValidationError");
  } catch (const ValidationError& err) {
    const auto& issues = err.issues();
    REQUIRE(issues.size() >= 4);
    const auto mentions = [&](const char* needle) {
      for (const auto& issue : issues)
        if (issue.find(needle) != std::string::npos) return true;
      return false;
    };
    CHECK(mentions("groups"));
    CHECK(mentions("expected_weight"));
    CHECK(mentions("variance"));
    CHECK(mentions("tolerance"));
    CHECK(mentions("profit entry 1"));
  }
}

TEST_CASE("expected weight counts selected items times a") {
  const auto inst = make_uniform(2, 3, 1.0, 1.0, 1.0, 4.0, 0.5);
  CHECK(expected_weight(inst, Solution::empty(inst)) == 0.0);
  CHECK(expected_weight(inst, select(inst, {0, 1, 3, 5})) == 4.0);

  const auto heavy = make_uniform(2, 3, 2.5, 1.0, 1.0, 100.0, 0.5);
  CHECK(expected_weight(heavy, select(heavy, {0, 2, 4})) == 7.5);
}

TEST_CASE("covariance term from group pair counts") {
  const auto spread = make_uniform(3, 2, 1.0, 1.0, 0.5, 10.0, 0.5);
  CHECK(covariance_term(spread, select(spread, {0, 2, 4})) == 0.0);

  const auto triple = make_uniform(2, 3, 1.0, 1.0, 0.5, 10.0, 0.5);
  // One group fully selected: 2c * C(3,2) = 3.
  CHECK(covariance_term(triple, select(triple, {0, 1, 2})) == 3.0);

  const auto pairs = make_uniform(2, 2, 1.0, 1.0, 1.0, 10.0, 0.5);
  CHECK(covariance_term(pairs, select(pairs, {0, 1, 2, 3})) == 4.0);
}

TEST_CASE("weight variance adds d per item") {
  const auto pair_group = make_uniform(1, 2, 1.0, 1.0, 0.5, 10.0, 0.5);
  CHECK(weight_variance(pair_group, Solution::empty(pair_group)) == 0.0);
  CHECK(weight_variance(pair_group, select(pair_group, {0, 1})) == 3.0);

  const auto spread = make_uniform(3, 2, 1.0, 1.0, 1.0, 10.0, 0.5);
  CHECK(weight_variance(spread, select(spread, {0, 2, 4})) == 3.0);
}

TEST_CASE("chebyshev surrogate values and domain") {
  const auto small = make_uniform(1, 2, 1.0, 1.0, 1.0, 3.0, 0.5);
  CHECK(chebyshev_surrogate(small, Solution::empty(small)) == 0.0);
  CHECK(chebyshev_surrogate(small, select(small, {0})) == 0.2);

  const auto grouped = make_uniform(2, 2, 1.0, 1.0, 1.0, 5.0, 0.5);
  CHECK(chebyshev_surrogate(grouped, select(grouped, {0, 1})) ==
        doctest::Approx(4.0 / 13.0).epsilon(1e-15));

  const auto tight = make_uniform(1, 4, 1.0, 1.0, 1.0, 3.0, 0.5);
  CHECK_THROWS_AS(chebyshev_surrogate(tight, select(tight, {0, 1, 2})),
                  std::domain_error);
}

TEST_CASE("penalized beta switches to the linear penalty at the budget") {
  const auto inst = make_uniform(1, 6, 1.0, 1.0, 1.0, 3.0, 0.5);
  CHECK(penalized_beta(inst, select(inst, {0, 1, 2, 3, 4})) == 3.0);
  CHECK(penalized_beta(inst, select(inst, {0})) == 0.2);
  CHECK(penalized_beta(inst, Solution::empty(inst)) == 0.0);
  // Expected weight equal to the budget takes the penalty branch: beta = 1.
  CHECK(penalized_beta(inst, select(inst, {0, 1, 2})) == 1.0);
  CHECK_FALSE(is_surrogate_feasible(inst, select(inst, {0, 1, 2})));
}

TEST_CASE("penalized profit and feasibility") {
  const auto inst = make_uniform(2, 3, 1.0, 1.0, 1.0, 8.0, 0.9);
  CHECK(penalized_profit(inst, select(inst, {0, 1, 3, 4})) == 4.0);
  CHECK(penalized_profit(inst, Solution::empty(inst)) == 0.0);

  const auto strict = make_uniform(2, 2, 1.0, 1.0, 1.0, 4.0, 0.2);
  const auto same_group = select(strict, {0, 1});
  CHECK(penalized_beta(strict, same_group) == 0.5);
  CHECK_FALSE(is_surrogate_feasible(strict, same_group));
  CHECK(penalized_profit(strict, same_group) == -1.0);

  // Penalty branch values exceed any tolerance below one.
  const auto tiny = make_uniform(1, 4, 1.0, 1.0, 1.0, 2.0, 0.99);
  CHECK_FALSE(is_surrogate_feasible(tiny, select(tiny, {0, 1, 2})));
}

TEST_CASE("beta equal to the tolerance counts as feasible") {
  const auto inst = make_uniform(1, 2, 1.0, 1.0, 1.0, 4.0, 0.5);
  const auto both = select(inst, {0, 1});
  CHECK(penalized_beta(inst, both) == 0.5);
  CHECK(is_surrogate_feasible(inst, both));
  CHECK(penalized_profit(inst, both) == 2.0);
}

TEST_CASE("fitness comparison is lexicographic") {
  CHECK(compare({5.0, 0.1}, {4.0, 0.01}) == std::weak_ordering::greater);
  CHECK(compare({5.0, 0.1}, {5.0, 0.2}) == std::weak_ordering::greater);
  CHECK(compare({-1.0, 3.0}, {-1.0, 2.0}) == std::weak_ordering::less);
  CHECK(compare({2.0, 0.25}, {2.0, 0.25}) == std::weak_ordering::equivalent);
  CHECK(at_least_as_good({2.0, 0.25}, {2.0, 0.25}));
  CHECK_FALSE(at_least_as_good({-1.0, 3.0}, {0.0, 0.0}));
}

TEST_CASE("near-tied beta values compare as equal") {
  const double beta = 0.25;
  const double nudged = beta * (1.0 + 1e-14);
  CHECK(compare({3.0, beta}, {3.0, nudged}) == std::weak_ordering::equivalent);
  CHECK(compare({3.0, beta}, {3.0, beta + 1e-6}) ==
        std::weak_ordering::greater);
}

TEST_CASE("profit scaling preserves comparisons of feasible solutions") {
  Rng rng(20240517);
  GeneratorOptions options;
  options.max_items = 12;
  int compared = 0;
  while (compared < 200) {
    const auto inst = test::random_instance(rng, options);
    const auto x = test::random_solution(inst, rng);
    const auto y = test::random_solution(inst, rng);
    if (!is_surrogate_feasible(inst, x) || !is_surrogate_feasible(inst, y))
      continue;
    const auto fx = fitness_of(inst, x);
    const auto fy = fitness_of(inst, y);
    if (fx.profit == fy.profit) continue;
    const auto base = compare(fx, fy);
    for (double lambda : {0.5, 3.0, 64.0}) {
      std::vector<double> scaled = inst.profits();
      for (double& p : scaled) p *= lambda;
      const ProblemInstance scaled_inst(
          inst.groups(), inst.group_size(), inst.item_expected_weight(),
          inst.item_variance(), inst.pair_covariance(), inst.budget(),
          inst.tolerance(), scaled);
      const auto sx = Solution::from_bits(scaled_inst, x.bits());
      const auto sy = Solution::from_bits(scaled_inst, y.bits());
      CHECK(compare(fitness_of(scaled_inst, sx), fitness_of(scaled_inst, sy)) ==
            base);
    }
    ++compared;
  }
}

TEST_CASE("moments agree with the quadratic-form oracle") {
  Rng rng(7);
  GeneratorOptions options;
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = test::random_instance(rng, options);
    for (int draw = 0; draw < 30; ++draw) {
      const auto x = test::random_solution(inst, rng);
      const double closed = weight_variance(inst, x);
      const double oracle = reference::quadratic_form_variance(inst, x.bits());
      CHECK(std::fabs(closed - oracle) <=
            1e-12 * std::max(1.0, std::fabs(oracle)));
      CHECK(covariance_term(inst, x) ==
            doctest::Approx(reference::pairwise_covariance(inst, x.bits()))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("adding an item strictly grows mean, variance, and surrogate") {
  Rng rng(11);
  GeneratorOptions options;
  options.max_items = 10;
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = test::random_instance(rng, options);
    auto x = test::random_solution(inst, rng);
    for (int i = 0; i < inst.num_items(); ++i) {
      if (x.bit(i)) continue;
      const double mean = expected_weight(inst, x);
      const double var = weight_variance(inst, x);
      const bool stays_below =
          inst.item_expected_weight() * (x.ones() + 1) < inst.budget();
      const double beta = stays_below ? chebyshev_surrogate(inst, x) : 0.0;
      x.flip(inst, i);
      CHECK(expected_weight(inst, x) > mean);
      CHECK(weight_variance(inst, x) > var);
      if (stays_below) CHECK(chebyshev_surrogate(inst, x) > beta);
      x.flip(inst, i);
    }
  }
}

TEST_CASE("swapping into a lighter group strictly reduces covariance") {
  Rng rng(13);
  GeneratorOptions options;
  options.max_groups = 5;
  options.max_group_size = 5;
  options.max_items = 25;
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = test::random_instance(rng, options);
    auto x = test::random_solution(inst, rng);
    for (int big = 0; big < inst.groups(); ++big) {
      for (int small = 0; small < inst.groups(); ++small) {
        if (x.group_counts()[small] >= x.group_counts()[big] - 1) continue;
        int remove = -1;
        int add = -1;
        for (int j = 0; j < inst.group_size(); ++j) {
          if (remove < 0 && x.bit(big * inst.group_size() + j))
            remove = big * inst.group_size() + j;
          if (add < 0 && !x.bit(small * inst.group_size() + j))
            add = small * inst.group_size() + j;
        }
        REQUIRE(remove >= 0);
        REQUIRE(add >= 0);
        const double before = covariance_term(inst, x);
        const int ones = x.ones();
        const double mean = expected_weight(inst, x);
        x.flip(inst, remove);
        x.flip(inst, add);
        CHECK(covariance_term(inst, x) < before);
        CHECK(x.ones() == ones);
        CHECK(expected_weight(inst, x) == mean);
        x.flip(inst, add);
        x.flip(inst, remove);
      }
    }
  }
}

TEST_CASE("feasibility matches the covariance bound on exhaustive solutions") {
  Rng rng(17);
  GeneratorOptions options;
  options.max_items = 10;
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = test::random_instance(rng, options);
    Solution x = Solution::empty(inst);
    const std::uint64_t total = std::uint64_t{1} << inst.num_items();
    for (std::uint64_t i = 1; i < total; ++i) {
      x.flip(inst, std::countr_zero(i));
      if (expected_weight(inst, x) >= inst.budget()) {
        CHECK_FALSE(is_surrogate_feasible(inst, x));
        continue;
      }
      const double bound = feasible_covariance_bound(inst, x.ones());
      CHECK(is_surrogate_feasible(inst, x) ==
            approx_leq(covariance_term(inst, x), bound));
    }
  }
}

TEST_CASE("fitness order is total and transitive on random triples") {
  Rng rng(19);
  const auto random_fitness = [&rng]() {
    FitnessValue f;
    if (rng.uniform_index(4) == 0) {
      f.profit = -1.0;
      f.beta = 1.0 + static_cast<double>(rng.uniform_index(40)) / 8.0;
    } else {
      f.profit = static_cast<double>(rng.uniform_index(24)) / 4.0;
      f.beta = static_cast<double>(rng.uniform_index(128)) / 128.0;
    }
    return f;
  };
  for (int trial = 0; trial < 50000; ++trial) {
    const auto a = random_fitness();
    const auto b = random_fitness();
    const auto c = random_fitness();
    const auto ab = compare(a, b);
    CHECK(compare(a, a) == std::weak_ordering::equivalent);
    CHECK((compare(b, a) == std::weak_ordering::less) ==
          (ab == std::weak_ordering::greater));
    if (ab != std::weak_ordering::less &&
        compare(b, c) != std::weak_ordering::less)
      CHECK(compare(a, c) != std::weak_ordering::less);
    if (ab == std::weak_ordering::equivalent &&
        compare(b, c) == std::weak_ordering::equivalent)
      CHECK(compare(a, c) == std::weak_ordering::equivalent);
  }
}

TEST_CASE("apply and revert restore the solution bit-exactly") {
  Rng rng(23);
  GeneratorOptions options;
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = test::random_instance(rng, options);
    auto x = test::random_solution(inst, rng);
    const auto bits = x.bits();
    const auto counts = x.group_counts();
    const double profit = x.profit_sum();
    const auto pair_sum = x.pair_sum();

    std::vector<int> flips;
    const int count = 1 + static_cast<int>(rng.uniform_index(3));
    for (int k = 0; k < count; ++k) {
      int index;
      do {
        index = static_cast<int>(rng.uniform_index(inst.num_items()));
      } while (std::find(flips.begin(), flips.end(), index) != flips.end());
      flips.push_back(index);
    }
    const double saved = x.apply_flips(inst, flips);
    CHECK(reference::caches_consistent(inst, x));
    x.revert_flips(inst, flips, saved);
    CHECK(x.bits() == bits);
    CHECK(x.group_counts() == counts);
    CHECK(x.pair_sum() == pair_sum);
    CHECK(x.profit_sum() == profit);
  }
}
