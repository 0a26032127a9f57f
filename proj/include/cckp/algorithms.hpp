#ifndef CCKP_ALGORITHMS_HPP
#define CCKP_ALGORITHMS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cckp/model.hpp"
#include "cckp/rng.hpp"

namespace cckp {

enum class AlgorithmKind { rls, one_plus_one_ea };

enum class InitKind { uniform_random, all_ones, all_zeros, given };

enum class TrajectoryMode { off, improvements, accepted };

struct AlgorithmConfig {
  AlgorithmKind kind = AlgorithmKind::rls;
  InitKind init = InitKind::uniform_random;
  std::vector<std::uint8_t> given_bits;  // consulted when init == given
  std::uint64_t seed = 0;
  std::uint64_t max_evaluations = 1;
  /// Stop as soon as the current solution is surrogate-feasible.
  bool stop_at_feasible = false;
  TrajectoryMode trajectory = TrajectoryMode::off;
  /// Recompute caches and fitness from scratch at every accepted state and
  /// throw std::logic_error on mismatch. For tests; slows runs down a lot.
  bool debug_checks = false;
};

/// Throws ValidationError listing every violated constraint. Requires
/// n >= 2 (the RLS two-bit branch has no valid pair on one item).
void validate(const AlgorithmConfig& config, const ProblemInstance& inst);

struct TrajectoryPoint {
  std::uint64_t evaluation = 0;
  FitnessValue fitness;
};

/// Summary of one run. Evaluation indices start at 0 for the initial
/// solution; every generated offspring consumes exactly one further index.
struct RunRecord {
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> t_feasible;
  std::optional<std::uint64_t> t_optimal;
  std::uint64_t evaluations = 0;
  Solution final_solution;
  FitnessValue final_fitness;
  std::vector<TrajectoryPoint> trajectory;
};

/// Snapshot passed to a run observer after every evaluation (including the
/// initial one, which reports as accepted). `current` is the solution after
/// selection, i.e. the offspring when accepted, otherwise the parent.
struct StepEvent {
  std::uint64_t evaluation = 0;
  bool accepted = false;
  bool improved = false;
  const Solution& current;
  FitnessValue current_fitness;
};

using StepObserver = std::function<void(const StepEvent&)>;

/// Indices flipped by one RLS mutation: with probability 1/2 a single
/// uniform index, otherwise a uniform unordered pair of distinct indices.
std::vector<int> rls_flip_indices(int n, Rng& rng);

/// Indices flipped by one standard-bit-mutation draw: each bit
/// independently with probability 1/n. Sampled with geometric gaps, which
/// produces the same distribution in O(1 + #flips) draws; the empty set
/// (offspring equals parent) is a legitimate outcome.
std::vector<int> ea_flip_indices(int n, Rng& rng);

/// Offspring copies with the parent left untouched.
Solution rls_mutate(const ProblemInstance& inst, const Solution& x, Rng& rng);
Solution ea_mutate(const ProblemInstance& inst, const Solution& x, Rng& rng);

struct StepOutcome {
  bool accepted = false;
  bool improved = false;
};

/// One offspring generation + selection, in place: x/fx become the offspring
/// and its fitness when it is at least as good, and stay otherwise. Consumes
/// exactly one fitness evaluation.
StepOutcome step(const ProblemInstance& inst, AlgorithmKind kind, Solution& x,
                 FitnessValue& fx, Rng& rng);

/// Full optimization run. Stops when the fitness reaches `target` (compares
/// not-less), when configured to stop at feasibility, or when the evaluation
/// budget is exhausted — budget exhaustion is a normal outcome. The result
/// is a deterministic function of (inst, config, target).
RunRecord run(const ProblemInstance& inst, const AlgorithmConfig& config,
              const std::optional<FitnessValue>& target = std::nullopt,
              const StepObserver& observer = {});

}  // namespace cckp

#endif  // CCKP_ALGORITHMS_HPP
