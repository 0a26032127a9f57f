#include "cckp/algorithms.hpp"

#include <cmath>
#include <sstream>

#include "cckp/reference.hpp"

namespace cckp {

namespace {

void sample_flips(AlgorithmKind kind, int n, Rng& rng, std::vector<int>& out) {
  out.clear();
  if (kind == AlgorithmKind::rls) {
    if (rng.uniform_index(2) == 0) {
      out.push_back(static_cast<int>(rng.uniform_index(n)));
    } else {
      const int first = static_cast<int>(rng.uniform_index(n));
      int second = static_cast<int>(rng.uniform_index(n - 1));
      if (second >= first) ++second;
      out.push_back(first);
      out.push_back(second);
    }
    return;
  }
  // Standard bit mutation with rate 1/n via geometric gap sampling: the gap
  // before the next flipped position is Geometric(1/n), matching independent
  // per-bit coin flips exactly.
  const double log_keep = std::log1p(-1.0 / n);
  int pos = -1;
  while (true) {
    const double u = rng.uniform_double();
    if (u <= 0.0) break;
    const double gap = std::floor(std::log(u) / log_keep);
    if (gap >= static_cast<double>(n - pos)) break;
    pos += 1 + static_cast<int>(gap);
    if (pos >= n) break;
    out.push_back(pos);
  }
}

Solution make_initial(const ProblemInstance& inst,
                      const AlgorithmConfig& config, Rng& rng) {
  switch (config.init) {
    case InitKind::all_zeros:
      return Solution::empty(inst);
    case InitKind::all_ones:
      return Solution::all_ones(inst);
    case InitKind::given:
      return Solution::from_bits(inst, config.given_bits);
    case InitKind::uniform_random: {
      Solution x = Solution::empty(inst);
      for (int i = 0; i < inst.num_items(); ++i)
        if (rng.uniform_index(2) == 1) x.flip(inst, i);
      return x;
    }
  }
  throw std::logic_error("unreachable init kind");
}

void debug_check_state(const ProblemInstance& inst, const Solution& x,
                       const FitnessValue& fx) {
  if (!reference::caches_consistent(inst, x))
    throw std::logic_error("solution caches diverged from bits");
  const FitnessValue fresh = reference::fitness_from_bits(inst, x.bits());
  const bool profit_ok =
      std::fabs(fresh.profit - fx.profit) <=
      1e-9 * std::max(1.0, std::fabs(fresh.profit));
  if (!profit_ok || !nearly_equal(fresh.beta, fx.beta))
    throw std::logic_error("incremental fitness diverged from recompute");
}

}  // namespace

void validate(const AlgorithmConfig& config, const ProblemInstance& inst) {
  std::vector<std::string> issues;
  if (inst.num_items() < 2)
    issues.push_back("algorithms require n >= 2 (two-bit flips need a pair)");
  if (config.max_evaluations < 1)
    issues.push_back("max_evaluations must be >= 1");
  if (config.init == InitKind::given &&
      static_cast<int>(config.given_bits.size()) != inst.num_items()) {
    std::ostringstream msg;
    msg << "given initial bits have length " << config.given_bits.size()
        << ", instance has " << inst.num_items() << " items";
    issues.push_back(msg.str());
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

std::vector<int> rls_flip_indices(int n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("rls_flip_indices requires n >= 2");
  std::vector<int> flips;
  sample_flips(AlgorithmKind::rls, n, rng, flips);
  return flips;
}

std::vector<int> ea_flip_indices(int n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("ea_flip_indices requires n >= 2");
  std::vector<int> flips;
  sample_flips(AlgorithmKind::one_plus_one_ea, n, rng, flips);
  return flips;
}

Solution rls_mutate(const ProblemInstance& inst, const Solution& x, Rng& rng) {
  Solution y = x;
  for (int index : rls_flip_indices(inst.num_items(), rng)) y.flip(inst, index);
  return y;
}

Solution ea_mutate(const ProblemInstance& inst, const Solution& x, Rng& rng) {
  Solution y = x;
  for (int index : ea_flip_indices(inst.num_items(), rng)) y.flip(inst, index);
  return y;
}

StepOutcome step(const ProblemInstance& inst, AlgorithmKind kind, Solution& x,
                 FitnessValue& fx, Rng& rng) {
  std::vector<int> flips;
  sample_flips(kind, inst.num_items(), rng, flips);
  if (flips.empty()) return {true, false};  // offspring equals parent
  const double saved_profit = x.apply_flips(inst, flips);
  const FitnessValue fy = fitness_of(inst, x);
  const auto order = compare(fy, fx);
  if (order == std::weak_ordering::less) {
    x.revert_flips(inst, flips, saved_profit);
    return {false, false};
  }
  fx = fy;
  return {true, order == std::weak_ordering::greater};
}

RunRecord run(const ProblemInstance& inst, const AlgorithmConfig& config,
              const std::optional<FitnessValue>& target,
              const StepObserver& observer) {
  validate(config, inst);
  Rng rng(config.seed);

  RunRecord record;
  record.seed = config.seed;

  Solution x = make_initial(inst, config, rng);
  FitnessValue fx = fitness_of(inst, x);
  std::uint64_t evaluations = 1;  // the initial solution is evaluation 0

  const auto note_state = [&](std::uint64_t index, bool accepted,
                              bool improved) {
    if (accepted) {
      if (!record.t_feasible && fx.profit >= 0.0) record.t_feasible = index;
      if (target && !record.t_optimal && at_least_as_good(fx, *target))
        record.t_optimal = index;
      const bool log_point =
          config.trajectory == TrajectoryMode::accepted ||
          (config.trajectory == TrajectoryMode::improvements &&
           (improved || index == 0));
      if (log_point) record.trajectory.push_back({index, fx});
    }
    if (observer) observer(StepEvent{index, accepted, improved, x, fx});
  };

  if (config.debug_checks) debug_check_state(inst, x, fx);
  note_state(0, true, false);

  const auto should_stop = [&] {
    if (target && record.t_optimal) return true;
    if (config.stop_at_feasible && record.t_feasible) return true;
    return false;
  };

  std::vector<int> flips;
  while (evaluations < config.max_evaluations && !should_stop()) {
    sample_flips(config.kind, inst.num_items(), rng, flips);
    const std::uint64_t index = evaluations++;
    if (flips.empty()) {
      note_state(index, true, false);
      continue;
    }
    const double saved_profit = x.apply_flips(inst, flips);
    const FitnessValue fy = fitness_of(inst, x);
    const auto order = compare(fy, fx);
    if (order == std::weak_ordering::less) {
      x.revert_flips(inst, flips, saved_profit);
      note_state(index, false, false);
      continue;
    }
    fx = fy;
    if (config.debug_checks) debug_check_state(inst, x, fx);
    note_state(index, true, order == std::weak_ordering::greater);
  }

  record.evaluations = evaluations;
  record.final_solution = std::move(x);
  record.final_fitness = fx;
  return record;
}

}  // namespace cckp
