/**
 * \file attack.hpp
 *
 * The leaf-tuple descent attack: starting from an adversarial point, walk
 * the discrete space of valid leaf tuples, each iteration moving to the
 * valid, adversarial tuple with the smallest lexicographic (primary, l2)
 * distance among the Hamming-distance-1 neighborhood restricted to bound
 * trees — the trees whose leaf box edge touches the current closest point,
 * which provably cover every strictly-closer neighbor. Multi-start over
 * Gaussian initial points plus an optional coordinate-noise escape from
 * local optima wrap the descent.
 */

#ifndef LTA_ATTACK_HPP
#define LTA_ATTACK_HPP

#include "lta/attack_state.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace lta {

struct AttackConfig {
  Norm norm = Norm::LInf;
  /** Gaussian starts per victim. */
  int num_initial = 20;
  /** Standard-normal redraws allowed per start before giving up. */
  int max_redraws = 1000;
  /** Relative tolerance of the segment bisection toward the victim;
      realized as ceil(log2(1/tol)) fixed steps keeping the adversarial
      endpoint (default 1e-9 ~ 30 steps). */
  double binary_search_tol = 1e-9;
  /** Materialization nudge for open box sides. */
  double epsilon = 1e-6;
  bool noise_escape = true;
  double noise_flip_prob = 0.1;
  int noise_trials = 300;
  double noise_stddev = 0.1;
  /** Visit bound trees grouped by binding feature (descending |x'-x0|)
      and stop after the first group that yields an improvement. */
  bool early_cutoff = false;
  std::uint64_t seed = 0;
  /** Record per-iteration neighborhood sizes and threshold counts. */
  bool collect_stats = false;
};

/** Per-iteration neighborhood details (collect_stats only). */
struct IterationRecord {
  /** Per bound tree visited: (thresholds of the tree strictly inside the
      complementary box, single-tree neighbors emitted). */
  std::vector<std::pair<int, int>> per_tree;
  int tbound = 0;
  int neighbor_total = 0;
};

struct AttackStats {
  long iterations = 0;
  long tbound_sum = 0;
  long n1_sum = 0;
  long n1_tree_visits = 0;
  long neighbor_bound_sum = 0;
  std::vector<IterationRecord> per_iteration;

  void merge(const AttackStats& o) {
    iterations += o.iterations;
    tbound_sum += o.tbound_sum;
    n1_sum += o.n1_sum;
    n1_tree_visits += o.n1_tree_visits;
    neighbor_bound_sum += o.neighbor_bound_sum;
    per_iteration.insert(per_iteration.end(), o.per_iteration.begin(), o.per_iteration.end());
  }
};

/** Split values shared by two or more trees, keyed by (feature, value). */
struct DuplicateGroups {
  std::map<std::pair<int, double>, std::vector<int>> groups;  // global tree ids

  const std::vector<int>* find(int feature, double threshold) const {
    auto it = groups.find({feature, threshold});
    return it == groups.end() ? nullptr : &it->second;
  }
};

DuplicateGroups duplicate_threshold_groups(const Ensemble& ens);

/** Result of one descent (or of the whole multi-start, for the best run). */
struct StartOutcome {
  bool found = false;
  LexDist dist;                 // infimum distance of the converged tuple
  Vector point;                 // materialized adversarial input
  std::vector<int> leaves;      // converged tuple, one leaf per active slot
  std::vector<int> active;      // global tree ids the slots refer to
  int adv_class = -1;
  double initial_primary = kInf;
  AttackStats stats;
};

/**
 * Slots whose leaf box edge the current closest point lies on (exact
 * equality of the clamped coordinate with a finite bound).
 */
std::vector<int> bound_trees(const AttackState& state);

/**
 * All Hamming-distance-1 moves over the bound trees (valid alternatives
 * only, adversarial or not), plus combined multi-tree moves across
 * duplicated thresholds. Distances are canonical; with early_cutoff the
 * scan may stop after the first improving feature group.
 */
std::vector<NeighborDiff> neighbor_bound(AttackState& state, const AttackConfig& cfg,
                                         const DuplicateGroups& groups,
                                         IterationRecord* record = nullptr);

/** Greedy descent from an adversarial starting point until convergence. */
StartOutcome lt_attack(const AttackProblem& problem, const Vector& x_init,
                       const AttackConfig& cfg, const DuplicateGroups& groups);

/**
 * Draw x0 + N(0,1)^d until the model disagrees with y0 (up to max_redraws),
 * then bisect the segment toward x0 keeping the adversarial endpoint.
 */
std::optional<Vector> generate_initial(const Ensemble& ens, const Vector& x0, int y0,
                                       const AttackConfig& cfg, std::mt19937_64& rng);

/**
 * Coordinate-noise escape: perturb the current adversarial point (each
 * coordinate flipped with noise_flip_prob by N(0, noise_stddev)), restart
 * the descent from any adversarial perturbation, and keep strict
 * lexicographic improvements; repeats with a fresh trial budget after every
 * improvement. Never returns a worse outcome than it was given.
 */
StartOutcome noise_escape(const Ensemble& ens, const Vector& x0, int y0, StartOutcome best,
                          const AttackConfig& cfg, const DuplicateGroups& groups,
                          std::mt19937_64& rng);

struct MultistartResult {
  bool found = false;
  bool already_misclassified = false;
  StartOutcome best;
  MeasuredNorms measured;
  double initial_primary = kInf;  // best (smallest) across starts
  AttackStats stats;
  int starts_attempted = 0;
  int starts_found = 0;
};

/**
 * Full per-victim attack: num_initial independent starts with
 * per-(example, start) derived RNG streams, optional noise escape, best
 * result by lexicographic tuple distance (earlier start wins ties).
 */
MultistartResult run_multistart(const Ensemble& ens, const DuplicateGroups& groups,
                                const Vector& x0, int y0, const AttackConfig& cfg,
                                std::uint64_t example_index);

inline MultistartResult run_multistart(const Ensemble& ens, const Vector& x0, int y0,
                                       const AttackConfig& cfg,
                                       std::uint64_t example_index = 0) {
  return run_multistart(ens, duplicate_threshold_groups(ens), x0, y0, cfg, example_index);
}

}  // namespace lta

#endif  // LTA_ATTACK_HPP
