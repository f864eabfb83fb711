/**
 * \file baselines.hpp
 *
 * Reference implementations surrounding the tuple-descent attack:
 *
 *  - naive tuple helpers (validity by full K-way intersection, exhaustive
 *    Hamming-1 enumeration) used as test oracles for the pruned search;
 *  - a brute-force exact minimizer over all valid tuples (depth-first with
 *    empty-intersection pruning), the ground truth at small scale;
 *  - two greedy point-space baselines (per-leaf projection and per-feature
 *    nudging) run under the same multi-start harness as the main attack;
 *  - a convergence-guarantee checker for converged tuples;
 *  - a shuffled greedy estimator of the neighborhood size needed to walk
 *    an attack result to the exact optimum.
 */

#ifndef LTA_BASELINES_HPP
#define LTA_BASELINES_HPP

#include "lta/attack.hpp"

#include <cstdint>
#include <vector>

namespace lta {

/** Intersection box of one leaf per tree (may be empty). */
Box tuple_box(const Ensemble& ens, const std::vector<int>& leaves);

/** Validity via the full K-way intersection. */
bool tuple_valid(const Ensemble& ens, const std::vector<int>& leaves);

/** Validity via all pairwise intersections (equivalent by construction). */
bool tuple_valid_pairwise(const Ensemble& ens, const std::vector<int>& leaves);

/**
 * Every valid tuple differing from `leaves` in exactly one tree, found by
 * checking each alternative leaf of each tree against the full
 * intersection of the others. No pruning: this is the reference the
 * bound-tree neighborhood is tested against. Throws if `leaves` itself is
 * invalid. Deterministic order: ascending tree, then ascending leaf id.
 */
std::vector<std::vector<int>> enumerate_neighbor1(const Ensemble& ens,
                                                  const std::vector<int>& leaves);

struct OracleConfig {
  Norm norm = Norm::LInf;
  double epsilon = 1e-6;
  /** Partial assignments the search may visit before giving up. */
  std::uint64_t max_partial_states = 1'000'000;
};

struct OracleResult {
  /** True when some valid tuple misclassifies the victim. */
  bool feasible = false;
  LexDist dist;
  std::vector<int> leaves;  // optimal tuple, one leaf per tree
  Vector point;             // materialized optimal adversarial input
  /** All valid tuples (adversarial or not) in the ensemble. */
  std::uint64_t valid_tuples = 0;
  /** Partial assignments visited. */
  std::uint64_t explored = 0;
};

/**
 * Exact minimum-distance adversarial tuple by depth-first enumeration,
 * carrying the running intersection and pruning empty ones; trees are
 * ordered dynamically by ascending reachable-leaf count (result is
 * order-independent). Throws when max_partial_states is exceeded.
 */
OracleResult exact_oracle(const Ensemble& ens, const Vector& x0, int y0,
                          const OracleConfig& cfg);

/**
 * Candidate points of the per-leaf greedy: for every tree and every leaf
 * other than the current one, the current point clamped into that leaf's
 * box, min(hi, max(lo + eps, x_j)) on each constrained dimension.
 * Deterministic order: ascending tree, then ascending leaf id.
 */
std::vector<Vector> naive_leaf_neighbors(const Ensemble& ens, const Vector& x_cur,
                                         double eps);

/**
 * Candidate points of the per-feature greedy: for each finite side of the
 * current tuple's intersection box, the point just outside on that
 * dimension (eps beyond a closed bound, exactly on an open bound).
 */
std::vector<Vector> naive_feature_step(const Ensemble& ens, const Vector& x_cur,
                                       double eps);

enum class BaselineKind { NaiveLeaf, NaiveFeature };

/**
 * The greedy point-space baselines under the same multi-start harness as
 * the tuple attack (same starts, same lexicographic ordering, no noise
 * escape): repeatedly accept the closest strictly-improving adversarial
 * candidate until none remains.
 */
MultistartResult run_baseline_multistart(const Ensemble& ens, BaselineKind kind,
                                         const Vector& x0, int y0, const AttackConfig& cfg,
                                         std::uint64_t example_index);

struct ConvergenceCheck {
  bool holds = true;  // no valid adversarial combination beats the tuple
  /** Per tree: allowed leaves (converged leaf + strictly better swaps). */
  std::vector<std::vector<int>> candidate_leaves;
  std::uint64_t combos_checked = 0;
  std::uint64_t valid_combos = 0;
  std::uint64_t adversarial_combos = 0;
  LexDist best_combo;  // min distance over valid adversarial combinations
};

/**
 * Optimality check for a converged tuple: gather the strictly closer
 * Hamming-1 swaps, then exhaustively verify that no valid adversarial
 * combination drawn from (converged leaves + swapped leaves) is strictly
 * closer than the tuple itself.
 */
ConvergenceCheck verify_convergence_guarantee(const Ensemble& ens,
                                              const std::vector<int>& leaves,
                                              const Vector& x0, int y0, Norm norm);

struct EstimatorConfig {
  Norm norm = Norm::LInf;
  int trials = 200;
  std::uint64_t seed = 0;
};

struct EstimatorResult {
  int h_bar = 0;       // Hamming distance between the two tuples
  int h_estimate = 0;  // min over trials of the largest accepted burst
  /** Winning trial's schedule: bursts of (tree, new leaf) replacements,
      each burst ending on a valid, adversarial, strictly closer tuple.
      Empty when only the all-at-once move works (h_estimate == h_bar). */
  std::vector<std::vector<std::pair<int, int>>> best_schedule;
};

/**
 * Shuffled greedy estimate of the neighborhood size needed to reach the
 * exact optimum from an attack result: over `trials` shuffles of the
 * differing trees, convert one leaf at a time (adversarial-gain leaves
 * first, then shuffle order), closing a burst whenever the intermediate
 * tuple is valid, adversarial, and strictly between the optimum and the
 * last accepted distance. A trial that cannot finish that way counts as
 * the all-at-once move (h_bar).
 */
EstimatorResult estimate_neighborhood_distance(const Ensemble& ens, const Vector& x_our,
                                               const Vector& x_star, const Vector& x0, int y0,
                                               const EstimatorConfig& cfg);

}  // namespace lta

#endif  // LTA_BASELINES_HPP
