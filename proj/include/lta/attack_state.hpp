/**
 * \file attack_state.hpp
 *
 * Mutable search state for one descent: the current valid adversarial
 * tuple plus caches that every iteration needs — the sorted bound cache,
 * the intersection's closest point to the victim, per-dimension distance
 * contributions feeding fixed-shape reductions, and the canonical reduced
 * margin. Applying a diff updates bounds by exact erase/insert and
 * recomputes margin and distance through the same canonical routines a
 * from-scratch rebuild uses, so cached values never drift from
 * recomputation.
 */

#ifndef LTA_ATTACK_STATE_HPP
#define LTA_ATTACK_STATE_HPP

#include "lta/attack_problem.hpp"
#include "lta/reduce_tree.hpp"
#include "lta/sorted_box_cache.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lta {

/**
 * One candidate move: replace the leaf of one slot (or, when crossing a
 * threshold shared by several trees, of several slots at once) together
 * with its margin delta and the canonical distance of the resulting tuple.
 */
struct NeighborDiff {
  std::vector<std::pair<int, int>> changes;  // (slot, new leaf), ascending slot
  double margin_delta = 0.0;
  LexDist dist;

  /** Deterministic tie-break key: smallest slot, then smallest leaf id. */
  friend bool tie_before(const NeighborDiff& a, const NeighborDiff& b) {
    return a.changes < b.changes;
  }
};

class AttackState {
 public:
  AttackState(const AttackProblem& problem, std::vector<int> leaves)
      : p_(&problem),
        cache_(problem.ens->num_features()),
        leaves_(std::move(leaves)),
        closest_(problem.x0),
        contrib_(static_cast<std::size_t>(problem.ens->num_features()), 0.0),
        primary_(static_cast<std::size_t>(problem.ens->num_features()),
                 problem.norm == Norm::LInf ? ReduceOp::Max : ReduceOp::Sum),
        l2_(static_cast<std::size_t>(problem.ens->num_features()), ReduceOp::Sum) {
    for (int slot = 0; slot < p_->num_slots(); ++slot)
      cache_.add_box(p_->slot_tree(slot).leaf_box(leaves_[static_cast<std::size_t>(slot)]));
    for (int dim : cache_.bounded_dims()) refresh_dim(dim);
    margin_ = p_->reduced_margin(leaves_);
    read_dist();
  }

  const AttackProblem& problem() const { return *p_; }
  const SortedBoxCache& cache() const { return cache_; }
  const std::vector<int>& leaves() const { return leaves_; }
  int leaf_of_slot(int slot) const { return leaves_[static_cast<std::size_t>(slot)]; }
  const Vector& closest() const { return closest_; }
  double margin() const { return margin_; }
  LexDist dist() const { return dist_; }
  double contribution(int dim) const { return contrib_[static_cast<std::size_t>(dim)]; }

  Box intersection_box() const { return cache_.intersection_box(); }

  /** Concrete adversarial input for the current tuple (eps-nudged). */
  Vector materialized(double eps) const {
    return materialize(cache_.intersection_box(), p_->x0, eps, p_->ens->rule());
  }

  /**
   * Canonical distance of a candidate whose intersection differs from the
   * current one only on the given (dim, interval) overrides. Dims must be
   * unique; intervals must be non-empty. Restores state before returning.
   */
  LexDist eval_override(const std::vector<std::pair<int, Interval>>& overrides) {
    const Norm norm = p_->norm;
    for (const auto& [dim, iv] : overrides) {
      const double c = dim_contribution(iv, p_->x0[dim]);
      primary_.set(static_cast<std::size_t>(dim), primary_term(c, norm));
      l2_.set(static_cast<std::size_t>(dim), c * c);
    }
    LexDist d{primary_value(primary_.total(), norm), std::sqrt(l2_.total())};
    for (const auto& [dim, iv] : overrides) {
      const double c = contrib_[static_cast<std::size_t>(dim)];
      primary_.set(static_cast<std::size_t>(dim), primary_term(c, norm));
      l2_.set(static_cast<std::size_t>(dim), c * c);
    }
    return d;
  }

  /** Apply an accepted diff; the resulting tuple must be valid. */
  void apply(const NeighborDiff& diff) {
    std::vector<int> touched;
    for (const auto& [slot, new_leaf] : diff.changes) {
      std::vector<int> dims =
          cache_.replace(slot, p_->slot_tree(slot).leaf_box(new_leaf));
      touched.insert(touched.end(), dims.begin(), dims.end());
      leaves_[static_cast<std::size_t>(slot)] = new_leaf;
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (int dim : touched) refresh_dim(dim);
    margin_ = p_->reduced_margin(leaves_);
    read_dist();
  }

 private:
  void refresh_dim(int dim) {
    const Interval iv = cache_.interval(dim);
    if (!nonempty(iv))
      throw std::logic_error("attack state became infeasible (empty intersection)");
    const double x0j = p_->x0[dim];
    const double c = dim_contribution(iv, x0j);
    contrib_[static_cast<std::size_t>(dim)] = c;
    closest_[dim] = clamp_closure(iv, x0j);
    primary_.set(static_cast<std::size_t>(dim), primary_term(c, p_->norm));
    l2_.set(static_cast<std::size_t>(dim), c * c);
  }

  void read_dist() {
    dist_ = LexDist{primary_value(primary_.total(), p_->norm), std::sqrt(l2_.total())};
  }

  const AttackProblem* p_;
  SortedBoxCache cache_;
  std::vector<int> leaves_;
  Vector closest_;
  std::vector<double> contrib_;
  ReduceTree primary_;
  ReduceTree l2_;
  double margin_ = 0.0;
  LexDist dist_;
};

}  // namespace lta

#endif  // LTA_ATTACK_STATE_HPP
