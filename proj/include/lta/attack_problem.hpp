/**
 * \file attack_problem.hpp
 *
 * The per-victim attack view of an ensemble. Multiclass instances are
 * reduced to the two classes {y0, adv_class}: only trees of those classes
 * stay active and the search margin is score(adv_class) - score(y0), with
 * "adversarial" meaning margin > 0 (a sufficient condition for the full
 * argmax to leave y0). Binary models keep all trees; the margin is the raw
 * additive score signed so that larger means more adversarial, with the
 * decision threshold matching the full model's tie convention exactly
 * (score > 0 predicts class 1, else class 0).
 */

#ifndef LTA_ATTACK_PROBLEM_HPP
#define LTA_ATTACK_PROBLEM_HPP

#include "lta/distance.hpp"
#include "lta/ensemble.hpp"

#include <stdexcept>
#include <vector>

namespace lta {

struct AttackProblem {
  const Ensemble* ens = nullptr;
  Vector x0;
  int y0 = 0;
  int adv_class = 1;
  Norm norm = Norm::LInf;
  /** Global tree ids of the active (reduced) trees; slot i <-> active[i]. */
  std::vector<int> active;
  /** Inverse map: global tree id -> slot, or -1 for inactive trees. */
  std::vector<int> slot_of_global;

  const Tree& slot_tree(int slot) const { return ens->tree(active[static_cast<std::size_t>(slot)]); }
  int num_slots() const { return static_cast<int>(active.size()); }
  int slot_of(int global_tree) const { return slot_of_global[static_cast<std::size_t>(global_tree)]; }

  /** Margin contribution sign of this slot's leaf values. */
  double slot_sign(int slot) const {
    if (ens->num_classes() == 2) return y0 == 1 ? -1.0 : 1.0;
    return slot_tree(slot).class_id == adv_class ? 1.0 : -1.0;
  }

  /** Canonical reduced margin of a tuple (one leaf per active slot). */
  double reduced_margin(const std::vector<int>& leaves) const {
    if (ens->num_classes() == 2) {
      double s = ens->base_margin();
      for (int slot = 0; slot < num_slots(); ++slot)
        s += slot_tree(slot).node(leaves[static_cast<std::size_t>(slot)]).value;
      return y0 == 1 ? -s : s;
    }
    double g = 0.0;
    for (int slot = 0; slot < num_slots(); ++slot)
      g += slot_sign(slot) * slot_tree(slot).node(leaves[static_cast<std::size_t>(slot)]).value;
    return g;
  }

  /**
   * Adversarial test on the reduced margin. Binary models inherit the full
   * model's tie rule (score exactly 0 predicts class 0), multiclass uses
   * the strict inequality so a reduced win implies a full-argmax change.
   */
  bool margin_is_adversarial(double g) const {
    if (ens->num_classes() == 2 && y0 == 1) return g >= 0.0;
    return g > 0.0;
  }

  /** Full-model check used for every externally reported success. */
  bool point_is_adversarial(const Vector& x) const { return ens->predict_class(x) != y0; }

  /** Tuple of active-slot leaves for a concrete point. */
  std::vector<int> slot_tuple(const Vector& x) const {
    std::vector<int> leaves(active.size());
    for (int slot = 0; slot < num_slots(); ++slot)
      leaves[static_cast<std::size_t>(slot)] = slot_tree(slot).leaf_of(x, ens->rule());
    return leaves;
  }
};

/**
 * Build the reduced problem for a victim and a concrete adversarial point
 * (whose predicted class fixes adv_class).
 */
inline AttackProblem make_problem(const Ensemble& ens, const Vector& x0, int y0, Norm norm,
                                  const Vector& x_adversarial) {
  AttackProblem p;
  p.ens = &ens;
  p.x0 = x0;
  p.y0 = y0;
  p.norm = norm;
  p.adv_class = ens.predict_class(x_adversarial);
  if (p.adv_class == y0)
    throw std::runtime_error("attack starting point is not adversarial");
  if (ens.num_classes() == 2) {
    p.active.resize(static_cast<std::size_t>(ens.num_trees()));
    for (int t = 0; t < ens.num_trees(); ++t) p.active[static_cast<std::size_t>(t)] = t;
  } else {
    for (int t = 0; t < ens.num_trees(); ++t)
      if (ens.class_of_tree(t) == y0 || ens.class_of_tree(t) == p.adv_class)
        p.active.push_back(t);
  }
  p.slot_of_global.assign(static_cast<std::size_t>(ens.num_trees()), -1);
  for (int slot = 0; slot < p.num_slots(); ++slot)
    p.slot_of_global[static_cast<std::size_t>(p.active[static_cast<std::size_t>(slot)])] = slot;
  return p;
}

}  // namespace lta

#endif  // LTA_ATTACK_PROBLEM_HPP
