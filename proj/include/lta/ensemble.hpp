/**
 * \file ensemble.hpp
 *
 * A tree ensemble (GBDT / random forest style additive model) with a fixed
 * split convention. Binary models (num_classes == 2) carry a single additive
 * score: predicted class is 1 when base_margin + sum of leaf values > 0,
 * else 0. Multiclass models (num_classes >= 3) assign each tree to a class
 * and predict the argmax of per-class sums (ties resolved toward the
 * smallest class index).
 */

#ifndef LTA_ENSEMBLE_HPP
#define LTA_ENSEMBLE_HPP

#include "lta/tree.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace lta {

class Ensemble {
 public:
  Ensemble() = default;
  Ensemble(std::vector<Tree> trees, int num_features, int num_classes, SplitRule rule,
           double base_margin = 0.0)
      : trees_(std::move(trees)),
        num_features_(num_features),
        num_classes_(num_classes),
        rule_(rule),
        base_margin_(base_margin) {
    validate();
  }

  const std::vector<Tree>& trees() const { return trees_; }
  const Tree& tree(int t) const { return trees_[static_cast<std::size_t>(t)]; }
  int num_trees() const { return static_cast<int>(trees_.size()); }
  int num_features() const { return num_features_; }
  int num_classes() const { return num_classes_; }
  SplitRule rule() const { return rule_; }
  double base_margin() const { return base_margin_; }
  int class_of_tree(int t) const { return tree(t).class_id; }
  int max_depth() const {
    int d = 0;
    for (const Tree& t : trees_) d = std::max(d, t.depth());
    return d;
  }

  int leaf_of(int t, const Vector& x) const { return tree(t).leaf_of(x, rule_); }

  /** One leaf id per tree: the discrete image C(x) of the input point. */
  std::vector<int> leaf_tuple(const Vector& x) const {
    std::vector<int> leaves(trees_.size());
    for (std::size_t t = 0; t < trees_.size(); ++t)
      leaves[t] = trees_[t].leaf_of(x, rule_);
    return leaves;
  }

  /** Binary additive score including the base margin. */
  double raw_score(const Vector& x) const {
    double s = base_margin_;
    for (const Tree& t : trees_) s += t.node(t.leaf_of(x, rule_)).value;
    return s;
  }

  /** Per-class score sums (each offset by the base margin). */
  std::vector<double> class_scores(const Vector& x) const {
    std::vector<double> s(static_cast<std::size_t>(num_classes_), base_margin_);
    for (const Tree& t : trees_)
      s[static_cast<std::size_t>(t.class_id)] += t.node(t.leaf_of(x, rule_)).value;
    return s;
  }

  int predict_class(const Vector& x) const {
    if (num_classes_ == 2) return raw_score(x) > 0.0 ? 1 : 0;
    const std::vector<double> s = class_scores(x);
    int best = 0;
    for (int c = 1; c < num_classes_; ++c)
      if (s[static_cast<std::size_t>(c)] > s[static_cast<std::size_t>(best)]) best = c;
    return best;
  }

  /** Binary score of a full leaf tuple (one leaf per tree, tree order). */
  double raw_score_of(const std::vector<int>& leaves) const {
    double s = base_margin_;
    for (std::size_t t = 0; t < trees_.size(); ++t)
      s += trees_[t].node(leaves[t]).value;
    return s;
  }

  std::vector<double> class_scores_of(const std::vector<int>& leaves) const {
    std::vector<double> s(static_cast<std::size_t>(num_classes_), base_margin_);
    for (std::size_t t = 0; t < trees_.size(); ++t)
      s[static_cast<std::size_t>(trees_[t].class_id)] += trees_[t].node(leaves[t]).value;
    return s;
  }

  int predict_class_of(const std::vector<int>& leaves) const {
    if (num_classes_ == 2) return raw_score_of(leaves) > 0.0 ? 1 : 0;
    const std::vector<double> s = class_scores_of(leaves);
    int best = 0;
    for (int c = 1; c < num_classes_; ++c)
      if (s[static_cast<std::size_t>(c)] > s[static_cast<std::size_t>(best)]) best = c;
    return best;
  }

 private:
  void validate() {
    if (num_features_ <= 0) throw std::runtime_error("ensemble needs num_features > 0");
    if (num_classes_ < 2) throw std::runtime_error("ensemble needs num_classes >= 2");
    if (trees_.empty()) throw std::runtime_error("ensemble has no trees");
    for (std::size_t t = 0; t < trees_.size(); ++t) {
      if (trees_[t].class_id < 0 || trees_[t].class_id >= num_classes_)
        throw std::runtime_error("tree " + std::to_string(t) + " class id out of range");
      trees_[t].finalize(num_features_);
    }
  }

  std::vector<Tree> trees_;
  int num_features_ = 0;
  int num_classes_ = 2;
  SplitRule rule_ = SplitRule::LessEqual;
  double base_margin_ = 0.0;
};

}  // namespace lta

#endif  // LTA_ENSEMBLE_HPP
