/**
 * \file fixtures.hpp
 *
 * Shared test fixtures: a hand-crafted two-feature demo ensemble whose
 * regions are small enough to reason about by hand, plus random ensemble
 * generators whose every leaf region is guaranteed non-empty (thresholds
 * are always drawn strictly inside the live interval of the chosen
 * feature).
 */

#ifndef LTA_TESTS_FIXTURES_HPP
#define LTA_TESTS_FIXTURES_HPP

#include "lta/attack.hpp"
#include "lta/baselines.hpp"

#include <random>
#include <vector>

namespace fixtures {

using namespace lta;

inline TreeNode split_node(int feature, double threshold, int left, int right) {
  TreeNode n;
  n.feature = feature;
  n.threshold = threshold;
  n.left = left;
  n.right = right;
  return n;
}

inline TreeNode leaf_node(double value) {
  TreeNode n;
  n.value = value;
  return n;
}

/**
 * Demo ensemble: 3 depth-2 trees over 2 features, "x <= t goes left".
 * Documentation numbers the 12 leaves 1..12 left-to-right across trees
 * (tree 0 owns 1-4, tree 1 owns 5-8, tree 2 owns 9-12); leaf g maps to
 * node 3 + (g-1)%4 of tree (g-1)/4.
 *
 *   tree 0: f0<=3 ? (f1<=2 ? -20 : 5) : (f1<=5 ? 5 : -5)
 *   tree 1: f1<=10 ? (f0<=15 ? -1 : 10) : (f0<=5 ? 1 : 3)
 *   tree 2: f1<=20 ? (f0<=10 ? 3 : 10) : (f0<=20 ? 1 : 10)
 *
 * Victim (23,23) has label 1, raw score +8, and its nearest adversarial
 * region is f0 in (5,20], f1 in (20,inf): optimal point (20,23), distance
 * exactly 3 under every norm.
 */
inline Ensemble demo_ensemble() {
  std::vector<Tree> trees(3);
  trees[0].nodes = {split_node(0, 3.0, 1, 2),  split_node(1, 2.0, 3, 4),
                    split_node(1, 5.0, 5, 6),  leaf_node(-20.0),
                    leaf_node(5.0),            leaf_node(5.0),
                    leaf_node(-5.0)};
  trees[1].nodes = {split_node(1, 10.0, 1, 2), split_node(0, 15.0, 3, 4),
                    split_node(0, 5.0, 5, 6),  leaf_node(-1.0),
                    leaf_node(10.0),           leaf_node(1.0),
                    leaf_node(3.0)};
  trees[2].nodes = {split_node(1, 20.0, 1, 2), split_node(0, 10.0, 3, 4),
                    split_node(0, 20.0, 5, 6), leaf_node(3.0),
                    leaf_node(10.0),           leaf_node(1.0),
                    leaf_node(10.0)};
  return Ensemble(std::move(trees), 2, 2, SplitRule::LessEqual, 0.0);
}

/** Node id of documentation leaf g (1..12) within its tree. */
inline int demo_node_of(int g) { return 3 + (g - 1) % 4; }
inline int demo_tree_of(int g) { return (g - 1) / 4; }

/** Tuple (a,b,c) in documentation numbering -> per-tree node ids. */
inline std::vector<int> demo_tuple(int a, int b, int c) {
  return {demo_node_of(a), demo_node_of(b), demo_node_of(c)};
}

/** Documentation number of a (tree, node) leaf. */
inline int demo_leaf_id(int tree, int node) { return tree * 4 + (node - 3) + 1; }

inline Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

/**
 * Random complete tree of the given depth over [0,1]^d. Each split draws
 * its threshold strictly inside the live interval of a random feature, so
 * every leaf region is non-empty by construction.
 */
class RandomTreeBuilder {
 public:
  RandomTreeBuilder(std::mt19937_64& rng, int d,
                    const std::vector<std::pair<int, double>>* shared_pool)
      : rng_(rng), d_(d), pool_(shared_pool), live_(static_cast<std::size_t>(d)) {}

  Tree build(int depth, int class_id) {
    Tree tree;
    tree.class_id = class_id;
    nodes_ = &tree.nodes;
    grow(depth);
    return tree;
  }

 private:
  int grow(int depth) {
    const int id = static_cast<int>(nodes_->size());
    nodes_->emplace_back();
    if (depth == 0) {
      (*nodes_)[static_cast<std::size_t>(id)] = leaf_node(leaf_val_(rng_));
      return id;
    }
    int feature = -1;
    double threshold = 0.0;
    if (pool_ && !pool_->empty()) {
      // Prefer a shared (feature, threshold) usable at this node, so split
      // values repeat across trees.
      const std::size_t offset = rng_() % pool_->size();
      for (std::size_t i = 0; i < pool_->size(); ++i) {
        const auto& [f, t] = (*pool_)[(offset + i) % pool_->size()];
        const Interval iv = live_[static_cast<std::size_t>(f)];
        if (iv.lo < t && t < iv.hi) {
          feature = f;
          threshold = t;
          break;
        }
      }
    }
    if (feature < 0) {
      feature = static_cast<int>(rng_() % static_cast<std::uint64_t>(d_));
      const Interval iv = live_[static_cast<std::size_t>(feature)];
      const double lo = std::max(iv.lo, 0.0);
      const double hi = std::min(iv.hi, 1.0);
      threshold = lo + (hi - lo) * unit_(rng_);
      if (!(lo < threshold && threshold < hi)) {
        // Degenerate rounding: give up on splitting here.
        (*nodes_)[static_cast<std::size_t>(id)] = leaf_node(leaf_val_(rng_));
        return id;
      }
    }
    const Interval saved = live_[static_cast<std::size_t>(feature)];
    live_[static_cast<std::size_t>(feature)] = {saved.lo, threshold};
    const int left = grow(depth - 1);
    live_[static_cast<std::size_t>(feature)] = {threshold, saved.hi};
    const int right = grow(depth - 1);
    live_[static_cast<std::size_t>(feature)] = saved;
    (*nodes_)[static_cast<std::size_t>(id)] = split_node(feature, threshold, left, right);
    return id;
  }

  std::mt19937_64& rng_;
  int d_;
  const std::vector<std::pair<int, double>>* pool_;
  std::vector<Interval> live_;
  std::vector<TreeNode>* nodes_ = nullptr;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::uniform_real_distribution<double> leaf_val_{-1.0, 1.0};
};

inline Ensemble random_ensemble(std::mt19937_64& rng, int num_trees, int depth, int d,
                                int num_classes = 2, SplitRule rule = SplitRule::LessEqual,
                                bool shared_thresholds = false) {
  std::vector<std::pair<int, double>> pool;
  if (shared_thresholds) {
    std::uniform_real_distribution<double> unit(0.1, 0.9);
    for (int i = 0; i < 4; ++i)
      pool.push_back({static_cast<int>(rng() % static_cast<std::uint64_t>(d)), unit(rng)});
  }
  std::vector<Tree> trees;
  for (int t = 0; t < num_trees; ++t) {
    RandomTreeBuilder builder(rng, d, shared_thresholds ? &pool : nullptr);
    trees.push_back(builder.build(depth, num_classes > 2 ? t % num_classes : 0));
  }
  return Ensemble(std::move(trees), d, num_classes, rule, 0.0);
}

/** Sizes from the small-instance property suite: K in [2,6], depth in
    [1,3], d in [2,4]. */
inline Ensemble random_small_ensemble(std::mt19937_64& rng, bool shared_thresholds = false,
                                      SplitRule rule = SplitRule::LessEqual) {
  const int k = 2 + static_cast<int>(rng() % 5);
  const int depth = 1 + static_cast<int>(rng() % 3);
  const int d = 2 + static_cast<int>(rng() % 3);
  return random_ensemble(rng, k, depth, d, 2, rule, shared_thresholds);
}

inline Vector random_victim(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = unit(rng);
  return x;
}

}  // namespace fixtures

#endif  // LTA_TESTS_FIXTURES_HPP
