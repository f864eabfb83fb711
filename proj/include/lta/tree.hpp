/**
 * \file tree.hpp
 *
 * A single decision tree over dense feature vectors. Nodes live in a flat
 * array; leaves are identified by their node index. Leaf boxes (the
 * accumulated root-path constraints, Definition: one interval per split
 * dimension, at most depth finite sides) are precomputed at validation time
 * since every higher-level operation consumes them.
 */

#ifndef LTA_TREE_HPP
#define LTA_TREE_HPP

#include "lta/box.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace lta {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
};

class Tree {
 public:
  std::vector<TreeNode> nodes;
  int root = 0;
  int class_id = 0;

  const TreeNode& node(int id) const { return nodes[static_cast<std::size_t>(id)]; }

  int leaf_of(const Vector& x, SplitRule rule) const {
    int id = root;
    while (!node(id).is_leaf()) {
      const TreeNode& n = node(id);
      const bool go_left = rule == SplitRule::LessEqual ? x[n.feature] <= n.threshold
                                                        : x[n.feature] < n.threshold;
      id = go_left ? n.left : n.right;
    }
    return id;
  }

  const Box& leaf_box(int leaf_id) const { return leaf_boxes_[static_cast<std::size_t>(leaf_id)]; }

  /** Leaf node ids in left-to-right (in-order) position. */
  const std::vector<int>& leaves() const { return leaves_; }

  int depth() const { return depth_; }

  /**
   * Structural validation + cache construction. Rejects out-of-range child
   * indices, nodes reachable more than once (cycles / shared subtrees),
   * half-initialized internal nodes, and feature indices outside
   * [0, num_features).
   */
  void finalize(int num_features) {
    const int n = static_cast<int>(nodes.size());
    if (n == 0) throw std::runtime_error("tree has no nodes");
    if (root < 0 || root >= n) throw std::runtime_error("tree root index out of range");
    leaves_.clear();
    leaf_boxes_.assign(nodes.size(), Box{});
    std::vector<char> seen(nodes.size(), 0);
    depth_ = 0;

    struct Frame {
      int id;
      int depth;
      Box box;
    };
    std::vector<Frame> stack;
    stack.push_back({root, 0, Box{}});
    int visited = 0;
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      if (f.id < 0 || f.id >= n)
        throw std::runtime_error("tree child index out of range: " + std::to_string(f.id));
      if (seen[static_cast<std::size_t>(f.id)])
        throw std::runtime_error("tree node " + std::to_string(f.id) +
                                 " reachable twice (cycle or shared subtree)");
      seen[static_cast<std::size_t>(f.id)] = 1;
      ++visited;
      depth_ = std::max(depth_, f.depth);
      const TreeNode& nd = node(f.id);
      if (nd.is_leaf()) {
        if (f.box.empty())
          throw std::runtime_error("leaf " + std::to_string(f.id) +
                                   " has an empty region (contradictory path splits)");
        leaf_boxes_[static_cast<std::size_t>(f.id)] = f.box;
        continue;
      }
      if (nd.left < 0 || nd.right < 0)
        throw std::runtime_error("internal node " + std::to_string(f.id) + " missing a child");
      if (nd.feature >= num_features)
        throw std::runtime_error("split feature " + std::to_string(nd.feature) +
                                 " out of range for " + std::to_string(num_features) +
                                 " features");
      Box left = f.box;
      left.constrain(nd.feature, Interval{-kInf, nd.threshold});
      Box right = f.box;
      right.constrain(nd.feature, Interval{nd.threshold, kInf});
      // Push right first so leaves_ fills in left-to-right order below.
      stack.push_back({nd.right, f.depth + 1, std::move(right)});
      stack.push_back({nd.left, f.depth + 1, std::move(left)});
    }
    if (visited != n)
      throw std::runtime_error("tree has " + std::to_string(n - visited) +
                               " node(s) unreachable from the root");
    collect_leaves_in_order();
  }

 private:
  void collect_leaves_in_order() {
    leaves_.clear();
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int id = stack.back();
      stack.pop_back();
      const TreeNode& nd = node(id);
      if (nd.is_leaf()) {
        leaves_.push_back(id);
        continue;
      }
      stack.push_back(nd.right);
      stack.push_back(nd.left);
    }
  }

  std::vector<int> leaves_;
  std::vector<Box> leaf_boxes_;
  int depth_ = 0;
};

}  // namespace lta

#endif  // LTA_TREE_HPP
