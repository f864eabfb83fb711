/**
 * \file reduce_tree.hpp
 *
 * Fixed-shape binary reduction over a dense slot array. The combine tree's
 * shape depends only on the slot count, so a value reached by incremental
 * point updates is bit-identical to the value of a fresh reduction over the
 * same leaves — the property the incremental distance bookkeeping relies on.
 */

#ifndef LTA_REDUCE_TREE_HPP
#define LTA_REDUCE_TREE_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

namespace lta {

enum class ReduceOp { Sum, Max };

class ReduceTree {
 public:
  ReduceTree(std::size_t slots, ReduceOp op) : op_(op) {
    base_ = 1;
    while (base_ < std::max<std::size_t>(slots, 1)) base_ <<= 1;
    nodes_.assign(2 * base_, 0.0);
  }

  double get(std::size_t i) const { return nodes_[base_ + i]; }

  void set(std::size_t i, double v) {
    std::size_t n = base_ + i;
    nodes_[n] = v;
    for (n >>= 1; n >= 1; n >>= 1) {
      const double l = nodes_[2 * n];
      const double r = nodes_[2 * n + 1];
      nodes_[n] = op_ == ReduceOp::Sum ? l + r : std::max(l, r);
      if (n == 1) break;
    }
  }

  double total() const { return nodes_[1]; }

  void clear() { std::fill(nodes_.begin(), nodes_.end(), 0.0); }

 private:
  ReduceOp op_;
  std::size_t base_ = 1;
  std::vector<double> nodes_;
};

}  // namespace lta

#endif  // LTA_REDUCE_TREE_HPP
