/**
 * \file sorted_box_cache.hpp
 *
 * Per-dimension sorted bound multisets over the leaf boxes of the current
 * tuple. Each dimension keeps two multisets of (bound value, tree slot)
 * pairs — finite lower bounds and finite upper bounds — so that
 *
 *  - the running intersection is max-of-lowers / min-of-uppers per
 *    dimension (bit-exact: the values are selected, never recombined),
 *  - the intersection with one tree's box removed is a skip-walk past that
 *    slot's entries (logical removal, the cache itself is not mutated),
 *  - replacing one tree's leaf box is an exact erase+insert of at most
 *    depth entries, O(l log K).
 *
 * Infinite bounds are never stored. Slots index the attack's active tree
 * list, not global tree ids.
 */

#ifndef LTA_SORTED_BOX_CACHE_HPP
#define LTA_SORTED_BOX_CACHE_HPP

#include "lta/box.hpp"

#include <set>
#include <utility>
#include <vector>

namespace lta {

class SortedBoxCache {
 public:
  /** Build from the leaf boxes of an initial tuple. O(K l log K). */
  explicit SortedBoxCache(int num_features) : dims_(static_cast<std::size_t>(num_features)) {}

  int num_slots() const { return static_cast<int>(boxes_.size()); }

  /** Append one tree's leaf box as the next slot. */
  void add_box(const Box& box) {
    const int slot = static_cast<int>(boxes_.size());
    boxes_.push_back(box);
    for (const auto& [dim, iv] : box.entries()) insert_bounds(dim, iv, slot);
  }

  const Box& slot_box(int slot) const { return boxes_[static_cast<std::size_t>(slot)]; }

  /** Replace one slot's box; returns dims whose bounds were touched. */
  std::vector<int> replace(int slot, const Box& box) {
    std::vector<int> touched;
    for (const auto& [dim, iv] : boxes_[static_cast<std::size_t>(slot)].entries()) {
      erase_bounds(dim, iv, slot);
      touched.push_back(dim);
    }
    for (const auto& [dim, iv] : box.entries()) {
      insert_bounds(dim, iv, slot);
      touched.push_back(dim);
    }
    boxes_[static_cast<std::size_t>(slot)] = box;
    return touched;
  }

  /** Interval of the K-way intersection on one dimension. */
  Interval interval(int dim) const {
    const DimBounds& b = dims_[static_cast<std::size_t>(dim)];
    Interval iv;
    if (!b.lowers.empty()) iv.lo = b.lowers.rbegin()->first;
    if (!b.uppers.empty()) iv.hi = b.uppers.begin()->first;
    return iv;
  }

  /** Same, skipping the given slot's bounds (logical removal). */
  Interval interval_without(int dim, int slot) const {
    const DimBounds& b = dims_[static_cast<std::size_t>(dim)];
    Interval iv;
    for (auto it = b.lowers.rbegin(); it != b.lowers.rend(); ++it)
      if (it->second != slot) {
        iv.lo = it->first;
        break;
      }
    for (auto it = b.uppers.begin(); it != b.uppers.end(); ++it)
      if (it->second != slot) {
        iv.hi = it->first;
        break;
      }
    return iv;
  }

  /** Same, skipping a set of slots (used by multi-tree diffs). */
  Interval interval_without_set(int dim, const std::vector<int>& slots) const {
    const DimBounds& b = dims_[static_cast<std::size_t>(dim)];
    auto skipped = [&slots](int s) {
      for (int v : slots)
        if (v == s) return true;
      return false;
    };
    Interval iv;
    for (auto it = b.lowers.rbegin(); it != b.lowers.rend(); ++it)
      if (!skipped(it->second)) {
        iv.lo = it->first;
        break;
      }
    for (auto it = b.uppers.begin(); it != b.uppers.end(); ++it)
      if (!skipped(it->second)) {
        iv.hi = it->first;
        break;
      }
    return iv;
  }

  /** Dimensions that currently hold at least one finite bound, ascending. */
  const std::set<int>& bounded_dims() const { return bounded_dims_; }

  /** Materialize the K-way intersection (Empty box when infeasible). */
  Box intersection_box() const {
    Box out;
    for (int dim : bounded_dims_) {
      const Interval iv = interval(dim);
      if (!nonempty(iv)) return Box::empty_box();
      out.constrain(dim, iv);
    }
    return out;
  }

  /** Materialize the intersection with one slot removed. */
  Box box_without(int slot) const {
    Box out;
    for (int dim : bounded_dims_) {
      const Interval iv = interval_without(dim, slot);
      if (!nonempty(iv)) return Box::empty_box();
      if (!is_unbounded(iv)) out.constrain(dim, iv);
    }
    return out;
  }

  /**
   * Slots contributing the given finite bound value on one side of a
   * dimension (lower=true scans max-lowers, else min-uppers). Walks only
   * the tied entries.
   */
  void slots_at_bound(int dim, double value, bool lower, std::vector<int>& out) const {
    const DimBounds& b = dims_[static_cast<std::size_t>(dim)];
    if (lower) {
      for (auto it = b.lowers.rbegin(); it != b.lowers.rend() && it->first == value; ++it)
        out.push_back(it->second);
    } else {
      for (auto it = b.uppers.begin(); it != b.uppers.end() && it->first == value; ++it)
        out.push_back(it->second);
    }
  }

 private:
  struct DimBounds {
    std::multiset<std::pair<double, int>> lowers;
    std::multiset<std::pair<double, int>> uppers;
    bool empty() const { return lowers.empty() && uppers.empty(); }
  };

  void insert_bounds(int dim, const Interval& iv, int slot) {
    DimBounds& b = dims_[static_cast<std::size_t>(dim)];
    if (iv.lo != -kInf) b.lowers.insert({iv.lo, slot});
    if (iv.hi != kInf) b.uppers.insert({iv.hi, slot});
    if (!b.empty()) bounded_dims_.insert(dim);
  }

  void erase_bounds(int dim, const Interval& iv, int slot) {
    DimBounds& b = dims_[static_cast<std::size_t>(dim)];
    if (iv.lo != -kInf) b.lowers.erase(b.lowers.find({iv.lo, slot}));
    if (iv.hi != kInf) b.uppers.erase(b.uppers.find({iv.hi, slot}));
    if (b.empty()) bounded_dims_.erase(dim);
  }

  std::vector<DimBounds> dims_;
  std::set<int> bounded_dims_;
  std::vector<Box> boxes_;
};

}  // namespace lta

#endif  // LTA_SORTED_BOX_CACHE_HPP
