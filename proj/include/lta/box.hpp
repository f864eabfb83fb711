/**
 * \file box.hpp
 *
 * Axis-aligned boxes as sparse maps from feature index to Interval.
 * Dimensions without an entry are unbounded; an interval that becomes
 * degenerate during intersection collapses the whole box into a distinct
 * Empty state (never represented as a stored lo >= hi pair).
 */

#ifndef LTA_BOX_HPP
#define LTA_BOX_HPP

#include "lta/interval.hpp"

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace lta {

class Box {
 public:
  using Entry = std::pair<int, Interval>;

  Box() = default;

  static Box empty_box() {
    Box b;
    b.empty_ = true;
    return b;
  }

  bool empty() const { return empty_; }

  /** Stored (finite-on-at-least-one-side) dimensions, ascending by index. */
  const std::vector<Entry>& entries() const { return dims_; }

  Interval interval(int dim) const {
    auto it = std::lower_bound(dims_.begin(), dims_.end(), dim,
                               [](const Entry& e, int d) { return e.first < d; });
    if (it != dims_.end() && it->first == dim) return it->second;
    return Interval{};
  }

  /**
   * Constrain one dimension. Entries must stay sorted, so repeated sets on
   * the same box should arrive in any order but are merged by intersection.
   * Collapses to Empty when the constraint empties the interval.
   */
  void constrain(int dim, const Interval& iv) {
    if (empty_) return;
    Interval merged = iv;
    auto it = std::lower_bound(dims_.begin(), dims_.end(), dim,
                               [](const Entry& e, int d) { return e.first < d; });
    if (it != dims_.end() && it->first == dim) {
      merged = intersect(it->second, iv);
      if (!nonempty(merged)) {
        *this = empty_box();
        return;
      }
      it->second = merged;
      return;
    }
    if (!nonempty(merged)) {
      *this = empty_box();
      return;
    }
    if (!is_unbounded(merged)) dims_.insert(it, Entry{dim, merged});
  }

  friend bool operator==(const Box& a, const Box& b) {
    if (a.empty_ != b.empty_) return false;
    if (a.empty_) return true;
    return a.dims_ == b.dims_;
  }

 private:
  std::vector<Entry> dims_;
  bool empty_ = false;
};

inline Box intersect(const Box& a, const Box& b) {
  if (a.empty() || b.empty()) return Box::empty_box();
  Box out = a;
  for (const auto& [dim, iv] : b.entries()) out.constrain(dim, iv);
  return out;
}

/** Closest point of the box closure to x0 (per-dimension clamp). */
inline Vector closest_point(const Box& box, const Vector& x0) {
  Vector p = x0;
  for (const auto& [dim, iv] : box.entries()) p[dim] = clamp_closure(iv, x0[dim]);
  return p;
}

inline bool contains(const Box& box, const Vector& x, SplitRule rule) {
  if (box.empty()) return false;
  for (const auto& [dim, iv] : box.entries())
    if (!contains(iv, x[dim], rule)) return false;
  return true;
}

/**
 * Concrete point of the half-open box closest to x0: the closure clamp with
 * every open side nudged inward by eps (closed sides stay exact).
 */
inline Vector materialize(const Box& box, const Vector& x0, double eps, SplitRule rule) {
  Vector p = x0;
  for (const auto& [dim, iv] : box.entries()) p[dim] = materialize(iv, x0[dim], eps, rule);
  return p;
}

/** A point strictly inside the half-open box (unconstrained dims are 0). */
inline Vector representative(const Box& box, int num_features, SplitRule rule) {
  Vector p = Vector::Zero(num_features);
  for (const auto& [dim, iv] : box.entries()) p[dim] = representative(iv, rule);
  return p;
}

}  // namespace lta

#endif  // LTA_BOX_HPP
