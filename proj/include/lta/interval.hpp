/**
 * \file interval.hpp
 *
 * One-dimensional half-open intervals. The stored numbers are identical for
 * both split conventions; which end is open only matters for membership
 * tests and materialization, so those take the SplitRule explicitly.
 * An interval is non-empty iff lo < hi (one end is always open, so lo == hi
 * means empty under either convention).
 */

#ifndef LTA_INTERVAL_HPP
#define LTA_INTERVAL_HPP

#include "lta/types.hpp"

#include <algorithm>
#include <cmath>

namespace lta {

struct Interval {
  double lo = -kInf;
  double hi = kInf;

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline bool is_unbounded(const Interval& iv) { return iv.lo == -kInf && iv.hi == kInf; }

inline bool nonempty(const Interval& iv) { return iv.lo < iv.hi; }

inline Interval intersect(const Interval& a, const Interval& b) {
  return Interval{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

/** Closest point of the interval's closure to x (the distance infimum). */
inline double clamp_closure(const Interval& iv, double x) {
  return std::min(iv.hi, std::max(iv.lo, x));
}

/** Strict membership under the model's split convention. */
inline bool contains(const Interval& iv, double x, SplitRule rule) {
  if (rule == SplitRule::LessEqual) return iv.lo < x && x <= iv.hi;
  return iv.lo <= x && x < iv.hi;
}

/**
 * Point of the (non-empty) interval closest to x with the open end nudged
 * inward by eps so the result lies strictly inside the half-open interval.
 * The closed end is kept exact. Falls back to the next representable value
 * when eps underflows against a large bound.
 */
inline double materialize(const Interval& iv, double x, double eps, SplitRule rule) {
  if (rule == SplitRule::LessEqual) {
    double p = std::min(iv.hi, std::max(iv.lo + eps, x));
    if (!(p > iv.lo)) p = std::nextafter(iv.lo, kInf);
    return p;
  }
  double p = std::max(iv.lo, std::min(iv.hi - eps, x));
  if (!(p < iv.hi)) p = std::nextafter(iv.hi, -kInf);
  return p;
}

/** A representative strictly inside the half-open interval. */
inline double representative(const Interval& iv, SplitRule rule) {
  const bool lo_finite = std::isfinite(iv.lo);
  const bool hi_finite = std::isfinite(iv.hi);
  if (!lo_finite && !hi_finite) return 0.0;
  if (rule == SplitRule::LessEqual) {
    if (!hi_finite) {
      double p = iv.lo + 1.0;
      return p > iv.lo ? p : std::nextafter(iv.lo, kInf);
    }
    if (!lo_finite) return iv.hi;
    double mid = iv.lo + (iv.hi - iv.lo) / 2.0;
    return (mid > iv.lo && mid <= iv.hi) ? mid : iv.hi;
  }
  if (!lo_finite) {
    double p = iv.hi - 1.0;
    return p < iv.hi ? p : std::nextafter(iv.hi, -kInf);
  }
  if (!hi_finite) return iv.lo;
  double mid = iv.lo + (iv.hi - iv.lo) / 2.0;
  return (mid >= iv.lo && mid < iv.hi) ? mid : iv.lo;
}

}  // namespace lta

#endif  // LTA_INTERVAL_HPP
