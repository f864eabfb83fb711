/**
 * \file types.hpp
 *
 * Shared value types for the leaf-tuple attack engine: the dense feature
 * vector alias, norm selection, split-comparison convention, and the
 * lexicographic distance pair used for every "smaller perturbation"
 * comparison in the library.
 */

#ifndef LTA_TYPES_HPP
#define LTA_TYPES_HPP

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <limits>

namespace lta {

using Vector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/** Norm minimized by an attack. The l2 norm always serves as tie-breaker. */
enum class Norm { L1, L2, LInf };

/**
 * Split comparison convention of a model.
 *
 * - LessEqual: x[f] <= threshold goes left; leaf regions are (lo, hi] per
 *   dimension (lower bound open, upper bound closed).
 * - Less: x[f] < threshold goes left (XGBoost dumps); leaf regions are
 *   [lo, hi) per dimension (lower bound closed, upper bound open).
 */
enum class SplitRule { LessEqual, Less };

/**
 * Distance of a candidate from the victim point as a lexicographic pair:
 * the primary norm value first, the l2 value as tie-breaker. All
 * comparisons are exact on the stored doubles.
 */
struct LexDist {
  double primary = kInf;
  double l2 = kInf;

  friend bool operator==(const LexDist& a, const LexDist& b) {
    return a.primary == b.primary && a.l2 == b.l2;
  }
  friend bool operator<(const LexDist& a, const LexDist& b) {
    if (a.primary != b.primary) return a.primary < b.primary;
    return a.l2 < b.l2;
  }
  friend bool operator<=(const LexDist& a, const LexDist& b) {
    return a < b || a == b;
  }
};

/** Deterministic 64-bit mix used to derive per-(example, start) RNG seeds. */
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1) + 0xbf58476d1ce4e5b9ULL * (c + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace lta

#endif  // LTA_TYPES_HPP
