/**
 * \file distance.hpp
 *
 * Canonical tuple-to-victim distances. The distance of a box from the
 * victim is the norm of the per-dimension closure clamps (the infimum over
 * the box; no epsilon enters here). Both the from-scratch evaluator and the
 * attack's incremental bookkeeping feed the same fixed-shape reduction, so
 * the two ways of computing a distance agree bit-exactly.
 */

#ifndef LTA_DISTANCE_HPP
#define LTA_DISTANCE_HPP

#include "lta/box.hpp"
#include "lta/reduce_tree.hpp"
#include "lta/types.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace lta {

/** Per-dimension distance contribution of a box interval. */
inline double dim_contribution(const Interval& iv, double x0j) {
  return std::abs(clamp_closure(iv, x0j) - x0j);
}

/** Primary-norm leaf value for a contribution c (summed or maxed). */
inline double primary_term(double c, Norm norm) {
  return norm == Norm::L2 ? c * c : c;
}

/** Map the reduction total back to the norm's value. */
inline double primary_value(double total, Norm norm) {
  return norm == Norm::L2 ? std::sqrt(total) : total;
}

/**
 * Reusable from-scratch evaluator for lexicographic (primary, l2) box
 * distances against a fixed victim point.
 */
class DistanceEvaluator {
 public:
  DistanceEvaluator(Vector x0, Norm norm)
      : x0_(std::move(x0)),
        norm_(norm),
        primary_(static_cast<std::size_t>(x0_.size()),
                 norm == Norm::LInf ? ReduceOp::Max : ReduceOp::Sum),
        l2_(static_cast<std::size_t>(x0_.size()), ReduceOp::Sum) {}

  const Vector& x0() const { return x0_; }
  Norm norm() const { return norm_; }

  LexDist eval(const Box& box) {
    if (box.empty()) return LexDist{};
    for (const auto& [dim, iv] : box.entries()) {
      const double c = dim_contribution(iv, x0_[dim]);
      primary_.set(static_cast<std::size_t>(dim), primary_term(c, norm_));
      l2_.set(static_cast<std::size_t>(dim), c * c);
    }
    LexDist d{primary_value(primary_.total(), norm_), std::sqrt(l2_.total())};
    for (const auto& [dim, iv] : box.entries()) {
      primary_.set(static_cast<std::size_t>(dim), 0.0);
      l2_.set(static_cast<std::size_t>(dim), 0.0);
    }
    return d;
  }

 private:
  Vector x0_;
  Norm norm_;
  ReduceTree primary_;
  ReduceTree l2_;
};

/** One-shot canonical distance of a box from x0. */
inline LexDist tuple_distance(const Box& box, const Vector& x0, Norm norm) {
  DistanceEvaluator ev(x0, norm);
  return ev.eval(box);
}

/** Measured norms of a concrete perturbation delta = x_adv - x0. */
struct MeasuredNorms {
  double l1 = kInf;
  double l2 = kInf;
  double linf = kInf;
};

inline MeasuredNorms measure_norms(const Vector& x_adv, const Vector& x0) {
  const Vector delta = x_adv - x0;
  return MeasuredNorms{delta.lpNorm<1>(), delta.norm(), delta.lpNorm<Eigen::Infinity>()};
}

inline double measured_primary(const MeasuredNorms& m, Norm norm) {
  switch (norm) {
    case Norm::L1: return m.l1;
    case Norm::L2: return m.l2;
    default: return m.linf;
  }
}

}  // namespace lta

#endif  // LTA_DISTANCE_HPP
