/**
 * \file test_geometry.cpp
 *
 * Intervals, boxes, fixed-shape reductions, and canonical distances: the
 * geometric substrate everything else builds on.
 */

#include <doctest.h>

#include "fixtures.hpp"
#include "lta/distance.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace lta;
using fixtures::vec2;

TEST_CASE("interval basics: emptiness, intersection, membership") {
  const Interval whole;
  CHECK(is_unbounded(whole));
  CHECK(nonempty(whole));

  const Interval iv{1.0, 4.0};
  CHECK(nonempty(iv));
  CHECK_FALSE(nonempty(Interval{4.0, 4.0}));  // one end is always open
  CHECK_FALSE(nonempty(Interval{5.0, 4.0}));

  const Interval isect = intersect(Interval{0.0, 3.0}, Interval{1.0, 7.0});
  CHECK(isect == Interval{1.0, 3.0});

  // (lo, hi] membership under "x <= t goes left".
  CHECK(contains(iv, 4.0, SplitRule::LessEqual));
  CHECK_FALSE(contains(iv, 1.0, SplitRule::LessEqual));
  // [lo, hi) membership under "x < t goes left".
  CHECK(contains(iv, 1.0, SplitRule::Less));
  CHECK_FALSE(contains(iv, 4.0, SplitRule::Less));
}

TEST_CASE("interval closure clamp is the distance infimum") {
  const Interval iv{1.0, 4.0};
  CHECK(clamp_closure(iv, 0.0) == 1.0);
  CHECK(clamp_closure(iv, 9.0) == 4.0);
  CHECK(clamp_closure(iv, 2.5) == 2.5);
  CHECK(clamp_closure(Interval{-kInf, 4.0}, -1e300) == -1e300);
}

TEST_CASE("interval materialization lands strictly inside the half-open set") {
  const double eps = 1e-6;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 2000; ++trial) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    if (!(a < b)) continue;
    const Interval iv{a, b};
    const double x = u(rng);
    for (SplitRule rule : {SplitRule::LessEqual, SplitRule::Less}) {
      const double p = materialize(iv, x, eps, rule);
      CHECK(contains(iv, p, rule));
      // Never farther from x than ~eps past the distance infimum (with
      // headroom for rounding in the comparison arithmetic itself).
      CHECK(std::abs(p - x) - std::abs(clamp_closure(iv, x) - x) <= 1.5 * eps);
    }
  }
  // A point already inside (with margin > eps) is returned untouched.
  const Interval iv{1.0, 4.0};
  CHECK(materialize(iv, 2.5, eps, SplitRule::LessEqual) == 2.5);
  CHECK(materialize(iv, 2.5, eps, SplitRule::Less) == 2.5);
  // The closed end stays exact; the open end is nudged inward.
  CHECK(materialize(iv, 9.0, eps, SplitRule::LessEqual) == 4.0);
  CHECK(materialize(iv, 0.0, eps, SplitRule::LessEqual) == 1.0 + eps);
  CHECK(materialize(iv, 0.0, eps, SplitRule::Less) == 1.0);
  CHECK(materialize(iv, 9.0, eps, SplitRule::Less) == 4.0 - eps);
  // eps wider than the interval falls back to the next representable value.
  const Interval thin{1.0, 1.0 + 1e-12};
  const double p = materialize(thin, 0.0, eps, SplitRule::LessEqual);
  CHECK(contains(thin, p, SplitRule::LessEqual));
}

TEST_CASE("representative is strictly inside under both conventions") {
  for (SplitRule rule : {SplitRule::LessEqual, SplitRule::Less}) {
    for (const Interval iv : {Interval{}, Interval{2.0, kInf}, Interval{-kInf, 2.0},
                              Interval{1.0, 2.0}, Interval{-3.0, -1.0}}) {
      CHECK(contains(iv, representative(iv, rule), rule));
    }
  }
}

TEST_CASE("box constrain merges by intersection and collapses to empty") {
  Box b;
  CHECK_FALSE(b.empty());
  CHECK(b.entries().empty());
  b.constrain(3, Interval{0.0, 5.0});
  b.constrain(1, Interval{-kInf, 2.0});
  REQUIRE(b.entries().size() == 2);
  CHECK(b.entries()[0].first == 1);  // entries stay sorted by dimension
  CHECK(b.entries()[1].first == 3);
  b.constrain(3, Interval{2.0, kInf});
  CHECK(b.interval(3) == Interval{2.0, 5.0});
  CHECK(b.interval(7) == Interval{});  // untouched dims are unbounded

  Box c = b;
  c.constrain(3, Interval{5.0, kInf});  // (5,5] is empty
  CHECK(c.empty());
  c.constrain(0, Interval{0.0, 1.0});  // constraining empty stays empty
  CHECK(c.empty());

  // An unbounded constraint on a fresh dim adds no entry.
  Box d;
  d.constrain(2, Interval{});
  CHECK(d.entries().empty());
}

TEST_CASE("box intersection distributes over entries") {
  Box a;
  a.constrain(0, Interval{0.0, 4.0});
  a.constrain(2, Interval{1.0, kInf});
  Box b;
  b.constrain(0, Interval{2.0, 9.0});
  b.constrain(1, Interval{-kInf, 0.0});
  const Box ab = intersect(a, b);
  CHECK(ab.interval(0) == Interval{2.0, 4.0});
  CHECK(ab.interval(1) == Interval{-kInf, 0.0});
  CHECK(ab.interval(2) == Interval{1.0, kInf});
  CHECK(intersect(a, Box::empty_box()).empty());

  Box conflict;
  conflict.constrain(0, Interval{4.0, 9.0});
  CHECK(intersect(a, conflict).empty());
}

TEST_CASE("box closest point clamps per dimension") {
  Box b;
  b.constrain(0, Interval{5.0, 20.0});
  b.constrain(1, Interval{20.0, kInf});
  const Vector p = closest_point(b, vec2(23.0, 23.0));
  CHECK(p[0] == 20.0);
  CHECK(p[1] == 23.0);
}

TEST_CASE("box materialization lies inside the half-open box") {
  Box b;
  b.constrain(0, Interval{5.0, 20.0});
  b.constrain(1, Interval{20.0, kInf});
  const Vector x0 = vec2(23.0, 23.0);
  const Vector p = materialize(b, x0, 1e-6, SplitRule::LessEqual);
  CHECK(contains(b, p, SplitRule::LessEqual));
  CHECK(p[0] == 20.0);  // closed side: exact
  CHECK(p[1] == 23.0);  // interior: untouched
}

TEST_CASE("fixed-shape reduction matches a fresh fold bit-exactly") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (ReduceOp op : {ReduceOp::Sum, ReduceOp::Max}) {
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t slots = 1 + rng() % 40;
      ReduceTree incremental(slots, op);
      std::vector<double> values(slots, 0.0);
      for (int step = 0; step < 200; ++step) {
        const std::size_t i = rng() % slots;
        const double v = op == ReduceOp::Max ? std::abs(u(rng)) : u(rng);
        values[i] = v;
        incremental.set(i, v);
        ReduceTree fresh(slots, op);
        for (std::size_t j = 0; j < slots; ++j) fresh.set(j, values[j]);
        // Bit-exact: the combine tree's shape is fixed by the slot count.
        CHECK(incremental.total() == fresh.total());
      }
    }
  }
}

TEST_CASE("lexicographic distance ordering") {
  CHECK(LexDist{1.0, 5.0} < LexDist{2.0, 0.0});
  CHECK(LexDist{1.0, 2.0} < LexDist{1.0, 3.0});
  CHECK_FALSE(LexDist{1.0, 3.0} < LexDist{1.0, 3.0});
  CHECK(LexDist{1.0, 3.0} <= LexDist{1.0, 3.0});
  CHECK(LexDist{} == LexDist{kInf, kInf});
  CHECK(LexDist{3.0, 3.0} < LexDist{});  // anything finite beats "no candidate"
}

TEST_CASE("canonical box distance agrees with a manual computation") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 6);
    Vector x0(d);
    for (int j = 0; j < d; ++j) x0[j] = u(rng);
    Box box;
    for (int j = 0; j < d; ++j) {
      if (rng() % 2 == 0) continue;
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      if (!(a < b)) continue;
      box.constrain(j, Interval{rng() % 3 == 0 ? -kInf : a, rng() % 3 == 0 ? kInf : b});
    }
    for (Norm norm : {Norm::L1, Norm::L2, Norm::LInf}) {
      const LexDist got = tuple_distance(box, x0, norm);
      double l1 = 0.0, l2sq = 0.0, linf = 0.0;
      for (const auto& [dim, iv] : box.entries()) {
        const double c = std::abs(clamp_closure(iv, x0[dim]) - x0[dim]);
        l1 += c;
        l2sq += c * c;
        linf = std::max(linf, c);
      }
      const double expect =
          norm == Norm::L1 ? l1 : (norm == Norm::L2 ? std::sqrt(l2sq) : linf);
      CHECK(got.primary == doctest::Approx(expect).epsilon(1e-12));
      CHECK(got.l2 == doctest::Approx(std::sqrt(l2sq)).epsilon(1e-12));
    }
  }
}

TEST_CASE("evaluator reuse leaves no residue between boxes") {
  DistanceEvaluator ev(vec2(1.0, 2.0), Norm::L1);
  Box a;
  a.constrain(0, Interval{5.0, 6.0});
  Box b;
  b.constrain(1, Interval{7.0, 8.0});
  const LexDist da1 = ev.eval(a);
  const LexDist db = ev.eval(b);
  const LexDist da2 = ev.eval(a);
  CHECK(da1.primary == 4.0);
  CHECK(db.primary == 5.0);
  CHECK(da1 == da2);  // slots from the earlier eval were reset
  CHECK(ev.eval(Box::empty_box()) == LexDist{});
}

TEST_CASE("shrinking a box never shrinks its distance") {
  // Monotonicity: constraining further can only move the closest point away.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 3;
    Vector x0(d);
    for (int j = 0; j < d; ++j) x0[j] = u(rng);
    Box box;
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    if (!(a < b)) continue;
    box.constrain(static_cast<int>(rng() % d), Interval{a, b});
    Box tighter = box;
    double c = u(rng), e = u(rng);
    if (c > e) std::swap(c, e);
    if (!(c < e)) continue;
    tighter.constrain(static_cast<int>(rng() % d), Interval{c, e});
    if (tighter.empty()) continue;
    for (Norm norm : {Norm::L1, Norm::L2, Norm::LInf}) {
      CHECK(tuple_distance(box, x0, norm) <= tuple_distance(tighter, x0, norm));
    }
  }
}

TEST_CASE("measured norms match hand computation") {
  const MeasuredNorms m = measure_norms(vec2(20.0, 23.0), vec2(23.0, 23.0));
  CHECK(m.l1 == 3.0);
  CHECK(m.l2 == 3.0);
  CHECK(m.linf == 3.0);
  const MeasuredNorms n = measure_norms(vec2(1.0, -1.0), vec2(0.0, 0.0));
  CHECK(n.l1 == 2.0);
  CHECK(n.l2 == doctest::Approx(std::sqrt(2.0)));
  CHECK(n.linf == 1.0);
  CHECK(measured_primary(n, Norm::L1) == n.l1);
  CHECK(measured_primary(n, Norm::L2) == n.l2);
  CHECK(measured_primary(n, Norm::LInf) == n.linf);
}
