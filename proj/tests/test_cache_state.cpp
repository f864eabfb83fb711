/**
 * \file test_cache_state.cpp
 *
 * The sorted bound cache and the incremental attack state, checked against
 * from-scratch recomputation. The core claims are bit-exactness ones: any
 * value reached through incremental updates equals the value a fresh
 * rebuild computes, down to the last bit.
 */

#include <doctest.h>

#include "fixtures.hpp"
#include "lta/attack_state.hpp"

#include <random>

using namespace lta;
using fixtures::demo_ensemble;
using fixtures::demo_tuple;
using fixtures::vec2;

namespace {

/** Random box over d dims: each dim unbounded, half-bounded, or bounded. */
Box random_box(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  Box b;
  for (int dim = 0; dim < d; ++dim) {
    const int kind = static_cast<int>(rng() % 4);
    if (kind == 0) continue;
    double a = u(rng), c = u(rng);
    if (a > c) std::swap(a, c);
    if (kind == 1) b.constrain(dim, Interval{a, kInf});
    else if (kind == 2) b.constrain(dim, Interval{-kInf, c});
    else if (a < c) b.constrain(dim, Interval{a, c});
  }
  return b;
}

/** From-scratch K-way intersection of a vector of boxes. */
Box naive_intersection(const std::vector<Box>& boxes) {
  Box out;
  for (const Box& b : boxes) out = intersect(out, b);
  return out;
}

}  // namespace

TEST_CASE("cache intersection equals from-scratch K-way intersection") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 4);
    const int k = 2 + static_cast<int>(rng() % 6);
    std::vector<Box> boxes;
    SortedBoxCache cache(d);
    for (int s = 0; s < k; ++s) {
      boxes.push_back(random_box(rng, d));
      cache.add_box(boxes.back());
    }
    REQUIRE(cache.num_slots() == k);
    // Bit-exact equality: bounds are selected, never recombined.
    CHECK(cache.intersection_box() == naive_intersection(boxes));
    for (int dim = 0; dim < d; ++dim) {
      const Interval got = cache.interval(dim);
      const Interval want = naive_intersection(boxes).empty()
                                ? got  // empty boxes do not expose intervals
                                : naive_intersection(boxes).interval(dim);
      if (!naive_intersection(boxes).empty()) CHECK(got == want);
    }
    // Leave-one-out intersections.
    for (int s = 0; s < k; ++s) {
      std::vector<Box> others;
      for (int t = 0; t < k; ++t)
        if (t != s) others.push_back(boxes[static_cast<std::size_t>(t)]);
      CHECK(cache.box_without(s) == naive_intersection(others));
    }
    // Leave-set-out intervals.
    std::vector<int> skip;
    for (int s = 0; s < k; ++s)
      if (rng() % 2 == 0) skip.push_back(s);
    std::vector<Box> kept;
    for (int t = 0; t < k; ++t) {
      bool skipped = false;
      for (int s : skip) skipped = skipped || s == t;
      if (!skipped) kept.push_back(boxes[static_cast<std::size_t>(t)]);
    }
    const Box kept_box = naive_intersection(kept);
    if (!kept_box.empty()) {
      for (int dim = 0; dim < d; ++dim)
        CHECK(cache.interval_without_set(dim, skip) == kept_box.interval(dim));
    }
  }
}

TEST_CASE("100 random replace sequences match naive recomputation bit-for-bit") {
  std::mt19937_64 rng(202);
  for (int sequence = 0; sequence < 100; ++sequence) {
    const int d = 2 + static_cast<int>(rng() % 4);
    const int k = 2 + static_cast<int>(rng() % 6);
    std::vector<Box> boxes;
    SortedBoxCache cache(d);
    for (int s = 0; s < k; ++s) {
      boxes.push_back(random_box(rng, d));
      cache.add_box(boxes.back());
    }
    for (int step = 0; step < 30; ++step) {
      const int slot = static_cast<int>(rng() % static_cast<std::uint64_t>(k));
      const Box replacement = random_box(rng, d);
      cache.replace(slot, replacement);
      boxes[static_cast<std::size_t>(slot)] = replacement;
      // Full rebuild must agree exactly after every single replacement.
      SortedBoxCache fresh(d);
      for (const Box& b : boxes) fresh.add_box(b);
      CHECK(cache.intersection_box() == fresh.intersection_box());
      CHECK(cache.bounded_dims() == fresh.bounded_dims());
      for (int dim : cache.bounded_dims()) {
        CHECK(cache.interval(dim) == fresh.interval(dim));
        for (int s = 0; s < k; ++s)
          CHECK(cache.interval_without(dim, s) == fresh.interval_without(dim, s));
      }
      for (int s = 0; s < k; ++s) CHECK(cache.slot_box(s) == boxes[static_cast<std::size_t>(s)]);
    }
  }
}

TEST_CASE("slots_at_bound reports exactly the tied slots") {
  SortedBoxCache cache(2);
  Box a;
  a.constrain(0, Interval{1.0, 5.0});
  Box b;
  b.constrain(0, Interval{1.0, 7.0});
  Box c;
  c.constrain(0, Interval{0.0, 5.0});
  cache.add_box(a);
  cache.add_box(b);
  cache.add_box(c);
  // Max lower bound on dim 0 is 1.0, contributed by slots 0 and 1.
  std::vector<int> lows;
  cache.slots_at_bound(0, 1.0, true, lows);
  std::sort(lows.begin(), lows.end());
  CHECK(lows == std::vector<int>{0, 1});
  // Min upper bound is 5.0, contributed by slots 0 and 2.
  std::vector<int> highs;
  cache.slots_at_bound(0, 5.0, false, highs);
  std::sort(highs.begin(), highs.end());
  CHECK(highs == std::vector<int>{0, 2});
  // A non-extreme value matches nothing (the walk stops immediately).
  std::vector<int> none;
  cache.slots_at_bound(0, 7.0, false, none);
  CHECK(none.empty());
}

TEST_CASE("attack state exposes hand-computed values on the demo model") {
  const Ensemble ens = demo_ensemble();
  const Vector x0 = vec2(23.0, 23.0);
  // (10,10) realizes the hand-picked non-optimal adversarial tuple.
  const AttackProblem problem = make_problem(ens, x0, 1, Norm::LInf, vec2(10.0, 10.0));
  AttackState state(problem, problem.slot_tuple(vec2(10.0, 10.0)));
  CHECK(state.leaves() == demo_tuple(4, 5, 9));
  CHECK(state.closest() == vec2(10.0, 10.0));
  CHECK(state.dist().primary == 13.0);
  CHECK(state.dist().l2 == std::sqrt(338.0));
  CHECK(state.margin() == 3.0);  // -(raw score) = -(-5 - 1 + 3)
  CHECK(problem.margin_is_adversarial(state.margin()));
  CHECK(state.contribution(0) == 13.0);
  CHECK(state.contribution(1) == 13.0);
  const Box box = state.intersection_box();
  CHECK(box.interval(0) == Interval{3.0, 10.0});
  CHECK(box.interval(1) == Interval{5.0, 10.0});
  // Materialized point stays inside the half-open box, closed ends exact.
  const Vector adv = state.materialized(1e-6);
  CHECK(adv == vec2(10.0, 10.0));
  CHECK(contains(box, adv, ens.rule()));
}

TEST_CASE("applying a valid diff reproduces a fresh rebuild bit-for-bit") {
  // The headline bit-exactness fuzz: thousands of random single- and
  // multi-slot diff applications, each compared field-by-field against an
  // attack state built from scratch at the new tuple.
  std::mt19937_64 rng(303);
  int applications = 0;
  const int target_applications = 10000;
  while (applications < target_applications) {
    const bool lt = rng() % 4 == 0;
    const Ensemble ens = fixtures::random_small_ensemble(
        rng, rng() % 3 == 0, lt ? SplitRule::Less : SplitRule::LessEqual);
    const int d = ens.num_features();
    const Vector x0 = fixtures::random_victim(rng, d);
    const Vector start = fixtures::random_victim(rng, d);
    // Any point is "adversarial" if we declare its complement the label.
    const int y0 = 1 - ens.predict_class(start);
    const AttackProblem problem = make_problem(ens, x0, y0,
        rng() % 3 == 0 ? Norm::L1 : (rng() % 2 == 0 ? Norm::L2 : Norm::LInf), start);
    AttackState state(problem, problem.slot_tuple(start));
    for (int step = 0; step < 40 && applications < target_applications; ++step) {
      NeighborDiff diff;
      if (rng() % 4 != 0) {
        // Random Hamming-1 move from the exhaustive reference enumerator.
        const auto moves = enumerate_neighbor1(ens, state.leaves());
        if (moves.empty()) break;
        const auto& next = moves[rng() % moves.size()];
        for (int slot = 0; slot < problem.num_slots(); ++slot)
          if (next[static_cast<std::size_t>(slot)] != state.leaf_of_slot(slot))
            diff.changes.push_back({slot, next[static_cast<std::size_t>(slot)]});
      } else {
        // Random multi-slot move: redraw up to three slots, keep if valid.
        std::vector<int> cand = state.leaves();
        const int changes = 2 + static_cast<int>(rng() % 2);
        for (int c = 0; c < changes; ++c) {
          const int slot = static_cast<int>(rng() % static_cast<std::uint64_t>(ens.num_trees()));
          const auto& leaves = ens.tree(slot).leaves();
          cand[static_cast<std::size_t>(slot)] = leaves[rng() % leaves.size()];
        }
        if (!tuple_valid(ens, cand)) continue;
        for (int slot = 0; slot < problem.num_slots(); ++slot)
          if (cand[static_cast<std::size_t>(slot)] != state.leaf_of_slot(slot))
            diff.changes.push_back({slot, cand[static_cast<std::size_t>(slot)]});
        if (diff.changes.empty()) continue;
      }
      state.apply(diff);
      ++applications;
      const AttackState fresh(problem, state.leaves());
      CHECK(state.dist().primary == fresh.dist().primary);
      CHECK(state.dist().l2 == fresh.dist().l2);
      CHECK(state.margin() == fresh.margin());
      CHECK(state.closest() == fresh.closest());
      for (int dim = 0; dim < d; ++dim)
        CHECK(state.contribution(dim) == fresh.contribution(dim));
      CHECK(state.intersection_box() == fresh.intersection_box());
    }
  }
  CHECK(applications == target_applications);
}

TEST_CASE("eval_override prices a candidate without disturbing the state") {
  const Ensemble ens = demo_ensemble();
  const Vector x0 = vec2(23.0, 23.0);
  const AttackProblem problem = make_problem(ens, x0, 1, Norm::LInf, vec2(10.0, 10.0));
  AttackState state(problem, problem.slot_tuple(vec2(10.0, 10.0)));
  const LexDist before = state.dist();

  // Price the move tree1: leafid 5 -> 8 (slot 1 node 3 -> node 6). The new
  // intersection on f0 becomes (5,10], on f1 (10, 20].
  const std::vector<std::pair<int, Interval>> overrides = {
      {0, Interval{5.0, 10.0}}, {1, Interval{10.0, 20.0}}};
  const LexDist what_if = state.eval_override(overrides);
  CHECK(what_if.primary == 13.0);
  CHECK(what_if.l2 == std::sqrt(338.0 - 169.0 + 9.0));  // f1 contribution 13 -> 3
  CHECK(state.dist() == before);  // untouched

  // And the priced value matches an actual rebuild at that tuple.
  NeighborDiff diff;
  diff.changes = {{1, 6}};
  state.apply(diff);
  CHECK(state.dist().primary == what_if.primary);
  CHECK(state.dist().l2 == what_if.l2);
}

TEST_CASE("state rejects an application that empties the intersection") {
  const Ensemble ens = demo_ensemble();
  const AttackProblem problem =
      make_problem(ens, vec2(23.0, 23.0), 1, Norm::LInf, vec2(10.0, 10.0));
  AttackState state(problem, problem.slot_tuple(vec2(10.0, 10.0)));
  // tree2 node 5 requires f1 > 20, contradicting tree1 node 3 (f1 <= 10).
  NeighborDiff diff;
  diff.changes = {{2, 5}};
  CHECK_THROWS_AS(state.apply(diff), std::logic_error);
}
