#include "lta/baselines.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace lta {

namespace {

/** Leaves of the tree whose box overlaps `box`, in left-to-right order. */
void reachable_leaves(const Tree& tree, const Box& box, std::vector<int>& out) {
  std::vector<std::pair<int, Interval>> path;
  const auto find_path = [&path](int feature) -> int {
    for (std::size_t i = 0; i < path.size(); ++i)
      if (path[i].first == feature) return static_cast<int>(i);
    return -1;
  };
  const auto descend = [&](auto&& self, int id) -> void {
    const TreeNode& nd = tree.node(id);
    if (nd.is_leaf()) {
      out.push_back(id);
      return;
    }
    int pi = find_path(nd.feature);
    Interval base;
    bool pushed = false;
    if (pi >= 0) {
      base = path[static_cast<std::size_t>(pi)].second;
    } else {
      base = box.interval(nd.feature);
      path.push_back({nd.feature, base});
      pi = static_cast<int>(path.size()) - 1;
      pushed = true;
    }
    if (base.lo < nd.threshold) {
      path[static_cast<std::size_t>(pi)].second = {base.lo, std::min(base.hi, nd.threshold)};
      self(self, nd.left);
    }
    if (nd.threshold < base.hi) {
      path[static_cast<std::size_t>(pi)].second = {std::max(base.lo, nd.threshold), base.hi};
      self(self, nd.right);
    }
    if (pushed) {
      path.pop_back();
    } else {
      path[static_cast<std::size_t>(pi)].second = base;
    }
  };
  descend(descend, tree.root);
}

LexDist measured_dist(const Vector& x, const Vector& x0, Norm norm) {
  const MeasuredNorms m = measure_norms(x, x0);
  return LexDist{measured_primary(m, norm), m.l2};
}

}  // namespace

Box tuple_box(const Ensemble& ens, const std::vector<int>& leaves) {
  Box box;
  for (int t = 0; t < ens.num_trees(); ++t) {
    box = intersect(box, ens.tree(t).leaf_box(leaves[static_cast<std::size_t>(t)]));
    if (box.empty()) return box;
  }
  return box;
}

bool tuple_valid(const Ensemble& ens, const std::vector<int>& leaves) {
  return !tuple_box(ens, leaves).empty();
}

bool tuple_valid_pairwise(const Ensemble& ens, const std::vector<int>& leaves) {
  for (int a = 0; a < ens.num_trees(); ++a)
    for (int b = a + 1; b < ens.num_trees(); ++b) {
      const Box ab = intersect(ens.tree(a).leaf_box(leaves[static_cast<std::size_t>(a)]),
                               ens.tree(b).leaf_box(leaves[static_cast<std::size_t>(b)]));
      if (ab.empty()) return false;
    }
  return true;
}

std::vector<std::vector<int>> enumerate_neighbor1(const Ensemble& ens,
                                                  const std::vector<int>& leaves) {
  const int K = ens.num_trees();
  if (static_cast<int>(leaves.size()) != K)
    throw std::invalid_argument("tuple size does not match the ensemble");
  if (!tuple_valid(ens, leaves)) throw std::invalid_argument("input tuple is invalid");

  // Intersection of all boxes except tree t, via prefix/suffix products.
  std::vector<Box> prefix(static_cast<std::size_t>(K) + 1);
  std::vector<Box> suffix(static_cast<std::size_t>(K) + 1);
  for (int t = 0; t < K; ++t)
    prefix[static_cast<std::size_t>(t) + 1] =
        intersect(prefix[static_cast<std::size_t>(t)],
                  ens.tree(t).leaf_box(leaves[static_cast<std::size_t>(t)]));
  for (int t = K - 1; t >= 0; --t)
    suffix[static_cast<std::size_t>(t)] =
        intersect(suffix[static_cast<std::size_t>(t) + 1],
                  ens.tree(t).leaf_box(leaves[static_cast<std::size_t>(t)]));

  std::vector<std::vector<int>> out;
  for (int t = 0; t < K; ++t) {
    const Box others =
        intersect(prefix[static_cast<std::size_t>(t)], suffix[static_cast<std::size_t>(t) + 1]);
    for (int leaf : ens.tree(t).leaves()) {
      if (leaf == leaves[static_cast<std::size_t>(t)]) continue;
      if (intersect(others, ens.tree(t).leaf_box(leaf)).empty()) continue;
      std::vector<int> nb = leaves;
      nb[static_cast<std::size_t>(t)] = leaf;
      out.push_back(std::move(nb));
    }
  }
  return out;
}

OracleResult exact_oracle(const Ensemble& ens, const Vector& x0, int y0,
                          const OracleConfig& cfg) {
  const int K = ens.num_trees();
  DistanceEvaluator ev(x0, cfg.norm);
  OracleResult res;
  std::vector<int> assigned(static_cast<std::size_t>(K), -1);
  std::vector<char> done(static_cast<std::size_t>(K), 0);

  const auto dfs = [&](auto&& self, const Box& cur, int depth) -> void {
    if (++res.explored > cfg.max_partial_states)
      throw std::runtime_error(
          "exact enumeration cap exceeded: instance too large for brute force");
    if (depth == K) {
      ++res.valid_tuples;
      if (ens.predict_class_of(assigned) == y0) return;
      const LexDist d = ev.eval(cur);
      if (!res.feasible || d < res.dist) {
        res.feasible = true;
        res.dist = d;
        res.leaves = assigned;
      }
      return;
    }
    // Fail-first: expand the tree with the fewest reachable leaves.
    int pick = -1;
    std::vector<int> pick_leaves;
    std::vector<int> scratch;
    for (int t = 0; t < K; ++t) {
      if (done[static_cast<std::size_t>(t)]) continue;
      scratch.clear();
      reachable_leaves(ens.tree(t), cur, scratch);
      if (pick < 0 || scratch.size() < pick_leaves.size()) {
        pick = t;
        pick_leaves = scratch;
      }
    }
    done[static_cast<std::size_t>(pick)] = 1;
    for (int leaf : pick_leaves) {
      const Box next = intersect(cur, ens.tree(pick).leaf_box(leaf));
      if (next.empty()) continue;
      assigned[static_cast<std::size_t>(pick)] = leaf;
      self(self, next, depth + 1);
    }
    assigned[static_cast<std::size_t>(pick)] = -1;
    done[static_cast<std::size_t>(pick)] = 0;
  };
  dfs(dfs, Box{}, 0);

  if (res.feasible)
    res.point = materialize(tuple_box(ens, res.leaves), x0, cfg.epsilon, ens.rule());
  return res;
}

std::vector<Vector> naive_leaf_neighbors(const Ensemble& ens, const Vector& x_cur, double eps) {
  std::vector<Vector> out;
  for (int t = 0; t < ens.num_trees(); ++t) {
    const Tree& tree = ens.tree(t);
    const int cur = tree.leaf_of(x_cur, ens.rule());
    for (int leaf : tree.leaves()) {
      if (leaf == cur) continue;
      Vector x = x_cur;
      for (const auto& [dim, iv] : tree.leaf_box(leaf).entries())
        x[dim] = materialize(iv, x[dim], eps, ens.rule());
      out.push_back(std::move(x));
    }
  }
  return out;
}

std::vector<Vector> naive_feature_step(const Ensemble& ens, const Vector& x_cur, double eps) {
  const Box box = tuple_box(ens, ens.leaf_tuple(x_cur));
  const SplitRule rule = ens.rule();
  std::vector<Vector> out;
  for (const auto& [dim, iv] : box.entries()) {
    if (iv.lo != -kInf) {
      // Below the lower bound: the bound itself is already outside a
      // left-open box; step eps past a closed one.
      Vector x = x_cur;
      x[dim] = rule == SplitRule::LessEqual ? iv.lo : iv.lo - eps;
      out.push_back(std::move(x));
    }
    if (iv.hi != kInf) {
      Vector x = x_cur;
      x[dim] = rule == SplitRule::LessEqual ? iv.hi + eps : iv.hi;
      out.push_back(std::move(x));
    }
  }
  return out;
}

namespace {

StartOutcome greedy_point_attack(const Ensemble& ens, BaselineKind kind, const Vector& x0,
                                 int y0, const AttackConfig& cfg, Vector x_cur) {
  // Strict improvement at every step keeps the loop monotone; the cap only
  // guards against asymptotic creep of ever-smaller accepted moves.
  constexpr long kMaxIterations = 10000;
  StartOutcome out;
  LexDist cur = measured_dist(x_cur, x0, cfg.norm);
  long iters = 0;
  while (iters < kMaxIterations) {
    ++iters;
    const std::vector<Vector> cands = kind == BaselineKind::NaiveLeaf
                                          ? naive_leaf_neighbors(ens, x_cur, cfg.epsilon)
                                          : naive_feature_step(ens, x_cur, cfg.epsilon);
    const Vector* best = nullptr;
    LexDist best_dist;
    for (const Vector& c : cands) {
      const LexDist d = measured_dist(c, x0, cfg.norm);
      if (!(d < cur)) continue;
      if (best && !(d < best_dist)) continue;
      if (ens.predict_class(c) == y0) continue;
      best = &c;
      best_dist = d;
    }
    if (!best) break;
    x_cur = *best;
    cur = best_dist;
  }
  out.found = ens.predict_class(x_cur) != y0;
  out.point = std::move(x_cur);
  out.dist = cur;
  out.leaves = ens.leaf_tuple(out.point);
  out.active.resize(static_cast<std::size_t>(ens.num_trees()));
  for (int t = 0; t < ens.num_trees(); ++t) out.active[static_cast<std::size_t>(t)] = t;
  out.adv_class = ens.predict_class(out.point);
  out.stats.iterations = iters;
  return out;
}

}  // namespace

MultistartResult run_baseline_multistart(const Ensemble& ens, BaselineKind kind,
                                         const Vector& x0, int y0, const AttackConfig& cfg,
                                         std::uint64_t example_index) {
  MultistartResult res;
  if (ens.predict_class(x0) != y0) {
    res.found = true;
    res.already_misclassified = true;
    res.best.found = true;
    res.best.dist = LexDist{0.0, 0.0};
    res.best.point = x0;
    res.best.adv_class = ens.predict_class(x0);
    res.best.initial_primary = 0.0;
    res.initial_primary = 0.0;
    res.measured = MeasuredNorms{};
    return res;
  }

  for (int start = 0; start < cfg.num_initial; ++start) {
    std::mt19937_64 rng(mix_seed(cfg.seed, example_index, static_cast<std::uint64_t>(start)));
    ++res.starts_attempted;
    const std::optional<Vector> x_init = generate_initial(ens, x0, y0, cfg, rng);
    if (!x_init) continue;

    StartOutcome outcome = greedy_point_attack(ens, kind, x0, y0, cfg, *x_init);
    outcome.initial_primary = measured_primary(measure_norms(*x_init, x0), cfg.norm);

    res.stats.merge(outcome.stats);
    res.initial_primary = std::min(res.initial_primary, outcome.initial_primary);
    if (outcome.found) {
      ++res.starts_found;
      if (!res.found || outcome.dist < res.best.dist) {
        res.found = true;
        res.best = std::move(outcome);
      }
    }
  }
  if (res.found) res.measured = measure_norms(res.best.point, x0);
  return res;
}

ConvergenceCheck verify_convergence_guarantee(const Ensemble& ens,
                                              const std::vector<int>& leaves,
                                              const Vector& x0, int y0, Norm norm) {
  const int K = ens.num_trees();
  DistanceEvaluator ev(x0, norm);
  const LexDist base = ev.eval(tuple_box(ens, leaves));

  ConvergenceCheck chk;
  chk.candidate_leaves.resize(static_cast<std::size_t>(K));
  for (int t = 0; t < K; ++t)
    chk.candidate_leaves[static_cast<std::size_t>(t)] = {leaves[static_cast<std::size_t>(t)]};

  for (const std::vector<int>& nb : enumerate_neighbor1(ens, leaves)) {
    if (!(ev.eval(tuple_box(ens, nb)) < base)) continue;
    for (int t = 0; t < K; ++t) {
      if (nb[static_cast<std::size_t>(t)] == leaves[static_cast<std::size_t>(t)]) continue;
      std::vector<int>& cand = chk.candidate_leaves[static_cast<std::size_t>(t)];
      if (std::find(cand.begin(), cand.end(), nb[static_cast<std::size_t>(t)]) == cand.end())
        cand.push_back(nb[static_cast<std::size_t>(t)]);
      break;  // a Hamming-1 neighbor differs in exactly one tree
    }
  }
  for (auto& cand : chk.candidate_leaves) std::sort(cand.begin(), cand.end());

  chk.combos_checked = 1;
  for (const auto& cand : chk.candidate_leaves) {
    chk.combos_checked *= static_cast<std::uint64_t>(cand.size());
    if (chk.combos_checked > (std::uint64_t{1} << 40)) break;  // saturate, display only
  }

  std::vector<int> combo(static_cast<std::size_t>(K));
  const auto rec = [&](auto&& self, const Box& cur, int t) -> void {
    if (t == K) {
      ++chk.valid_combos;
      if (ens.predict_class_of(combo) == y0) return;
      ++chk.adversarial_combos;
      const LexDist d = ev.eval(cur);
      if (d < chk.best_combo) chk.best_combo = d;
      if (d < base) chk.holds = false;
      return;
    }
    for (int leaf : chk.candidate_leaves[static_cast<std::size_t>(t)]) {
      const Box next = intersect(cur, ens.tree(t).leaf_box(leaf));
      if (next.empty()) continue;
      combo[static_cast<std::size_t>(t)] = leaf;
      self(self, next, t + 1);
    }
  };
  rec(rec, Box{}, 0);
  return chk;
}

EstimatorResult estimate_neighborhood_distance(const Ensemble& ens, const Vector& x_our,
                                               const Vector& x_star, const Vector& x0, int y0,
                                               const EstimatorConfig& cfg) {
  const int adv_class = ens.predict_class(x_star);
  if (adv_class == y0 || ens.predict_class(x_our) != adv_class)
    throw std::invalid_argument(
        "estimator requires both points adversarial with the same predicted class");

  const std::vector<int> c_our = ens.leaf_tuple(x_our);
  const std::vector<int> c_star = ens.leaf_tuple(x_star);
  DistanceEvaluator ev(x0, cfg.norm);
  const LexDist r_star = ev.eval(tuple_box(ens, c_star));
  const LexDist r_our = ev.eval(tuple_box(ens, c_our));

  std::vector<int> diff_slots;
  for (int t = 0; t < ens.num_trees(); ++t)
    if (c_our[static_cast<std::size_t>(t)] != c_star[static_cast<std::size_t>(t)])
      diff_slots.push_back(t);

  EstimatorResult res;
  res.h_bar = static_cast<int>(diff_slots.size());
  res.h_estimate = res.h_bar;
  if (diff_slots.empty()) return res;

  // Margin gain toward the adversarial class when tree t switches to the
  // optimum's leaf; converting positive-gain trees first restores
  // adversariality fastest.
  const auto gain = [&](int t) {
    const double dv = ens.tree(t).node(c_star[static_cast<std::size_t>(t)]).value -
                      ens.tree(t).node(c_our[static_cast<std::size_t>(t)]).value;
    if (ens.num_classes() == 2) return y0 == 1 ? -dv : dv;
    if (ens.class_of_tree(t) == adv_class) return dv;
    if (ens.class_of_tree(t) == y0) return -dv;
    return 0.0;
  };

  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(trial), 0));
    std::vector<int> pending = diff_slots;
    std::shuffle(pending.begin(), pending.end(), rng);

    std::vector<int> cur = c_our;
    LexDist r_last = r_our;
    std::vector<std::vector<std::pair<int, int>>> schedule;
    std::vector<std::pair<int, int>> burst;
    int max_burst = 0;

    while (!pending.empty()) {
      std::size_t pick = 0;
      for (std::size_t i = 0; i < pending.size(); ++i)
        if (gain(pending[i]) > 0.0) {
          pick = i;
          break;
        }
      const int t = pending[pick];
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(pick));
      cur[static_cast<std::size_t>(t)] = c_star[static_cast<std::size_t>(t)];
      burst.push_back({t, c_star[static_cast<std::size_t>(t)]});

      const Box box = tuple_box(ens, cur);
      if (box.empty()) continue;
      if (ens.predict_class_of(cur) == y0) continue;
      const LexDist d = ev.eval(box);
      if (!(r_star <= d && d < r_last)) continue;
      max_burst = std::max(max_burst, static_cast<int>(burst.size()));
      schedule.push_back(std::move(burst));
      burst.clear();
      r_last = d;
    }

    const bool complete = burst.empty();
    const int trial_h = complete ? max_burst : res.h_bar;
    if (trial_h < res.h_estimate ||
        (trial_h == res.h_estimate && complete && res.best_schedule.empty())) {
      res.h_estimate = trial_h;
      res.best_schedule = complete ? schedule : std::vector<std::vector<std::pair<int, int>>>{};
    }
  }
  return res;
}

}  // namespace lta
