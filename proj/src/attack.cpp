#include "lta/attack.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace lta {

namespace {

/**
 * One binding side of the current intersection: the closest point sits
 * exactly on this finite bound, so only trees tied at it can offer
 * strictly closer neighbors along this dimension.
 */
struct Binding {
  int dim = -1;
  double value = 0.0;
  bool lower = false;  // binding at the lower bound (victim on/below it)
  double gap = 0.0;    // |closest[dim] - x0[dim]|
  std::vector<int> slots;
};

std::vector<Binding> collect_bindings(const AttackState& state) {
  const SortedBoxCache& cache = state.cache();
  std::vector<Binding> bindings;
  for (int dim : cache.bounded_dims()) {
    const Interval iv = cache.interval(dim);
    const double xj = state.closest()[dim];
    Binding b;
    if (iv.lo != -kInf && xj == iv.lo) {
      b.lower = true;
      b.value = iv.lo;
    } else if (iv.hi != kInf && xj == iv.hi) {
      b.lower = false;
      b.value = iv.hi;
    } else {
      continue;  // closest point strictly inside: no tree binds here
    }
    b.dim = dim;
    b.gap = state.contribution(dim);
    cache.slots_at_bound(dim, b.value, b.lower, b.slots);
    std::sort(b.slots.begin(), b.slots.end());
    bindings.push_back(std::move(b));
  }
  return bindings;
}

/** Thresholds of the tree strictly inside the slot's complementary box. */
int count_inside_thresholds(const Tree& tree, const SortedBoxCache& cache, int slot) {
  int k = 0;
  for (const TreeNode& nd : tree.nodes) {
    if (nd.is_leaf()) continue;
    const Interval iv = cache.interval_without(nd.feature, slot);
    if (iv.lo < nd.threshold && nd.threshold < iv.hi) ++k;
  }
  return k;
}

/**
 * All single-tree alternatives for one slot: descend the tree against the
 * complementary box (every reachable leaf other than the current one gives
 * a valid tuple by construction) and price each with the canonical
 * distance evaluator. Returns the number of diffs emitted.
 */
int enumerate_tree(AttackState& state, int slot, std::vector<NeighborDiff>& out) {
  const AttackProblem& p = state.problem();
  const SortedBoxCache& cache = state.cache();
  const Tree& tree = p.slot_tree(slot);
  const int cur_leaf = state.leaf_of_slot(slot);
  const double sign = p.slot_sign(slot);
  const double v_old = tree.node(cur_leaf).value;
  const Box& old_box = cache.slot_box(slot);
  int emitted = 0;

  // Path overlay: per feature touched on the current root path, the
  // complementary-box interval narrowed by the path's split constraints.
  std::vector<std::pair<int, Interval>> path;
  std::vector<std::pair<int, Interval>> overrides;
  const auto find_path = [&path](int feature) -> int {
    for (std::size_t i = 0; i < path.size(); ++i)
      if (path[i].first == feature) return static_cast<int>(i);
    return -1;
  };

  const auto emit = [&](int leaf_id, double v_new) {
    overrides.assign(path.begin(), path.end());
    for (const auto& [dim, iv] : old_box.entries()) {
      (void)iv;
      if (find_path(dim) < 0) overrides.push_back({dim, cache.interval_without(dim, slot)});
    }
    NeighborDiff diff;
    diff.changes = {{slot, leaf_id}};
    diff.margin_delta = sign * (v_new - v_old);
    diff.dist = state.eval_override(overrides);
    out.push_back(std::move(diff));
    ++emitted;
  };

  const auto descend = [&](auto&& self, int id) -> void {
    const TreeNode& nd = tree.node(id);
    if (nd.is_leaf()) {
      if (id != cur_leaf) emit(id, nd.value);
      return;
    }
    int pi = find_path(nd.feature);
    Interval base;
    bool pushed = false;
    if (pi >= 0) {
      base = path[static_cast<std::size_t>(pi)].second;
    } else {
      base = cache.interval_without(nd.feature, slot);
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
  return emitted;
}

/**
 * A point strictly inside every active tree's current half-open leaf box,
 * as close to the victim as the open sides allow (closest point with open
 * binding sides nudged in by one representable step).
 */
Vector interior_point(const AttackState& state) {
  Vector x = state.closest();
  const SplitRule rule = state.problem().ens->rule();
  const SortedBoxCache& cache = state.cache();
  for (int dim : cache.bounded_dims()) {
    const Interval iv = cache.interval(dim);
    double& v = x[dim];
    if (rule == SplitRule::LessEqual) {
      if (iv.lo != -kInf && v == iv.lo) v = std::min(iv.hi, std::nextafter(iv.lo, kInf));
    } else {
      if (iv.hi != kInf && v == iv.hi) v = std::max(iv.lo, std::nextafter(iv.hi, -kInf));
    }
  }
  return x;
}

/** Closest coordinate value on the far side of a binding bound. */
double crossed_value(double bound, bool lower, SplitRule rule) {
  if (rule == SplitRule::LessEqual)
    return lower ? bound : std::nextafter(bound, kInf);  // (lo, hi]: lo side open
  return lower ? std::nextafter(bound, -kInf) : bound;   // [lo, hi): hi side open
}

/**
 * Combined move across a threshold value shared by several trees: cross
 * the binding bound by the smallest representable amount and re-descend
 * every tree carrying that exact split. Emits only genuinely combined
 * moves (two or more leaves change); single-leaf crossings are already
 * covered by the per-tree enumeration.
 */
void emit_duplicate_crossing(AttackState& state, const Binding& b, const DuplicateGroups& groups,
                             Vector& interior, bool& interior_ready,
                             std::set<std::vector<std::pair<int, int>>>& seen,
                             std::vector<NeighborDiff>& out) {
  const AttackProblem& p = state.problem();
  const std::vector<int>* grp = groups.find(b.dim, b.value);
  if (!grp) return;
  const SplitRule rule = p.ens->rule();
  if (!interior_ready) {
    interior = interior_point(state);
    interior_ready = true;
  }
  Vector xt = interior;
  xt[b.dim] = crossed_value(b.value, b.lower, rule);

  NeighborDiff diff;
  for (int gt : *grp) {
    const int slot = p.slot_of(gt);
    if (slot < 0) continue;
    const Tree& tree = p.slot_tree(slot);
    const int old_leaf = state.leaf_of_slot(slot);
    const int new_leaf = tree.leaf_of(xt, rule);
    if (new_leaf == old_leaf) continue;
    diff.changes.push_back({slot, new_leaf});
    diff.margin_delta += p.slot_sign(slot) * (tree.node(new_leaf).value - tree.node(old_leaf).value);
  }
  if (diff.changes.size() < 2) return;
  if (!seen.insert(diff.changes).second) return;

  std::vector<int> changed_slots;
  std::vector<int> dims;
  for (const auto& [slot, new_leaf] : diff.changes) {
    changed_slots.push_back(slot);
    for (const auto& e : state.cache().slot_box(slot).entries()) dims.push_back(e.first);
    for (const auto& e : p.slot_tree(slot).leaf_box(new_leaf).entries()) dims.push_back(e.first);
  }
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());

  std::vector<std::pair<int, Interval>> overrides;
  for (int dim : dims) {
    Interval iv = state.cache().interval_without_set(dim, changed_slots);
    for (const auto& [slot, new_leaf] : diff.changes)
      iv = intersect(iv, p.slot_tree(slot).leaf_box(new_leaf).interval(dim));
    if (!nonempty(iv)) return;  // unreachable: the crossing point realizes the tuple
    overrides.push_back({dim, iv});
  }
  diff.dist = state.eval_override(overrides);
  out.push_back(std::move(diff));
}

int bisect_steps(double tol) {
  if (!(tol > 0.0) || tol >= 1.0) return 30;
  const int steps = static_cast<int>(std::ceil(std::log2(1.0 / tol)));
  return std::clamp(steps, 1, 60);
}

}  // namespace

DuplicateGroups duplicate_threshold_groups(const Ensemble& ens) {
  std::map<std::pair<int, double>, std::vector<int>> all;
  for (int t = 0; t < ens.num_trees(); ++t) {
    for (const TreeNode& nd : ens.tree(t).nodes) {
      if (nd.is_leaf()) continue;
      std::vector<int>& trees = all[{nd.feature, nd.threshold}];
      if (trees.empty() || trees.back() != t) trees.push_back(t);
    }
  }
  DuplicateGroups groups;
  for (auto& [key, trees] : all)
    if (trees.size() >= 2) groups.groups.emplace(key, std::move(trees));
  return groups;
}

std::vector<int> bound_trees(const AttackState& state) {
  std::vector<int> slots;
  for (const Binding& b : collect_bindings(state))
    slots.insert(slots.end(), b.slots.begin(), b.slots.end());
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  return slots;
}

std::vector<NeighborDiff> neighbor_bound(AttackState& state, const AttackConfig& cfg,
                                         const DuplicateGroups& groups, IterationRecord* record) {
  const AttackProblem& p = state.problem();
  std::vector<Binding> bindings = collect_bindings(state);
  if (cfg.early_cutoff) {
    // Most promising features first: largest pending movement |x'-x0|,
    // ties by ascending feature index.
    std::stable_sort(bindings.begin(), bindings.end(), [](const Binding& a, const Binding& b) {
      if (a.gap != b.gap) return a.gap > b.gap;
      return a.dim < b.dim;
    });
  }

  std::vector<NeighborDiff> out;
  std::vector<char> visited(static_cast<std::size_t>(p.num_slots()), 0);
  std::set<std::vector<std::pair<int, int>>> multi_seen;
  Vector interior;
  bool interior_ready = false;
  const LexDist cur = state.dist();

  int tbound = 0;
  std::size_t scanned = 0;
  bool improving = false;
  for (const Binding& b : bindings) {
    for (int slot : b.slots) {
      if (visited[static_cast<std::size_t>(slot)]) continue;
      visited[static_cast<std::size_t>(slot)] = 1;
      ++tbound;
      const int n1 = enumerate_tree(state, slot, out);
      if (record) {
        const int k = cfg.collect_stats
                          ? count_inside_thresholds(p.slot_tree(slot), state.cache(), slot)
                          : -1;
        record->per_tree.push_back({k, n1});
      }
    }
    emit_duplicate_crossing(state, b, groups, interior, interior_ready, multi_seen, out);
    if (cfg.early_cutoff) {
      for (; scanned < out.size(); ++scanned)
        if (out[scanned].dist < cur) improving = true;
      if (improving) break;
    }
  }
  if (record) {
    record->tbound = tbound;
    record->neighbor_total = static_cast<int>(out.size());
  }
  return out;
}

StartOutcome lt_attack(const AttackProblem& problem, const Vector& x_init,
                       const AttackConfig& cfg, const DuplicateGroups& groups) {
  StartOutcome out;
  out.active = problem.active;
  out.adv_class = problem.adv_class;
  out.initial_primary = measured_primary(measure_norms(x_init, problem.x0), cfg.norm);

  AttackState state(problem, problem.slot_tuple(x_init));
  if (!problem.margin_is_adversarial(state.margin())) {
    // Possible only for multiclass argmax ties at the starting point.
    return out;
  }

  AttackStats& stats = out.stats;
  std::vector<const NeighborDiff*> cands;
  while (true) {
    ++stats.iterations;
    IterationRecord rec;
    std::vector<NeighborDiff> diffs = neighbor_bound(state, cfg, groups, &rec);
    stats.tbound_sum += rec.tbound;
    stats.neighbor_bound_sum += rec.neighbor_total;
    stats.n1_tree_visits += static_cast<long>(rec.per_tree.size());
    for (const auto& pt : rec.per_tree) stats.n1_sum += pt.second;
    if (cfg.collect_stats) stats.per_iteration.push_back(std::move(rec));

    // Keep strictly closer candidates whose screened margin stays
    // adversarial, then confirm the winner with a canonical recompute
    // (falling through to the next candidate on the rare screen/exact
    // disagreement at the margin boundary).
    cands.clear();
    for (const NeighborDiff& d : diffs) {
      if (!(d.dist < state.dist())) continue;
      if (!problem.margin_is_adversarial(state.margin() + d.margin_delta)) continue;
      cands.push_back(&d);
    }
    std::sort(cands.begin(), cands.end(), [](const NeighborDiff* a, const NeighborDiff* b) {
      if (a->dist < b->dist) return true;
      if (b->dist < a->dist) return false;
      return tie_before(*a, *b);
    });
    const NeighborDiff* chosen = nullptr;
    std::vector<int> leaves;
    for (const NeighborDiff* c : cands) {
      leaves = state.leaves();
      for (const auto& [slot, new_leaf] : c->changes)
        leaves[static_cast<std::size_t>(slot)] = new_leaf;
      if (problem.margin_is_adversarial(problem.reduced_margin(leaves))) {
        chosen = c;
        break;
      }
    }
    if (!chosen) break;
    state.apply(*chosen);
  }

  out.dist = state.dist();
  out.leaves = state.leaves();
  out.point = state.materialized(cfg.epsilon);
  out.found = problem.point_is_adversarial(out.point);
  return out;
}

std::optional<Vector> generate_initial(const Ensemble& ens, const Vector& x0, int y0,
                                       const AttackConfig& cfg, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int d = ens.num_features();
  for (int draw = 0; draw < cfg.max_redraws; ++draw) {
    Vector x = x0;
    for (int i = 0; i < d; ++i) x[i] += gauss(rng);
    if (ens.predict_class(x) == y0) continue;

    // Bisect the segment toward the victim, keeping the adversarial
    // endpoint; the returned point is one that was actually classified.
    const Vector step = x - x0;
    Vector adv = x;
    double lo = 0.0, hi = 1.0;
    const int steps = bisect_steps(cfg.binary_search_tol);
    for (int s = 0; s < steps; ++s) {
      const double mid = 0.5 * (lo + hi);
      Vector xm = x0 + mid * step;
      if (ens.predict_class(xm) != y0) {
        hi = mid;
        adv = std::move(xm);
      } else {
        lo = mid;
      }
    }
    return adv;
  }
  return std::nullopt;
}

StartOutcome noise_escape(const Ensemble& ens, const Vector& x0, int y0, StartOutcome best,
                          const AttackConfig& cfg, const DuplicateGroups& groups,
                          std::mt19937_64& rng) {
  if (!best.found || cfg.noise_trials <= 0) return best;
  std::bernoulli_distribution flip(cfg.noise_flip_prob);
  std::normal_distribution<double> gauss(0.0, cfg.noise_stddev);
  const int d = ens.num_features();

  int trial = 0;
  while (trial < cfg.noise_trials) {
    ++trial;
    Vector cand = best.point;
    for (int i = 0; i < d; ++i)
      if (flip(rng)) cand[i] += gauss(rng);
    if (ens.predict_class(cand) == y0) continue;

    const AttackProblem problem = make_problem(ens, x0, y0, cfg.norm, cand);
    StartOutcome retry = lt_attack(problem, cand, cfg, groups);
    AttackStats merged = best.stats;
    merged.merge(retry.stats);
    if (retry.found && retry.dist < best.dist) {
      retry.initial_primary = best.initial_primary;
      retry.stats = std::move(merged);
      best = std::move(retry);
      trial = 0;  // a strict improvement refreshes the trial budget
    } else {
      best.stats = std::move(merged);
    }
  }
  return best;
}

MultistartResult run_multistart(const Ensemble& ens, const DuplicateGroups& groups,
                                const Vector& x0, int y0, const AttackConfig& cfg,
                                std::uint64_t example_index) {
  MultistartResult res;
  if (ens.predict_class(x0) != y0) {
    // Already misclassified: the victim itself is adversarial at distance 0.
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

    const AttackProblem problem = make_problem(ens, x0, y0, cfg.norm, *x_init);
    StartOutcome outcome = lt_attack(problem, *x_init, cfg, groups);
    if (cfg.noise_escape) outcome = noise_escape(ens, x0, y0, std::move(outcome), cfg, groups, rng);

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

}  // namespace lta
