#include "lta/benchmark.hpp"

#include "lta/baselines.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

namespace lta {

namespace {

AttackConfig attack_config(const ReportConfig& c) {
  AttackConfig a;
  a.norm = c.norm;
  a.num_initial = c.num_initial;
  a.max_redraws = c.max_redraws;
  a.binary_search_tol = c.binary_search_tol;
  a.epsilon = c.epsilon;
  a.noise_escape = c.noise_escape;
  a.noise_flip_prob = c.noise_flip_prob;
  a.noise_trials = c.noise_trials;
  a.noise_stddev = c.noise_stddev;
  a.early_cutoff = c.early_cutoff;
  a.seed = c.seed;
  return a;
}

void fill_from_multistart(ExampleRecord& r, const MultistartResult& res, Norm norm) {
  r.already_misclassified = res.already_misclassified;
  r.found = res.found;
  if (res.found) {
    r.distance = res.best.dist.primary;
    r.tiebreak_l2 = res.best.dist.l2;
    r.measured = res.measured;
    r.measured_primary = measured_primary(res.measured, norm);
  }
  r.initial_distance = res.initial_primary;
  r.iterations = res.stats.iterations;
  if (res.stats.iterations > 0) {
    r.tbound_mean = static_cast<double>(res.stats.tbound_sum) / res.stats.iterations;
    r.neighbor_bound_mean =
        static_cast<double>(res.stats.neighbor_bound_sum) / res.stats.iterations;
  }
  if (res.stats.n1_tree_visits > 0)
    r.n1_mean = static_cast<double>(res.stats.n1_sum) / res.stats.n1_tree_visits;
  r.starts_attempted = res.starts_attempted;
  r.starts_found = res.starts_found;
}

}  // namespace

BenchmarkReport run_benchmark(const Ensemble& ens, const Dataset& data,
                              const ReportConfig& cfg) {
  const int available = static_cast<int>(data.x.size());
  const int n = cfg.num_examples < 0 ? available : std::min(cfg.num_examples, available);
  const AttackConfig attack = attack_config(cfg);
  const DuplicateGroups groups = duplicate_threshold_groups(ens);

  std::vector<ExampleRecord> records(static_cast<std::size_t>(n));

  const auto process = [&](int i) {
    ExampleRecord& r = records[static_cast<std::size_t>(i)];
    r.index = i;
    r.label = data.y[static_cast<std::size_t>(i)];
    const Vector& x0 = data.x[static_cast<std::size_t>(i)];
    r.predicted = ens.predict_class(x0);

    switch (cfg.kind) {
      case AttackKind::LtAttack:
        fill_from_multistart(
            r, run_multistart(ens, groups, x0, r.label, attack, static_cast<std::uint64_t>(i)),
            cfg.norm);
        break;
      case AttackKind::NaiveLeaf:
      case AttackKind::NaiveFeature:
        fill_from_multistart(
            r,
            run_baseline_multistart(ens,
                                    cfg.kind == AttackKind::NaiveLeaf ? BaselineKind::NaiveLeaf
                                                                      : BaselineKind::NaiveFeature,
                                    x0, r.label, attack, static_cast<std::uint64_t>(i)),
            cfg.norm);
        break;
      case AttackKind::Oracle: {
        if (r.predicted != r.label) {
          r.already_misclassified = true;
          r.found = true;
          r.distance = 0.0;
          r.tiebreak_l2 = 0.0;
          r.measured = MeasuredNorms{};
          r.measured_primary = 0.0;
          r.initial_distance = 0.0;
          break;
        }
        OracleConfig oc;
        oc.norm = cfg.norm;
        oc.epsilon = cfg.epsilon;
        oc.max_partial_states = cfg.oracle_cap;
        const OracleResult o = exact_oracle(ens, x0, r.label, oc);
        if (o.feasible) {
          r.found = true;
          r.distance = o.dist.primary;
          r.tiebreak_l2 = o.dist.l2;
          r.measured = measure_norms(o.point, x0);
          r.measured_primary = measured_primary(r.measured, cfg.norm);
        }
        break;
      }
    }
  };

  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        process(i);
      } catch (const std::exception& e) {
        ExampleRecord& r = records[static_cast<std::size_t>(i)];
        r.index = i;
        r.label = data.y[static_cast<std::size_t>(i)];
        r.found = false;
        r.error = e.what();
      }
      records[static_cast<std::size_t>(i)].wall_time_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
    }
  };

  const int threads = std::max(1, cfg.threads);
  if (threads == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  BenchmarkReport report;
  report.config = cfg;
  report.examples = std::move(records);
  report.aggregate = compute_aggregates(report.examples, cfg.thresholds);
  return report;
}

}  // namespace lta
