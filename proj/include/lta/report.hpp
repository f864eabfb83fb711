/**
 * \file report.hpp
 *
 * Machine-readable benchmark output: one flat record per victim example,
 * aggregates recomputed from those records, and an empirical
 * success-vs-threshold grid. JSON is the authoritative format; CSV carries
 * the per-example rows at full decimal precision. Reports are deterministic
 * given the seed: every field except the wall-time ones is independent of
 * thread count.
 */

#ifndef LTA_REPORT_HPP
#define LTA_REPORT_HPP

#include "lta/distance.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lta {

enum class AttackKind { LtAttack, NaiveLeaf, NaiveFeature, Oracle };

std::string attack_kind_name(AttackKind kind);
AttackKind parse_attack_kind(const std::string& name);
std::string norm_name(Norm norm);
Norm parse_norm(const std::string& name);

struct ExampleRecord {
  int index = 0;
  int label = 0;
  int predicted = 0;
  bool already_misclassified = false;
  bool found = false;
  /** Objective distance of the result tuple (infimum, lexicographic). */
  double distance = kInf;
  double tiebreak_l2 = kInf;
  /** Concrete norms of the materialized point (zeros unless found). */
  MeasuredNorms measured;
  double measured_primary = kInf;
  /** Smallest starting-point distance over the starts (objective norm). */
  double initial_distance = kInf;
  long iterations = 0;
  double tbound_mean = 0.0;
  double n1_mean = 0.0;
  double neighbor_bound_mean = 0.0;
  int starts_attempted = 0;
  int starts_found = 0;
  double wall_time_ms = 0.0;
  std::string error;  // empty on success
};

struct Aggregate {
  int total = 0;
  int already_misclassified = 0;
  int attacked = 0;  // total minus already-misclassified
  int found = 0;
  int errors = 0;
  double success_rate = 0.0;  // found / attacked
  double avg_distance = 0.0;  // averages over found examples
  double avg_l1 = 0.0;
  double avg_l2 = 0.0;
  double avg_linf = 0.0;
  double avg_initial_distance = 0.0;
  double avg_iterations = 0.0;  // averages over attacked examples
  double avg_tbound = 0.0;
  double avg_n1 = 0.0;
  double avg_neighbor_bound = 0.0;
  double avg_wall_time_ms = 0.0;
  double total_wall_time_ms = 0.0;
  /** (threshold, fraction of attacked with measured primary < threshold). */
  std::vector<std::pair<double, double>> success_grid;
};

struct ReportConfig {
  std::string model_path;
  std::string data_path;
  AttackKind kind = AttackKind::LtAttack;
  Norm norm = Norm::LInf;
  int num_examples = -1;  // -1 = whole dataset
  int num_initial = 20;
  int max_redraws = 1000;
  double binary_search_tol = 1e-9;
  double epsilon = 1e-6;
  bool noise_escape = true;
  double noise_flip_prob = 0.1;
  int noise_trials = 300;
  double noise_stddev = 0.1;
  bool early_cutoff = false;
  std::uint64_t seed = 0;
  int threads = 1;
  std::uint64_t oracle_cap = 1'000'000;
  int index_base = 0;
  std::vector<double> thresholds;
};

struct BenchmarkReport {
  ReportConfig config;
  std::string model_fingerprint;
  std::string data_fingerprint;
  std::vector<ExampleRecord> examples;
  Aggregate aggregate;
};

/** FNV-1a (64-bit) over a byte string, formatted "fnv1a:<16 hex>". */
std::string fingerprint_bytes(const std::string& bytes);

/** Fingerprint of a file's contents; throws when unreadable. */
std::string fingerprint_file(const std::string& path);

/** Recompute every aggregate from the records (the only way they are set). */
Aggregate compute_aggregates(const std::vector<ExampleRecord>& records,
                             const std::vector<double>& thresholds);

/** The authoritative JSON form (stable key order, 2-space indent). */
std::string report_to_json(const BenchmarkReport& report);

/** Flat per-example rows, full-precision decimal floats. */
std::string report_to_csv(const BenchmarkReport& report);

void write_report_files(const BenchmarkReport& report, const std::string& out_prefix);

}  // namespace lta

#endif  // LTA_REPORT_HPP
