/**
 * \file benchmark.hpp
 *
 * Batch driver: runs the selected attack over a dataset's victims with a
 * pull-based thread pool and assembles the per-example records into a
 * report. Per-example random streams are derived from (seed, example,
 * start), so the records — and everything computed from them — are
 * identical for any thread count.
 */

#ifndef LTA_BENCHMARK_HPP
#define LTA_BENCHMARK_HPP

#include "lta/dataset.hpp"
#include "lta/ensemble.hpp"
#include "lta/report.hpp"

namespace lta {

/** Attack every selected victim and assemble the report (fingerprints are
    left for the caller, which knows the input paths). */
BenchmarkReport run_benchmark(const Ensemble& ens, const Dataset& data,
                              const ReportConfig& cfg);

}  // namespace lta

#endif  // LTA_BENCHMARK_HPP
