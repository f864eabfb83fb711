/**
 * \file lta_cli.cpp
 *
 * Batch command line: load a model and a LIBSVM dataset, attack every
 * selected victim with the chosen method, and write the report as
 * {out}.json and {out}.csv.
 */

#include "lta/benchmark.hpp"
#include "lta/model_io.hpp"

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

int main(int argc, char** argv) {
  CLI::App app{"Small-perturbation adversarial examples for tree ensembles"};

  std::string model_path, data_path, out_prefix = "report";
  std::string norm = "linf", attack = "lt";
  lta::ReportConfig cfg;
  int num_classes = 2;
  double base_margin = 0.0;
  int num_features = 0;

  app.add_option("--model", model_path, "Model file (native JSON or XGBoost dump)")
      ->required();
  app.add_option("--data", data_path, "LIBSVM data file")->required();
  app.add_option("--norm", norm, "Perturbation norm: l1, l2, linf")
      ->check(CLI::IsMember({"l1", "l2", "linf"}));
  app.add_option("--attack", attack, "Method: lt, naive-leaf, naive-feature, oracle")
      ->check(CLI::IsMember({"lt", "naive-leaf", "naive-feature", "oracle"}));
  app.add_option("--num-examples", cfg.num_examples, "Victims to attack (-1 = all)");
  app.add_option("--num-initial", cfg.num_initial, "Starting points per victim");
  app.add_option("--max-redraws", cfg.max_redraws, "Random redraws per start");
  app.add_option("--binary-search-tol", cfg.binary_search_tol,
                 "Relative tolerance of the initial-point bisection");
  app.add_option("--threads", cfg.threads, "Worker threads over victims");
  app.add_option("--seed", cfg.seed, "Root random seed");
  app.add_option("--epsilon", cfg.epsilon, "Open-bound nudge for emitted points");
  app.add_flag("--noise-escape,!--no-noise-escape", cfg.noise_escape,
               "Coordinate-noise escape from local optima");
  app.add_option("--noise-trials", cfg.noise_trials, "Escape trials per improvement");
  app.add_option("--noise-flip-prob", cfg.noise_flip_prob, "Per-coordinate flip probability");
  app.add_option("--noise-stddev", cfg.noise_stddev, "Escape noise standard deviation");
  app.add_flag("--early-cutoff", cfg.early_cutoff,
               "Stop the neighborhood scan after the first improving feature group");
  app.add_option("--oracle-cap", cfg.oracle_cap, "Brute-force partial-state cap");
  app.add_option("--thresholds", cfg.thresholds,
                 "Success-grid thresholds (space separated)");
  app.add_option("--out", out_prefix, "Output prefix for {out}.json and {out}.csv");
  app.add_option("--num-classes", num_classes, "Model classes (XGBoost dumps only)");
  app.add_option("--base-margin", base_margin, "Additive score offset (XGBoost dumps only)");
  app.add_option("--num-features", num_features,
                 "Feature count override (otherwise inferred from the model)");
  app.add_option("--index-base", cfg.index_base, "First feature index in the data file");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.model_path = model_path;
    cfg.data_path = data_path;
    cfg.norm = lta::parse_norm(norm);
    cfg.kind = lta::parse_attack_kind(attack);

    lta::LoadOptions opts;
    opts.num_classes = num_classes;
    opts.base_margin = base_margin;
    opts.num_features = num_features;
    const lta::Ensemble ens = lta::load_model(model_path, opts);
    const lta::Dataset data =
        lta::load_libsvm(data_path, ens.num_features(), ens.num_classes(), cfg.index_base);

    lta::BenchmarkReport report = lta::run_benchmark(ens, data, cfg);
    report.model_fingerprint = lta::fingerprint_file(model_path);
    report.data_fingerprint = lta::fingerprint_file(data_path);
    lta::write_report_files(report, out_prefix);

    const lta::Aggregate& a = report.aggregate;
    std::printf("examples=%d attacked=%d found=%d success_rate=%.4f avg_distance=%.6g\n",
                a.total, a.attacked, a.found, a.success_rate, a.avg_distance);
    std::printf("report written to %s.json and %s.csv\n", out_prefix.c_str(),
                out_prefix.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
