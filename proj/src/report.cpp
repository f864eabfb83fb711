#include "lta/report.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lta {

namespace {

using ordered_json = nlohmann::ordered_json;

/** Full-precision decimal text for CSV cells (%.17g round-trips doubles). */
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/** JSON value for a possibly-infinite double (JSON has no infinity). */
ordered_json finite_or_null(double v) {
  if (v == kInf || v == -kInf) return nullptr;
  return v;
}

/** RFC-4180 quoting for free-text CSV cells (error messages). */
std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string attack_kind_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::LtAttack: return "lt";
    case AttackKind::NaiveLeaf: return "naive-leaf";
    case AttackKind::NaiveFeature: return "naive-feature";
    case AttackKind::Oracle: return "oracle";
  }
  return "lt";
}

AttackKind parse_attack_kind(const std::string& name) {
  if (name == "lt") return AttackKind::LtAttack;
  if (name == "naive-leaf") return AttackKind::NaiveLeaf;
  if (name == "naive-feature") return AttackKind::NaiveFeature;
  if (name == "oracle") return AttackKind::Oracle;
  throw std::invalid_argument("unknown attack kind: " + name);
}

std::string norm_name(Norm norm) {
  switch (norm) {
    case Norm::L1: return "l1";
    case Norm::L2: return "l2";
    case Norm::LInf: return "linf";
  }
  return "linf";
}

Norm parse_norm(const std::string& name) {
  if (name == "l1") return Norm::L1;
  if (name == "l2") return Norm::L2;
  if (name == "linf") return Norm::LInf;
  throw std::invalid_argument("unknown norm: " + name);
}

std::string fingerprint_bytes(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fingerprint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file for fingerprint: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fingerprint_bytes(ss.str());
}

Aggregate compute_aggregates(const std::vector<ExampleRecord>& records,
                             const std::vector<double>& thresholds) {
  Aggregate a;
  a.total = static_cast<int>(records.size());
  double sum_dist = 0, sum_l1 = 0, sum_l2 = 0, sum_linf = 0, sum_init = 0;
  double sum_iter = 0, sum_tbound = 0, sum_n1 = 0, sum_nb = 0, sum_wall = 0;
  int with_initial = 0;
  for (const ExampleRecord& r : records) {
    if (r.already_misclassified) {
      ++a.already_misclassified;
      continue;
    }
    ++a.attacked;
    if (!r.error.empty()) ++a.errors;
    sum_iter += static_cast<double>(r.iterations);
    sum_tbound += r.tbound_mean;
    sum_n1 += r.n1_mean;
    sum_nb += r.neighbor_bound_mean;
    sum_wall += r.wall_time_ms;
    if (r.initial_distance != kInf) {
      sum_init += r.initial_distance;
      ++with_initial;
    }
    if (r.found) {
      ++a.found;
      sum_dist += r.distance;
      sum_l1 += r.measured.l1;
      sum_l2 += r.measured.l2;
      sum_linf += r.measured.linf;
    }
  }
  if (a.attacked > 0) {
    a.success_rate = static_cast<double>(a.found) / a.attacked;
    a.avg_iterations = sum_iter / a.attacked;
    a.avg_tbound = sum_tbound / a.attacked;
    a.avg_n1 = sum_n1 / a.attacked;
    a.avg_neighbor_bound = sum_nb / a.attacked;
    a.avg_wall_time_ms = sum_wall / a.attacked;
  }
  a.total_wall_time_ms = sum_wall;
  if (a.found > 0) {
    a.avg_distance = sum_dist / a.found;
    a.avg_l1 = sum_l1 / a.found;
    a.avg_l2 = sum_l2 / a.found;
    a.avg_linf = sum_linf / a.found;
  }
  if (with_initial > 0) a.avg_initial_distance = sum_init / with_initial;

  for (double t : thresholds) {
    int below = 0;
    for (const ExampleRecord& r : records) {
      if (r.already_misclassified) continue;
      if (r.found && r.measured_primary < t) ++below;
    }
    const double rate = a.attacked > 0 ? static_cast<double>(below) / a.attacked : 0.0;
    a.success_grid.push_back({t, rate});
  }
  return a;
}

std::string report_to_json(const BenchmarkReport& report) {
  const ReportConfig& c = report.config;
  ordered_json j;
  j["config"] = ordered_json{{"model", c.model_path},
                             {"data", c.data_path},
                             {"attack", attack_kind_name(c.kind)},
                             {"norm", norm_name(c.norm)},
                             {"num_examples", c.num_examples},
                             {"num_initial", c.num_initial},
                             {"max_redraws", c.max_redraws},
                             {"binary_search_tol", c.binary_search_tol},
                             {"epsilon", c.epsilon},
                             {"noise_escape", c.noise_escape},
                             {"noise_flip_prob", c.noise_flip_prob},
                             {"noise_trials", c.noise_trials},
                             {"noise_stddev", c.noise_stddev},
                             {"early_cutoff", c.early_cutoff},
                             {"seed", c.seed},
                             {"threads", c.threads},
                             {"oracle_cap", c.oracle_cap},
                             {"index_base", c.index_base},
                             {"thresholds", c.thresholds}};
  j["model_fingerprint"] = report.model_fingerprint;
  j["data_fingerprint"] = report.data_fingerprint;

  ordered_json examples = ordered_json::array();
  for (const ExampleRecord& r : report.examples) {
    ordered_json e;
    e["index"] = r.index;
    e["label"] = r.label;
    e["predicted"] = r.predicted;
    e["already_misclassified"] = r.already_misclassified;
    e["found"] = r.found;
    e["distance"] = finite_or_null(r.distance);
    e["tiebreak_l2"] = finite_or_null(r.tiebreak_l2);
    e["measured"] = ordered_json{
        {"l1", r.measured.l1}, {"l2", r.measured.l2}, {"linf", r.measured.linf}};
    e["measured_primary"] = finite_or_null(r.measured_primary);
    e["initial_distance"] = finite_or_null(r.initial_distance);
    e["iterations"] = r.iterations;
    e["tbound_mean"] = r.tbound_mean;
    e["n1_mean"] = r.n1_mean;
    e["neighbor_bound_mean"] = r.neighbor_bound_mean;
    e["starts_attempted"] = r.starts_attempted;
    e["starts_found"] = r.starts_found;
    e["wall_time_ms"] = r.wall_time_ms;
    e["error"] = r.error;
    examples.push_back(std::move(e));
  }
  j["examples"] = std::move(examples);

  const Aggregate& a = report.aggregate;
  ordered_json grid = ordered_json::array();
  for (const auto& [t, rate] : a.success_grid)
    grid.push_back(ordered_json{{"threshold", t}, {"rate", rate}});
  j["aggregate"] = ordered_json{{"total", a.total},
                                {"already_misclassified", a.already_misclassified},
                                {"attacked", a.attacked},
                                {"found", a.found},
                                {"errors", a.errors},
                                {"success_rate", a.success_rate},
                                {"avg_distance", a.avg_distance},
                                {"avg_l1", a.avg_l1},
                                {"avg_l2", a.avg_l2},
                                {"avg_linf", a.avg_linf},
                                {"avg_initial_distance", a.avg_initial_distance},
                                {"avg_iterations", a.avg_iterations},
                                {"avg_tbound", a.avg_tbound},
                                {"avg_n1", a.avg_n1},
                                {"avg_neighbor_bound", a.avg_neighbor_bound},
                                {"avg_wall_time_ms", a.avg_wall_time_ms},
                                {"total_wall_time_ms", a.total_wall_time_ms},
                                {"success_grid", std::move(grid)}};
  return j.dump(2) + "\n";
}

std::string report_to_csv(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "index,label,predicted,already_misclassified,found,distance,tiebreak_l2,"
         "measured_l1,measured_l2,measured_linf,measured_primary,initial_distance,"
         "iterations,tbound_mean,n1_mean,neighbor_bound_mean,starts_attempted,"
         "starts_found,wall_time_ms,error\n";
  for (const ExampleRecord& r : report.examples) {
    out << r.index << ',' << r.label << ',' << r.predicted << ','
        << (r.already_misclassified ? 1 : 0) << ',' << (r.found ? 1 : 0) << ','
        << num(r.distance) << ',' << num(r.tiebreak_l2) << ',' << num(r.measured.l1) << ','
        << num(r.measured.l2) << ',' << num(r.measured.linf) << ',' << num(r.measured_primary)
        << ',' << num(r.initial_distance) << ',' << r.iterations << ',' << num(r.tbound_mean)
        << ',' << num(r.n1_mean) << ',' << num(r.neighbor_bound_mean) << ','
        << r.starts_attempted << ',' << r.starts_found << ',' << num(r.wall_time_ms) << ','
        << csv_escape(r.error) << '\n';
  }
  return out.str();
}

void write_report_files(const BenchmarkReport& report, const std::string& out_prefix) {
  {
    std::ofstream f(out_prefix + ".json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write report: " + out_prefix + ".json");
    f << report_to_json(report);
  }
  {
    std::ofstream f(out_prefix + ".csv", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write report: " + out_prefix + ".csv");
    f << report_to_csv(report);
  }
}

}  // namespace lta
