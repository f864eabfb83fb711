#include "lta/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lta {
namespace {

int map_label(double raw, int num_classes, int line_no) {
  const double rounded = std::nearbyint(raw);
  if (std::abs(raw - rounded) > 1e-9)
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": non-integer label " + std::to_string(raw));
  const int lbl = static_cast<int>(rounded);
  if (num_classes == 2) {
    if (lbl == -1) return 0;
    if (lbl == 0 || lbl == 1) return lbl;
  } else if (lbl >= 0 && lbl < num_classes) {
    return lbl;
  }
  throw std::runtime_error("line " + std::to_string(line_no) + ": unknown label " +
                           std::to_string(lbl) + " for " + std::to_string(num_classes) +
                           " classes");
}

}  // namespace

Dataset load_libsvm(const std::string& path, int num_features, int num_classes,
                    int index_base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file: " + path);
  if (num_features <= 0) throw std::runtime_error("load_libsvm needs num_features > 0");

  Dataset ds;
  ds.num_features = num_features;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // Strip trailing comments and skip blank lines.
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    double raw_label;
    if (!(ss >> raw_label)) continue;
    Vector x = Vector::Zero(num_features);
    std::string item;
    while (ss >> item) {
      const auto colon = item.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": malformed feature entry '" + item + "'");
      const int idx = std::stoi(item.substr(0, colon)) - index_base;
      const double val = std::stod(item.substr(colon + 1));
      if (idx < 0 || idx >= num_features)
        throw std::runtime_error("line " + std::to_string(line_no) + ": feature index " +
                                 std::to_string(idx) + " outside [0, " +
                                 std::to_string(num_features) + ") after applying index base");
      x[idx] = val;
    }
    ds.x.push_back(std::move(x));
    ds.y.push_back(map_label(raw_label, num_classes, line_no));
  }
  return ds;
}

}  // namespace lta
