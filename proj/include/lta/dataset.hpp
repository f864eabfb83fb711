/**
 * \file dataset.hpp
 *
 * LIBSVM-format dataset loading into dense vectors. Unlisted feature values
 * are zero. `index_base` subtracts a constant from the file's feature
 * indices, so a 1-based file loaded with index_base=1 yields the same
 * vectors as its 0-based equivalent.
 */

#ifndef LTA_DATASET_HPP
#define LTA_DATASET_HPP

#include "lta/types.hpp"

#include <string>
#include <vector>

namespace lta {

struct Dataset {
  std::vector<Vector> x;
  std::vector<int> y;
  int num_features = 0;
};

/**
 * Load a LIBSVM file with dense d-dimensional rows. Labels are mapped to
 * class indices: for num_classes == 2 the accepted labels are {0, 1} or
 * {-1, +1} (-1 maps to class 0); for multiclass, integer labels in
 * [0, num_classes). Anything else is rejected as an unknown label.
 */
Dataset load_libsvm(const std::string& path, int num_features, int num_classes,
                    int index_base = 0);

}  // namespace lta

#endif  // LTA_DATASET_HPP
