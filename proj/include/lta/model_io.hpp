/**
 * \file model_io.hpp
 *
 * Model loading. Two on-disk formats are supported:
 *
 * 1. Native format (JSON object): explicit split convention, feature/class
 *    counts, per-tree class ids and node arrays. See README for the schema.
 * 2. XGBoost JSON dump (JSON array of per-tree node objects, as produced by
 *    Booster.dump_model(dump_format="json")): always Less ("x < t goes
 *    left") semantics. Field names are configurable for dialects.
 *
 * The loader sniffs the format from the top-level JSON value: an array is
 * treated as an XGBoost dump, an object as the native format.
 */

#ifndef LTA_MODEL_IO_HPP
#define LTA_MODEL_IO_HPP

#include "lta/ensemble.hpp"

#include <string>

namespace lta {

struct LoadOptions {
  /** Required for multiclass XGBoost dumps (trees cycle round-robin over
      classes); 2 (the default) means a single-score binary model. Ignored
      by the native format, which stores its own value. */
  int num_classes = 2;
  /** Score offset added to the additive sum; 0 matches raw logit dumps. */
  double base_margin = 0.0;
  /** Feature count; 0 infers max split feature index + 1 (XGBoost dumps
      only; the native format stores its own value). */
  int num_features = 0;

  // XGBoost dump field names, overridable for dialects.
  std::string split_field = "split";
  std::string condition_field = "split_condition";
  std::string yes_field = "yes";
  std::string no_field = "no";
  std::string missing_field = "missing";
  std::string children_field = "children";
  std::string leaf_field = "leaf";
  std::string nodeid_field = "nodeid";
};

/** Load a model file, sniffing native vs XGBoost dump from the JSON shape. */
Ensemble load_model(const std::string& path, const LoadOptions& opts = {});

/** Parse a model from a JSON string (same sniffing as load_model). */
Ensemble parse_model(const std::string& json_text, const LoadOptions& opts = {});

/** Serialize to the native format (round-trips through load_model). */
std::string to_native_json(const Ensemble& ens);
void save_native(const Ensemble& ens, const std::string& path);

}  // namespace lta

#endif  // LTA_MODEL_IO_HPP
