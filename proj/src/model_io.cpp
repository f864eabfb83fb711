#include "lta/model_io.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lta {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SplitRule parse_rule(const std::string& s) {
  if (s == "le" || s == "less_equal") return SplitRule::LessEqual;
  if (s == "lt" || s == "less") return SplitRule::Less;
  throw std::runtime_error("unknown comparator '" + s + "' (expected \"le\" or \"lt\")");
}

Ensemble parse_native(const json& j) {
  if (!j.contains("comparator")) throw std::runtime_error("native model missing \"comparator\"");
  const SplitRule rule = parse_rule(j.at("comparator").get<std::string>());
  const int num_features = j.at("num_features").get<int>();
  const int num_classes = j.value("num_classes", 2);
  const double base_margin = j.value("base_margin", 0.0);

  std::vector<Tree> trees;
  for (const json& jt : j.at("trees")) {
    Tree tree;
    tree.class_id = jt.value("class", 0);
    tree.root = jt.value("root", 0);
    for (const json& jn : jt.at("nodes")) {
      TreeNode n;
      if (jn.contains("leaf")) {
        n.value = jn.at("leaf").get<double>();
      } else {
        n.feature = jn.at("feature").get<int>();
        n.threshold = jn.at("threshold").get<double>();
        n.left = jn.at("left").get<int>();
        n.right = jn.at("right").get<int>();
        if (n.feature < 0) throw std::runtime_error("internal node with negative feature index");
      }
      tree.nodes.push_back(n);
    }
    trees.push_back(std::move(tree));
  }
  return Ensemble(std::move(trees), num_features, num_classes, rule, base_margin);
}

int parse_split_feature(const json& v) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    std::size_t pos = 0;
    if (!s.empty() && (s[0] == 'f' || s[0] == 'F')) pos = 1;
    try {
      return std::stoi(s.substr(pos));
    } catch (const std::exception&) {
      throw std::runtime_error("cannot parse split feature name '" + s + "'");
    }
  }
  throw std::runtime_error("split feature is neither an integer nor a string");
}

/** Flatten one XGBoost dump tree (nested children objects) into a Tree. */
void parse_xgb_node(const json& jn, const LoadOptions& o, Tree& tree,
                    std::map<int, int>& id_to_index, int& max_feature) {
  const int nodeid = jn.at(o.nodeid_field).get<int>();
  if (id_to_index.count(nodeid))
    throw std::runtime_error("duplicate nodeid " + std::to_string(nodeid) + " in dump tree");
  const int index = static_cast<int>(tree.nodes.size());
  id_to_index[nodeid] = index;
  tree.nodes.emplace_back();

  if (jn.contains(o.leaf_field)) {
    tree.nodes[static_cast<std::size_t>(index)].value = jn.at(o.leaf_field).get<double>();
    return;
  }
  TreeNode n;
  n.feature = parse_split_feature(jn.at(o.split_field));
  n.threshold = jn.at(o.condition_field).get<double>();
  max_feature = std::max(max_feature, n.feature);
  const int yes_id = jn.at(o.yes_field).get<int>();
  const int no_id = jn.at(o.no_field).get<int>();
  if (jn.contains(o.missing_field)) {
    const int missing_id = jn.at(o.missing_field).get<int>();
    if (missing_id != yes_id)
      throw std::runtime_error(
          "node " + std::to_string(nodeid) +
          " routes missing values away from the yes-branch; models relying on "
          "missing-value default directions are not supported");
  }
  if (!jn.contains(o.children_field))
    throw std::runtime_error("split node " + std::to_string(nodeid) + " has no children array");
  for (const json& jc : jn.at(o.children_field))
    parse_xgb_node(jc, o, tree, id_to_index, max_feature);
  if (!id_to_index.count(yes_id) || !id_to_index.count(no_id))
    throw std::runtime_error("node " + std::to_string(nodeid) +
                             " references a child nodeid outside its children array");
  n.left = id_to_index.at(yes_id);
  n.right = id_to_index.at(no_id);
  n.value = 0.0;
  tree.nodes[static_cast<std::size_t>(index)] = n;
}

Ensemble parse_xgb_dump(const json& j, const LoadOptions& o) {
  std::vector<Tree> trees;
  int max_feature = -1;
  for (const json& jt : j) {
    Tree tree;
    std::map<int, int> id_to_index;
    parse_xgb_node(jt, o, tree, id_to_index, max_feature);
    tree.root = 0;
    trees.push_back(std::move(tree));
  }
  const int num_classes = o.num_classes;
  if (num_classes >= 3)
    for (std::size_t t = 0; t < trees.size(); ++t)
      trees[t].class_id = static_cast<int>(t) % num_classes;
  int num_features = o.num_features > 0 ? o.num_features : max_feature + 1;
  if (num_features <= 0)
    throw std::runtime_error("cannot infer feature count from a dump with no splits; "
                             "pass num_features explicitly");
  return Ensemble(std::move(trees), num_features, num_classes, SplitRule::Less, o.base_margin);
}

}  // namespace

Ensemble parse_model(const std::string& json_text, const LoadOptions& opts) {
  json j = json::parse(json_text);
  if (j.is_array()) return parse_xgb_dump(j, opts);
  if (j.is_object()) return parse_native(j);
  throw std::runtime_error("model JSON must be an object (native) or array (XGBoost dump)");
}

Ensemble load_model(const std::string& path, const LoadOptions& opts) {
  return parse_model(read_file(path), opts);
}

std::string to_native_json(const Ensemble& ens) {
  nlohmann::ordered_json j;
  j["comparator"] = ens.rule() == SplitRule::LessEqual ? "le" : "lt";
  j["num_features"] = ens.num_features();
  j["num_classes"] = ens.num_classes();
  j["base_margin"] = ens.base_margin();
  j["trees"] = nlohmann::ordered_json::array();
  for (const Tree& t : ens.trees()) {
    nlohmann::ordered_json jt;
    jt["class"] = t.class_id;
    jt["root"] = t.root;
    jt["nodes"] = nlohmann::ordered_json::array();
    for (const TreeNode& n : t.nodes) {
      nlohmann::ordered_json jn;
      if (n.is_leaf()) {
        jn["leaf"] = n.value;
      } else {
        jn["feature"] = n.feature;
        jn["threshold"] = n.threshold;
        jn["left"] = n.left;
        jn["right"] = n.right;
      }
      jt["nodes"].push_back(jn);
    }
    j["trees"].push_back(jt);
  }
  return j.dump(2);
}

void save_native(const Ensemble& ens, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << to_native_json(ens) << "\n";
}

}  // namespace lta
