#include "edgesnn/policy/decision_tree.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

#include "edgesnn/errors.hpp"

namespace edgesnn::policy {

DecisionTree::DecisionTree(std::vector<TreeNode> nodes, int max_depth)
    : nodes_(std::move(nodes)), max_depth_(max_depth) {
  if (nodes_.empty()) throw ConfigError("decision tree has no nodes");
  // Preorder: node i's left child is i + 1 and its right child follows the left subtree.
  std::function<int(int, int)> walk = [&](int i, int depth) -> int {
    if (i >= static_cast<int>(nodes_.size())) throw ConfigError("decision tree: truncated node array");
    if (depth > max_depth_) throw ConfigError("decision tree deeper than max_depth");
    const auto& n = nodes_[i];
    if (n.is_leaf()) return i + 1;
    if (n.feature >= static_cast<int>(FeatureVector::size))
      throw ConfigError("decision tree: feature index " + std::to_string(n.feature) + " out of range");
    if (n.left != i + 1) throw ConfigError("decision tree: node " + std::to_string(i) + " is not in preorder");
    const int after_left = walk(n.left, depth + 1);
    if (n.right != after_left) throw ConfigError("decision tree: node " + std::to_string(i) + " is not in preorder");
    return walk(n.right, depth + 1);
  };
  if (walk(0, 0) != static_cast<int>(nodes_.size())) throw ConfigError("decision tree: unreachable nodes");
}

OffloadDecision DecisionTree::predict(const FeatureVector& x) const {
  const auto v = x.as_array();
  int i = 0;
  while (!nodes_[i].is_leaf()) i = v[nodes_[i].feature] <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right;
  return nodes_[i].leaf;
}

int DecisionTree::depth() const {
  std::function<int(int)> d = [&](int i) -> int {
    if (nodes_[i].is_leaf()) return 0;
    return 1 + std::max(d(nodes_[i].left), d(nodes_[i].right));
  };
  return nodes_.empty() ? 0 : d(0);
}

nlohmann::json DecisionTree::to_json() const {
  nlohmann::json j;
  j["format"] = "edgesnn-tree/1";
  j["max_depth"] = max_depth_;
  j["features"] = FeatureVector::names;
  auto arr = nlohmann::json::array();
  for (const auto& n : nodes_) {
    if (n.is_leaf()) {
      arr.push_back({{"leaf", std::string(to_string(n.leaf))}});
    } else {
      arr.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right}});
    }
  }
  j["nodes"] = std::move(arr);
  return j;
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  try {
    std::vector<TreeNode> nodes;
    for (const auto& jn : j.at("nodes")) {
      TreeNode n;
      if (jn.contains("leaf")) {
        const auto s = jn.at("leaf").get<std::string>();
        if (s != "local" && s != "cloud") throw ConfigError("decision tree: unknown leaf label '" + s + "'");
        n.leaf = s == "cloud" ? OffloadDecision::cloud : OffloadDecision::local;
      } else {
        n.feature = jn.at("feature").get<int>();
        if (n.feature < 0) throw ConfigError("decision tree: negative feature index");
        n.threshold = jn.at("threshold").get<double>();
        n.left = jn.at("left").get<int>();
        n.right = jn.at("right").get<int>();
      }
      nodes.push_back(n);
    }
    return DecisionTree(std::move(nodes), j.at("max_depth").get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("decision tree json: ") + e.what());
  }
}

namespace {

using Wide = __int128;

struct Split {
  int feature = -1;
  double threshold = 0.0;
  // Score (A*nr + B*nl) / (nl*nr), A and B the squared label counts per side;
  // larger means lower weighted Gini impurity.
  Wide num = 0;
  Wide den = 1;
};

bool better(Wide num_a, Wide den_a, Wide num_b, Wide den_b) { return num_a * den_b > num_b * den_a; }

class Builder {
 public:
  Builder(std::span<const TrainingExample> ex, int max_depth, std::size_t min_leaf)
      : ex_(ex), max_depth_(max_depth), min_leaf_(std::max<std::size_t>(1, min_leaf)) {}

  std::vector<TreeNode> nodes;

  int build(std::vector<std::size_t> idx, int depth) {
    std::size_t n_cloud = 0;
    for (auto i : idx) n_cloud += ex_[i].label == OffloadDecision::cloud ? 1 : 0;
    const std::size_t n_local = idx.size() - n_cloud;

    const int me = static_cast<int>(nodes.size());
    nodes.push_back({});
    nodes[me].leaf = n_cloud > n_local ? OffloadDecision::cloud : OffloadDecision::local;
    if (depth >= max_depth_ || n_cloud == 0 || n_local == 0 || idx.size() < min_leaf_) return me;

    const auto split = best_split(idx, n_local, n_cloud);
    if (split.feature < 0) return me;

    std::vector<std::size_t> left, right;
    for (auto i : idx) (value(i, split.feature) <= split.threshold ? left : right).push_back(i);
    nodes[me].feature = split.feature;
    nodes[me].threshold = split.threshold;
    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    nodes[me].left = l;
    nodes[me].right = r;
    return me;
  }

 private:
  double value(std::size_t i, int f) const { return ex_[i].features.as_array()[f]; }

  Split best_split(std::vector<std::size_t> idx, std::size_t n_local, std::size_t n_cloud) const {
    const auto n = static_cast<Wide>(idx.size());
    // Parent score (n0^2 + n1^2) / n; a split must beat it strictly.
    Split best;
    best.num = static_cast<Wide>(n_local) * n_local + static_cast<Wide>(n_cloud) * n_cloud;
    best.den = n;
    for (int f = 0; f < static_cast<int>(FeatureVector::size); ++f) {
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return value(a, f) < value(b, f); });
      Wide l0 = 0, l1 = 0;
      Wide r0 = static_cast<Wide>(n_local), r1 = static_cast<Wide>(n_cloud);
      for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
        if (ex_[idx[k]].label == OffloadDecision::cloud) {
          ++l1;
          --r1;
        } else {
          ++l0;
          --r0;
        }
        const double lo = value(idx[k], f);
        const double hi = value(idx[k + 1], f);
        if (!(lo < hi)) continue;
        const Wide nl = static_cast<Wide>(k + 1);
        const Wide nr = n - nl;
        if (nl < static_cast<Wide>(min_leaf_) || nr < static_cast<Wide>(min_leaf_)) continue;
        const Wide num = (l0 * l0 + l1 * l1) * nr + (r0 * r0 + r1 * r1) * nl;
        const Wide den = nl * nr;
        if (!better(num, den, best.num, best.den)) continue;
        double mid = lo + (hi - lo) / 2.0;
        if (!(mid < hi)) mid = lo;
        best = {f, mid, num, den};
      }
    }
    return best;
  }

  std::span<const TrainingExample> ex_;
  int max_depth_;
  std::size_t min_leaf_;
};

}  // namespace

DecisionTree train_tree(std::span<const TrainingExample> examples, int max_depth, std::size_t min_leaf) {
  if (examples.empty()) throw InsufficientData("train_tree: no training examples");
  Builder b(examples, max_depth, min_leaf);
  std::vector<std::size_t> idx(examples.size());
  std::iota(idx.begin(), idx.end(), 0);
  b.build(std::move(idx), 0);
  return DecisionTree(std::move(b.nodes), max_depth);
}

double accuracy(const DecisionTree& tree, std::span<const TrainingExample> examples) {
  if (examples.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& e : examples) hit += tree.predict(e.features) == e.label ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(examples.size());
}

}  // namespace edgesnn::policy
