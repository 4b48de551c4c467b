#pragma once
// CART classifier over the policy feature vector (Gini impurity, axis-aligned
// splits `x[feature] <= threshold` go left).

#include <cstddef>
#include <span>
#include <vector>

#include "edgesnn/policy/oracle.hpp"
#include "edgesnn/policy/policy.hpp"
#include "json.hpp"

namespace edgesnn::policy {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  OffloadDecision leaf = OffloadDecision::local;

  bool is_leaf() const noexcept { return feature < 0; }
};

class DecisionTree {
 public:
  DecisionTree() = default;
  // Throws ConfigError if the node array is not a well-formed preorder tree.
  DecisionTree(std::vector<TreeNode> nodes, int max_depth);

  OffloadDecision predict(const FeatureVector& x) const;
  int depth() const;
  int max_depth() const noexcept { return max_depth_; }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

 private:
  std::vector<TreeNode> nodes_;
  int max_depth_ = 0;
};

// Greedy top-down CART. Candidate thresholds are midpoints of adjacent sorted
// unique values; both children must keep at least min_leaf examples and the
// split must strictly lower the weighted Gini impurity. Ties pick the lowest
// feature index, then the lowest threshold. Leaves predict the majority label
// (ties local). Throws InsufficientData for an empty example set.
DecisionTree train_tree(std::span<const TrainingExample> examples, int max_depth, std::size_t min_leaf);

double accuracy(const DecisionTree& tree, std::span<const TrainingExample> examples);

class TreePolicy final : public Policy {
 public:
  explicit TreePolicy(DecisionTree tree) : tree_(std::move(tree)) {}
  std::string_view name() const override { return "tree"; }
  Decision decide(const PolicyContext& ctx, const Task&, Rng&) override { return {tree_.predict(ctx.features), 0.0, 0}; }

 private:
  DecisionTree tree_;
};

}  // namespace edgesnn::policy
