#include "edgesnn/policy/policy.hpp"

namespace edgesnn::policy {

Decision RoundRobinPolicy::decide(const PolicyContext& ctx, const Task&, Rng&) {
  if (next_cloud_.size() <= ctx.edge_index) next_cloud_.resize(ctx.edge_index + 1, false);
  const bool cloud = next_cloud_[ctx.edge_index];
  next_cloud_[ctx.edge_index] = !cloud;
  return {cloud ? OffloadDecision::cloud : OffloadDecision::local, 0.0, 0};
}

Decision ScriptedPolicy::decide(const PolicyContext&, const Task& task, Rng&) {
  const auto i = static_cast<std::size_t>(task.id);
  return {i < script_.size() ? script_[i] : OffloadDecision::local, delay_, 0};
}

}  // namespace edgesnn::policy
