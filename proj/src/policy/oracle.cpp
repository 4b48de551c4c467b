#include "edgesnn/policy/oracle.hpp"

#include <limits>
#include <stdexcept>

namespace edgesnn::policy {

VenueEstimate estimate_completion(const PolicyContext& ctx, const Task& task, const Topology& topology) {
  if (!ctx.system) throw std::invalid_argument("oracle needs a system snapshot");
  const auto& edge = topology.edge_nodes.at(ctx.edge_index);
  VenueEstimate est{};
  if (ctx.queue_length >= edge.queue_limit.value_or(std::numeric_limits<std::size_t>::max())) {
    est.local_finish = std::numeric_limits<double>::infinity();
  } else {
    est.local_finish = ctx.system->edge_free_at(ctx.edge_index) + local_exec_time(task, edge);
  }
  const auto& up = topology.uplink_of(edge.id);
  const double at_cloud = ctx.clock + transfer_time(task.size_bits, up);
  est.cloud_finish = ctx.system->cloud_finish_at(at_cloud, task.cycles) + transfer_time(task.result_bits, up);
  return est;
}

OffloadDecision oracle_label(const PolicyContext& ctx, const Task& task, const Topology& topology) {
  const auto est = estimate_completion(ctx, task, topology);
  return est.cloud_finish < est.local_finish ? OffloadDecision::cloud : OffloadDecision::local;
}

Decision OraclePolicy::decide(const PolicyContext& ctx, const Task& task, Rng&) {
  const auto venue = oracle_label(ctx, task, topology_);
  if (log_) log_->push_back({ctx.features, venue});
  return {venue, 0.0, 0};
}

}  // namespace edgesnn::policy
