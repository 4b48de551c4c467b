#pragma once
// Offloading policies consulted by the kernel for every arriving task.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "edgesnn/core/model.hpp"
#include "edgesnn/core/rng.hpp"
#include "edgesnn/metrics/energy.hpp"
#include "edgesnn/snn/network.hpp"

namespace edgesnn::policy {

using snn::FeatureVector;

// Read-only view of kernel state for policies that need more than features.
class SystemView {
 public:
  virtual ~SystemView() = default;
  // Absolute time at which the edge node finishes all resident work.
  virtual double edge_free_at(std::size_t edge_index) const = 0;
  // Finish time at the cloud of a task of `cycles` reaching it at `cloud_arrival`,
  // given the cloud queue and every transfer already in flight.
  virtual double cloud_finish_at(double cloud_arrival, double cycles) const = 0;
};

struct PolicyContext {
  FeatureVector features;
  double clock = 0.0;
  NodeId edge_node = 0;
  std::size_t edge_index = 0;
  std::size_t queue_length = 0;  // resident tasks on the edge node
  std::size_t queue_limit = 1;
  double recent_uplink_latency = 0.0;
  double energy_spent_j = 0.0;
  const SystemView* system = nullptr;
};

struct Decision {
  OffloadDecision venue = OffloadDecision::local;
  double delay = 0.0;         // simulated decision latency
  std::int64_t spikes = 0;    // network spikes spent on the decision
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  virtual Decision decide(const PolicyContext& ctx, const Task& task, Rng& rng) = 0;
  // Outcome of a task this policy decided; latency is 0 for drops.
  virtual void feedback(const Task& /*task*/, Outcome /*outcome*/, double /*latency*/) {}
  virtual metrics::DecisionCost decision_cost() const { return metrics::DecisionCost::per_decision; }
};

// Strict local/cloud alternation per edge node, starting with local.
class RoundRobinPolicy final : public Policy {
 public:
  std::string_view name() const override { return "round_robin"; }
  Decision decide(const PolicyContext& ctx, const Task& task, Rng& rng) override;

 private:
  std::vector<bool> next_cloud_;
};

class FixedPolicy final : public Policy {
 public:
  explicit FixedPolicy(OffloadDecision venue) : venue_(venue) {}
  std::string_view name() const override { return "fixed"; }
  Decision decide(const PolicyContext&, const Task&, Rng&) override { return {venue_, 0.0, 0}; }

 private:
  OffloadDecision venue_;
};

// Venue per task id, with a fallback for ids not listed.
class ScriptedPolicy final : public Policy {
 public:
  explicit ScriptedPolicy(std::vector<OffloadDecision> by_task_id, double delay = 0.0)
      : script_(std::move(by_task_id)), delay_(delay) {}
  std::string_view name() const override { return "scripted"; }
  Decision decide(const PolicyContext&, const Task& task, Rng&) override;

 private:
  std::vector<OffloadDecision> script_;
  double delay_;
};

}  // namespace edgesnn::policy
