#pragma once
// Spiking decision module: one decision window per task, reward-modulated
// STDP on the task's outcome.

#include <array>
#include <unordered_map>
#include <vector>

#include "edgesnn/policy/policy.hpp"
#include "edgesnn/snn/network.hpp"

namespace edgesnn::policy {

// +1 scaled by (1 - latency / (deadline - arrival)) for successes, -1 for
// deadline misses and drops.
double reward_for(const Task& task, Outcome outcome, double latency);

class SnnPolicy final : public Policy {
 public:
  SnnPolicy(snn::NetworkConfig config, std::uint64_t seed);
  explicit SnnPolicy(snn::SpikingNetwork network) : net_(std::move(network)) {}

  std::string_view name() const override { return "snn"; }
  Decision decide(const PolicyContext& ctx, const Task& task, Rng& rng) override;
  void feedback(const Task& task, Outcome outcome, double latency) override;
  metrics::DecisionCost decision_cost() const override { return metrics::DecisionCost::per_spike; }

  const snn::SpikingNetwork& network() const noexcept { return net_; }
  std::size_t pending() const noexcept { return pending_.size(); }
  // Expected reward for `features` under the configured baseline (0 for none).
  double expected_reward(const FeatureVector& features) const noexcept;

 private:
  // r ~ c[0] + sum c[i+1] * x[i], fitted by least mean squares.
  struct LinearFit {
    std::array<double, FeatureVector::size + 1> c{};
    double predict(const FeatureVector& x) const noexcept;
    void update(const FeatureVector& x, double reward, double rate) noexcept;
  };
  struct Pending {
    std::vector<double> trace;  // eligibility captured by the task's window
    FeatureVector features;
    OffloadDecision venue = OffloadDecision::local;
  };
  snn::SpikingNetwork net_;
  std::unordered_map<TaskId, Pending> pending_;
  double mean_ = 0.0;
  bool mean_seen_ = false;
  LinearFit fit_;                    // linear
  std::array<LinearFit, 2> venue_fit_;  // venue: local, cloud
};

}  // namespace edgesnn::policy
