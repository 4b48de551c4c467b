#pragma once
// Completion-time oracle: labels each task with the venue that finishes it
// sooner given the full system snapshot. Used to pretrain the tree baseline.

#include <vector>

#include "edgesnn/policy/policy.hpp"

namespace edgesnn::policy {

struct TrainingExample {
  FeatureVector features;
  OffloadDecision label = OffloadDecision::local;
};

struct VenueEstimate {
  double local_finish;  // +inf when the edge node would drop the task
  double cloud_finish;
};

// Requires ctx.system. Local: edge backlog + execution. Cloud: uplink, cloud
// queue including in-flight transfers, execution, downlink.
VenueEstimate estimate_completion(const PolicyContext& ctx, const Task& task, const Topology& topology);

// Venue with the smaller estimated finish time; ties go local.
OffloadDecision oracle_label(const PolicyContext& ctx, const Task& task, const Topology& topology);

class OraclePolicy final : public Policy {
 public:
  // When `log` is non-null every decision is appended as a training example.
  explicit OraclePolicy(const Topology& topology, std::vector<TrainingExample>* log = nullptr)
      : topology_(topology), log_(log) {}
  std::string_view name() const override { return "oracle"; }
  Decision decide(const PolicyContext& ctx, const Task& task, Rng& rng) override;

 private:
  const Topology& topology_;
  std::vector<TrainingExample>* log_;
};

}  // namespace edgesnn::policy
