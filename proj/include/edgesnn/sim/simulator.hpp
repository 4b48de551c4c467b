#pragma once
// Deterministic discrete-event kernel for one offloading run.
//
// Per task: arrival at the attached edge node, policy decision (optionally
// after a decision window), then either the edge FIFO or uplink -> cloud FIFO
// -> downlink, and finally feedback to the policy. Each node is a single
// non-preemptive FIFO server. Simultaneous events run in scheduling order.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "edgesnn/core/model.hpp"
#include "edgesnn/core/rng.hpp"
#include "edgesnn/metrics/collector.hpp"
#include "edgesnn/metrics/energy.hpp"
#include "edgesnn/metrics/report.hpp"
#include "edgesnn/policy/policy.hpp"
#include "edgesnn/sim/event_queue.hpp"

namespace edgesnn::sim {

struct FeatureParams {
  double latency_norm_s = 2.0;      // net_latency = ewma / latency_norm_s, clamped
  double latency_ewma_alpha = 0.1;
  double initial_latency_s = 0.0;   // ewma before any cloud round trip completes
  double size_norm_bits = 4e6;      // size_norm = size_bits / size_norm_bits, clamped
  double energy_budget_j = 1e4;     // per edge node
};

struct SimOptions {
  double measure_start = 0.0;  // tasks arriving earlier are excluded from metrics
  metrics::EnergyParams energy;
  FeatureParams features;
  std::size_t trace_tail = 16;
};

struct NodeRuntime {
  NodeSpec spec;
  std::deque<std::size_t> fifo;          // waiting tasks (not in service)
  std::optional<std::size_t> in_service;
  double busy_start = 0.0;
  double busy_until = 0.0;
  double busy_time_accum = 0.0;          // whole run
  double busy_time_measured = 0.0;       // clipped to [measure_start, t_end]
  double bits_sent_measured = 0.0;
  double tx_j_accum = 0.0;
  double decision_j_accum = 0.0;
  std::int64_t spikes_measured = 0;
  std::int64_t decisions_measured = 0;
  double latency_ewma = 0.0;

  std::size_t resident() const noexcept { return fifo.size() + (in_service ? 1 : 0); }
};

struct RunResult {
  metrics::MetricsReport report;
  std::vector<metrics::TaskRecord> records;
  std::int64_t events_processed = 0;
};

class Simulator final : public policy::SystemView {
 public:
  Simulator(const Topology& topology, policy::Policy& policy, SimOptions options, std::uint64_t seed);

  // Adds tasks and schedules their TaskArrival events.
  void add_tasks(std::span<const Task> tasks);

  // Throws SchedulingInPast when event.time < clock().
  std::uint64_t schedule(SimEvent event);

  // Processes every event with time <= t_end, then closes the books.
  RunResult run(double t_end);

  double clock() const noexcept { return clock_; }
  const NodeRuntime& edge_runtime(std::size_t i) const { return edges_.at(i); }
  const NodeRuntime& cloud_runtime() const { return cloud_; }
  void set_observer(std::function<void(const SimEvent&)> observer) { observer_ = std::move(observer); }

  // Feature snapshot and raw state the policy sees for `task` right now.
  policy::PolicyContext context_for(const Task& task) const;

  double edge_free_at(std::size_t edge_index) const override;
  double cloud_finish_at(double cloud_arrival, double cycles) const override;

 private:
  void dispatch(const SimEvent& e);
  void handle_arrival(std::size_t task);
  void route(std::size_t task, OffloadDecision venue);
  void start_next(NodeRuntime& node, bool is_cloud);
  void complete_task(std::size_t task, OffloadDecision venue, double finish_time);
  void drop_task(std::size_t task);
  void add_busy(NodeRuntime& node, double start, double finish);
  double energy_spent(const NodeRuntime& node) const;
  [[noreturn]] void fail(const std::string& what) const;

  const Topology& topology_;
  policy::Policy& policy_;
  SimOptions options_;
  Rng rng_;

  double clock_ = 0.0;
  double t_end_ = std::numeric_limits<double>::infinity();
  EventQueue queue_;
  std::vector<Task> tasks_;
  std::vector<std::size_t> edge_of_task_;
  std::vector<NodeRuntime> edges_;
  NodeRuntime cloud_;
  // UplinkDone events not yet delivered, keyed by (time, seq).
  std::map<std::pair<double, std::uint64_t>, std::size_t> uplinks_in_flight_;
  metrics::Collector collector_;
  std::deque<SimEvent> tail_;
  std::function<void(const SimEvent&)> observer_;
  std::int64_t events_processed_ = 0;
};

}  // namespace edgesnn::sim
