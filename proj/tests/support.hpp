#pragma once
// Hand-built topologies and tasks for unit tests.

#include <memory>
#include <vector>

#include "edgesnn/core/model.hpp"
#include "edgesnn/sim/simulator.hpp"

namespace edgesnn::testing {

// One edge node (id 1) with one device (id 10); cloud id 0.
inline Topology micro_topology(double edge_cps = 1e9, double cloud_cps = 4e9, double bw = 1e7, double prop = 0.01,
                               std::size_t queue_limit = 10, int n_edges = 1) {
  Topology t;
  t.cloud.id = 0;
  t.cloud.tier = Tier::cloud;
  t.cloud.capacity_cps = cloud_cps;
  t.cloud.p_idle_w = 10.0;
  t.cloud.p_active_w = 50.0;
  for (int e = 1; e <= n_edges; ++e) {
    NodeSpec n;
    n.id = e;
    n.tier = Tier::edge;
    n.capacity_cps = edge_cps;
    n.p_idle_w = 2.0;
    n.p_active_w = 5.0;
    n.queue_limit = queue_limit;
    t.edge_nodes.push_back(n);
    t.devices.push_back({9 + e, e});
    t.uplinks.push_back({e, 0, bw, prop, 1e-7});
  }
  return t;
}

inline Task make_task(TaskId id, double arrival, double cycles, double size_bits = 1e6, double deadline_after = 100.0,
                      NodeId edge = 1) {
  Task t;
  t.id = id;
  t.source_device = 9 + edge;
  t.edge = edge;
  t.arrival_time = arrival;
  t.size_bits = size_bits;
  t.result_bits = 0.1 * size_bits;
  t.cycles = cycles;
  t.priority = 0.5;
  t.deadline = arrival + deadline_after;
  return t;
}

}  // namespace edgesnn::testing
