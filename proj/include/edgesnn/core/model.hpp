#pragma once
// Domain types for the device / edge / cloud architecture.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edgesnn {

using TaskId = std::int64_t;
using DeviceId = int;
using NodeId = int;

enum class Tier { edge, cloud };

enum class OffloadDecision { local, cloud };

std::string_view to_string(OffloadDecision d) noexcept;

enum class Outcome { success, deadline_miss, queue_drop, unfinished };

std::string_view to_string(Outcome o) noexcept;

struct Task {
  TaskId id = 0;
  DeviceId source_device = 0;
  NodeId edge = 0;  // edge node the source device is attached to
  double arrival_time = 0.0;
  double size_bits = 0.0;
  double result_bits = 0.0;
  double cycles = 0.0;
  double priority = 0.0;
  double deadline = 0.0;  // absolute simulation time

  // Empty when every Task invariant holds.
  std::vector<std::string> violations() const;
};

struct NodeSpec {
  NodeId id = 0;
  Tier tier = Tier::edge;
  double capacity_cps = 0.0;
  double p_idle_w = 0.0;
  double p_active_w = 0.0;
  // Maximum resident tasks (waiting + in service). nullopt means unbounded.
  std::optional<std::size_t> queue_limit;
};

inline NodeSpec make_cloud_spec() {
  NodeSpec n;
  n.tier = Tier::cloud;
  return n;
}

// `from` is a device id for device links and an edge node id for uplinks;
// `to` is the edge node (device links) or the cloud (uplinks).
struct LinkSpec {
  int from = 0;
  NodeId to = 0;
  double bandwidth_bps = 0.0;
  double propagation_s = 0.0;
  double tx_energy_j_per_bit = 0.0;
};

struct Device {
  DeviceId id = 0;
  NodeId edge = 0;
};

struct Topology {
  std::vector<Device> devices;
  std::vector<NodeSpec> edge_nodes;
  NodeSpec cloud = make_cloud_spec();
  std::vector<LinkSpec> device_links;  // optional, informational
  std::vector<LinkSpec> uplinks;       // exactly one per edge node

  // Index into edge_nodes; throws std::out_of_range for unknown ids.
  std::size_t edge_index(NodeId id) const;
  const NodeSpec& edge(NodeId id) const { return edge_nodes[edge_index(id)]; }
  // Throws std::out_of_range when the edge node has no uplink.
  const LinkSpec& uplink_of(NodeId edge_id) const;
  const Device& device(DeviceId id) const;
  double total_edge_capacity() const;
};

std::vector<std::string> validate_topology(const Topology& topology);

// Pure execution time, excluding queueing.
double local_exec_time(const Task& task, const NodeSpec& node);

double transfer_time(double bits, const LinkSpec& link);

}  // namespace edgesnn
