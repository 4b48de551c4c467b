#include "edgesnn/core/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "edgesnn/errors.hpp"

namespace edgesnn {

ValidationError::ValidationError(std::vector<std::string> violations)
    : ConfigError([&] {
        std::ostringstream os;
        os << "validation failed:";
        for (const auto& v : violations) os << "\n  - " << v;
        return os.str();
      }()),
      violations_(std::move(violations)) {}

std::string_view to_string(OffloadDecision d) noexcept {
  return d == OffloadDecision::local ? "local" : "cloud";
}

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::success: return "success";
    case Outcome::deadline_miss: return "deadline_miss";
    case Outcome::queue_drop: return "queue_drop";
    case Outcome::unfinished: return "unfinished";
  }
  return "unknown";
}

std::vector<std::string> Task::violations() const {
  std::vector<std::string> out;
  const auto tag = "task " + std::to_string(id) + ": ";
  if (!(size_bits > 0.0)) out.push_back(tag + "size_bits must be > 0");
  if (!(cycles > 0.0)) out.push_back(tag + "cycles must be > 0");
  if (!(deadline > arrival_time)) out.push_back(tag + "deadline must be after arrival_time");
  if (!(priority >= 0.0 && priority <= 1.0)) out.push_back(tag + "priority must lie in [0,1]");
  if (!(result_bits >= 0.0)) out.push_back(tag + "result_bits must be >= 0");
  return out;
}

std::size_t Topology::edge_index(NodeId id) const {
  for (std::size_t i = 0; i < edge_nodes.size(); ++i)
    if (edge_nodes[i].id == id) return i;
  throw std::out_of_range("unknown edge node id " + std::to_string(id));
}

const LinkSpec& Topology::uplink_of(NodeId edge_id) const {
  for (const auto& l : uplinks)
    if (l.from == edge_id) return l;
  throw std::out_of_range("edge node " + std::to_string(edge_id) + " has no uplink");
}

const Device& Topology::device(DeviceId id) const {
  for (const auto& d : devices)
    if (d.id == id) return d;
  throw std::out_of_range("unknown device id " + std::to_string(id));
}

double Topology::total_edge_capacity() const {
  double sum = 0.0;
  for (const auto& n : edge_nodes) sum += n.capacity_cps;
  return sum;
}

namespace {

void check_node(const NodeSpec& n, std::string_view what, std::vector<std::string>& out) {
  const auto tag = std::string(what) + " " + std::to_string(n.id) + ": ";
  if (!(n.capacity_cps > 0.0) || !std::isfinite(n.capacity_cps))
    out.push_back(tag + "capacity_cps must be > 0");
  if (!(n.p_idle_w >= 0.0)) out.push_back(tag + "p_idle_w must be >= 0");
  if (!(n.p_active_w >= n.p_idle_w)) out.push_back(tag + "p_active_w must be >= p_idle_w");
  if (n.tier == Tier::edge && (!n.queue_limit || *n.queue_limit < 1))
    out.push_back(tag + "queue_limit must be >= 1");
}

void check_link(const LinkSpec& l, std::string_view what, std::vector<std::string>& out) {
  const auto tag = std::string(what) + " " + std::to_string(l.from) + "->" + std::to_string(l.to) + ": ";
  if (!(l.bandwidth_bps > 0.0)) out.push_back(tag + "bandwidth_bps must be > 0");
  if (!(l.propagation_s >= 0.0)) out.push_back(tag + "propagation_s must be >= 0");
  if (!(l.tx_energy_j_per_bit >= 0.0)) out.push_back(tag + "tx_energy_j_per_bit must be >= 0");
}

}  // namespace

std::vector<std::string> validate_topology(const Topology& t) {
  std::vector<std::string> out;

  std::set<NodeId> node_ids;
  for (const auto& n : t.edge_nodes) {
    if (!node_ids.insert(n.id).second) out.push_back("duplicate node id " + std::to_string(n.id));
    if (n.tier != Tier::edge) out.push_back("edge node " + std::to_string(n.id) + ": tier must be edge");
    check_node(n, "edge node", out);
  }
  if (!node_ids.insert(t.cloud.id).second) out.push_back("duplicate node id " + std::to_string(t.cloud.id));
  if (t.cloud.tier != Tier::cloud) out.push_back("cloud node: tier must be cloud");
  check_node(t.cloud, "cloud node", out);
  if (t.edge_nodes.empty()) out.push_back("topology has no edge nodes");

  std::set<DeviceId> device_ids;
  for (const auto& d : t.devices) {
    if (!device_ids.insert(d.id).second) out.push_back("duplicate device id " + std::to_string(d.id));
    bool attached = false;
    for (const auto& n : t.edge_nodes) attached = attached || n.id == d.edge;
    if (!attached)
      out.push_back("device " + std::to_string(d.id) + " references nonexistent edge node " + std::to_string(d.edge));
  }

  std::map<NodeId, int> uplink_count;
  for (const auto& l : t.uplinks) {
    ++uplink_count[l.from];
    if (l.to != t.cloud.id)
      out.push_back("uplink from " + std::to_string(l.from) + " does not end at the cloud");
    check_link(l, "uplink", out);
  }
  for (const auto& n : t.edge_nodes) {
    const int c = uplink_count.count(n.id) ? uplink_count[n.id] : 0;
    if (c != 1)
      out.push_back("edge node " + std::to_string(n.id) + " has " + std::to_string(c) + " uplinks (expected 1)");
  }
  for (const auto& [from, c] : uplink_count)
    if (!std::any_of(t.edge_nodes.begin(), t.edge_nodes.end(), [&](const NodeSpec& n) { return n.id == from; }))
      out.push_back("uplink from nonexistent edge node " + std::to_string(from));

  for (const auto& l : t.device_links) {
    check_link(l, "device link", out);
    auto it = std::find_if(t.devices.begin(), t.devices.end(), [&](const Device& d) { return d.id == l.from; });
    if (it == t.devices.end())
      out.push_back("device link from nonexistent device " + std::to_string(l.from));
    else if (it->edge != l.to)
      out.push_back("device link " + std::to_string(l.from) + "->" + std::to_string(l.to) +
                    " does not match the device's edge node " + std::to_string(it->edge));
  }
  return out;
}

double local_exec_time(const Task& task, const NodeSpec& node) { return task.cycles / node.capacity_cps; }

double transfer_time(double bits, const LinkSpec& link) { return bits / link.bandwidth_bps + link.propagation_s; }

}  // namespace edgesnn
