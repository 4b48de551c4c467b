#include <algorithm>
#include <cmath>
#include <tuple>

#include "edgesnn/workload/scenario.hpp"

namespace edgesnn::workload {

std::vector<double> device_rates(const Scenario& s) {
  const auto& topo = *s.topology;
  if (!s.load.lambda_per_device.empty()) return s.load.lambda_per_device;
  const double total = s.load.target_utilization * topo.total_edge_capacity() / s.tasks.mean_cycles();
  return std::vector<double>(topo.devices.size(), topo.devices.empty() ? 0.0 : total / topo.devices.size());
}

std::vector<Task> generate_arrivals(const Scenario& s, Rng& rng) {
  const auto& topo = *s.topology;
  const auto& d = s.tasks;
  const auto rates = device_rates(s);

  std::lognormal_distribution<double> size_dist(std::log(d.size_mean_bits) - d.size_sigma * d.size_sigma / 2.0,
                                                d.size_sigma);
  std::lognormal_distribution<double> intensity_dist(
      std::log(d.intensity_mean_cpb) - d.intensity_sigma * d.intensity_sigma / 2.0, d.intensity_sigma);
  std::uniform_real_distribution<double> priority_dist(0.0, 1.0);

  struct Draft {
    Task task;
    std::size_t device_order;
    std::size_t k;
  };
  std::vector<Draft> drafts;
  for (std::size_t di = 0; di < topo.devices.size(); ++di) {
    const double lambda = rates[di];
    if (!(lambda > 0.0)) continue;
    const auto& dev = topo.devices[di];
    const auto& edge = topo.edge(dev.edge);
    std::exponential_distribution<double> gap(lambda);
    std::size_t k = 0;
    for (double t = gap(rng); t < s.duration; t += gap(rng), ++k) {
      Task task;
      task.source_device = dev.id;
      task.edge = dev.edge;
      task.arrival_time = t;
      task.size_bits = size_dist(rng);
      task.cycles = task.size_bits * intensity_dist(rng);
      task.result_bits = d.result_fraction * task.size_bits;
      task.priority = d.priority_min + (d.priority_max - d.priority_min) * priority_dist(rng);
      task.deadline = t + d.slack_factor * local_exec_time(task, edge);
      drafts.push_back({task, di, k});
    }
  }
  std::sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
    return std::tie(a.task.arrival_time, a.device_order, a.k) < std::tie(b.task.arrival_time, b.device_order, b.k);
  });
  std::vector<Task> out;
  out.reserve(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    out.push_back(drafts[i].task);
    out.back().id = static_cast<TaskId>(i);
  }
  return out;
}

std::array<Scenario, 3> make_load_suite(const Scenario& base) {
  std::array<Scenario, 3> suite{base, base, base};
  for (std::size_t i = 0; i < suite.size(); ++i) {
    suite[i].load.label = std::string(kLoadLevels[i].first);
    suite[i].load.target_utilization = kLoadLevels[i].second;
    suite[i].load.lambda_per_device.clear();
    suite[i].seed = base.seed + i;
  }
  return suite;
}

}  // namespace edgesnn::workload
