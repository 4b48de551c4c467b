#pragma once
// Scenario files: JSON, UTF-8, strict keys. Format described in README.md.

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgesnn/core/model.hpp"
#include "edgesnn/core/rng.hpp"
#include "edgesnn/metrics/energy.hpp"
#include "edgesnn/sim/simulator.hpp"
#include "edgesnn/snn/network.hpp"
#include "json.hpp"

namespace edgesnn::workload {

struct TaskDistribution {
  double size_mean_bits = 1e6;
  double size_sigma = 0.5;            // log-space standard deviation
  double intensity_mean_cpb = 100.0;  // CPU cycles per payload bit
  double intensity_sigma = 0.3;
  double result_fraction = 0.1;       // result_bits = result_fraction * size_bits
  double slack_factor = 3.0;          // deadline = arrival + slack * local execution time
  double priority_min = 0.0;          // priority ~ U[priority_min, priority_max]
  double priority_max = 1.0;

  double mean_cycles() const { return size_mean_bits * intensity_mean_cpb; }
};

struct LoadSpec {
  std::string label = "custom";
  double target_utilization = 0.6;  // of aggregate edge capacity
  std::vector<double> lambda_per_device;  // explicit rates override target_utilization
};

enum class PolicyKind { snn, tree, round_robin, oracle };

std::string_view to_string(PolicyKind k) noexcept;
// Throws ConfigError for unknown names.
PolicyKind policy_from_string(std::string_view name);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::snn;
  std::string tree_path;  // resolved against the scenario's directory
  int tree_max_depth = 4;
  std::size_t tree_min_leaf = 5;
};

struct Scenario {
  std::string name = "scenario";
  std::shared_ptr<const Topology> topology;
  snn::NetworkConfig snn;
  PolicyConfig policy;
  LoadSpec load;
  TaskDistribution tasks;
  metrics::EnergyParams energy;
  sim::FeatureParams features;
  double duration = 1000.0;
  std::uint64_t seed = 0;
  double warmup_fraction = 0.1;
  std::filesystem::path base_dir;            // directory of the scenario file
  std::vector<std::string> defaults_applied;  // field paths filled from defaults

  // Effective configuration, defaults included.
  nlohmann::json to_json() const;
  // Hash of everything except policy selection and seed: equal for runs that
  // may be compared against each other.
  std::string scenario_hash() const;
  // Hash of the full effective configuration.
  std::string config_hash() const;

  double measure_start() const { return warmup_fraction * duration; }
  sim::SimOptions sim_options() const;
  std::filesystem::path resolved_tree_path() const;
};

// Throws ParseError (syntax, types, unknown keys; with line or field context)
// or ValidationError (missing required fields, violated invariants).
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

// Per-device Poisson rates meeting the load target (or the explicit rates).
std::vector<double> device_rates(const Scenario& s);

// Poisson arrivals per device over [0, duration), lognormal size and
// intensity (so cycles are lognormal too), uniform priority in
// [priority_min, priority_max]. Sorted by arrival.
std::vector<Task> generate_arrivals(const Scenario& s, Rng& rng);

inline constexpr std::array<std::pair<std::string_view, double>, 3> kLoadLevels{
    {{"low", 0.3}, {"medium", 0.6}, {"high", 0.9}}};

// Low / medium / high clones of `base` with seeds base.seed + 0, 1, 2.
std::array<Scenario, 3> make_load_suite(const Scenario& base);

std::string fnv1a_hex(std::string_view data);

}  // namespace edgesnn::workload
