#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edgesnn/metrics/collector.hpp"
#include "edgesnn/metrics/energy.hpp"
#include "json.hpp"

namespace edgesnn::metrics {

struct LatencyStats {
  double mean = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  double max = 0.0;
};

// Nearest-rank percentile of an ascending sequence; p in (0, 100].
double nearest_rank(const std::vector<double>& sorted, double p);

struct MetricsReport {
  // Counts cover measured (non-warmup) tasks only.
  std::size_t n_tasks = 0;
  std::size_t n_success = 0;
  std::size_t n_miss = 0;
  std::size_t n_drop = 0;
  std::size_t n_unfinished = 0;
  std::size_t n_local = 0;
  std::size_t n_cloud = 0;
  std::optional<double> success_rate;
  std::optional<LatencyStats> latency;  // over finished tasks, misses included
  EnergyLedger energy;
  std::int64_t spike_total = 0;
  std::int64_t n_decisions = 0;

  std::string policy;
  std::string load;
  double utilization = 0.0;
  std::uint64_t seed = 0;
  std::string scenario_hash;
  std::string config_hash;
  bool warmup_excluded = true;
  double measure_start = 0.0;
  double t_end = 0.0;
  std::vector<std::string> defaults_applied;

  nlohmann::json to_json() const;

  // One row per run; column order is fixed (listed in README.md).
  static std::string csv_header();
  std::string csv_row() const;
};

// Aggregates the records of one run. Energy and spike totals come from the kernel.
MetricsReport finalize(const Collector& collector, EnergyLedger energy, std::int64_t spike_total,
                       std::int64_t n_decisions);

// Fixed-precision formatting shared by every CSV writer.
std::string format_number(double x);

}  // namespace edgesnn::metrics
