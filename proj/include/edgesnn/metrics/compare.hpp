#pragma once
// Relative comparison of policies run on identical scenarios and seeds.
//
// Latency and energy deltas are relative, (policy - baseline) / baseline * 100.
// Success-rate deltas are absolute percentage points.

#include <span>
#include <string>
#include <vector>

#include "edgesnn/metrics/report.hpp"

namespace edgesnn::metrics {

enum class CompareMetric { mean_latency, edge_energy, success_rate };

std::string_view to_string(CompareMetric m) noexcept;

struct DeltaStat {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

struct ComparisonEntry {
  std::string load;
  std::string policy;
  std::string baseline;
  CompareMetric metric;
  DeltaStat delta;
};

// Percent change of `value` against `baseline`.
double relative_delta(double value, double baseline);

// Pairs reports by (load, seed) across policies; every ordered pair of distinct
// policies yields one entry per metric. Throws IncomparableRuns when reports of
// the same load carry different scenario hashes or seed sets.
std::vector<ComparisonEntry> compare(std::span<const MetricsReport> reports);

}  // namespace edgesnn::metrics
