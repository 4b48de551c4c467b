#include "edgesnn/metrics/compare.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "edgesnn/errors.hpp"

namespace edgesnn::metrics {

std::string_view to_string(CompareMetric m) noexcept {
  switch (m) {
    case CompareMetric::mean_latency: return "mean_latency";
    case CompareMetric::edge_energy: return "edge_energy";
    case CompareMetric::success_rate: return "success_rate";
  }
  return "unknown";
}

double relative_delta(double value, double baseline) { return (value - baseline) / baseline * 100.0; }

namespace {

std::optional<double> metric_delta(CompareMetric m, const MetricsReport& p, const MetricsReport& b) {
  switch (m) {
    case CompareMetric::mean_latency:
      if (!p.latency || !b.latency || b.latency->mean == 0.0) return std::nullopt;
      return relative_delta(p.latency->mean, b.latency->mean);
    case CompareMetric::edge_energy: {
      const double base = b.energy.edge_total_j();
      if (base == 0.0) return std::nullopt;
      return relative_delta(p.energy.edge_total_j(), base);
    }
    case CompareMetric::success_rate:
      if (!p.success_rate || !b.success_rate) return std::nullopt;
      return (*p.success_rate - *b.success_rate) * 100.0;
  }
  return std::nullopt;
}

}  // namespace

std::vector<ComparisonEntry> compare(std::span<const MetricsReport> reports) {
  // load -> policy -> seed -> report
  std::map<std::string, std::map<std::string, std::map<std::uint64_t, const MetricsReport*>>> grid;
  std::map<std::string, std::string> hash_of_load;
  for (const auto& r : reports) {
    auto [it, inserted] = hash_of_load.emplace(r.load, r.scenario_hash);
    if (!inserted && it->second != r.scenario_hash)
      throw IncomparableRuns("load '" + r.load + "' mixes scenario hashes " + it->second + " and " + r.scenario_hash);
    grid[r.load][r.policy][r.seed] = &r;
  }

  std::vector<ComparisonEntry> out;
  for (const auto& [load, by_policy] : grid) {
    std::set<std::uint64_t> seeds;
    for (const auto& [seed, _] : by_policy.begin()->second) seeds.insert(seed);
    for (const auto& [policy, by_seed] : by_policy) {
      std::set<std::uint64_t> s;
      for (const auto& [seed, _] : by_seed) s.insert(seed);
      if (s != seeds) throw IncomparableRuns("policy '" + policy + "' ran a different seed set at load '" + load + "'");
    }
    for (const auto& [policy, p_seeds] : by_policy) {
      for (const auto& [baseline, b_seeds] : by_policy) {
        if (policy == baseline) continue;
        for (CompareMetric m : {CompareMetric::mean_latency, CompareMetric::edge_energy, CompareMetric::success_rate}) {
          DeltaStat d{0.0, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0};
          for (const auto& [seed, rep] : p_seeds) {
            auto v = metric_delta(m, *rep, *b_seeds.at(seed));
            if (!v) continue;
            d.mean += *v;
            d.min = std::min(d.min, *v);
            d.max = std::max(d.max, *v);
            ++d.n;
          }
          if (d.n == 0) continue;
          d.mean /= static_cast<double>(d.n);
          out.push_back({load, policy, baseline, m, d});
        }
      }
    }
  }
  return out;
}

}  // namespace edgesnn::metrics
