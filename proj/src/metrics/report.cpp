#include "edgesnn/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace edgesnn::metrics {

double nearest_rank(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile of empty sequence");
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

MetricsReport finalize(const Collector& collector, EnergyLedger energy, std::int64_t spike_total,
                       std::int64_t n_decisions) {
  MetricsReport r;
  std::vector<double> latencies;
  for (const auto& rec : collector.records()) {
    if (rec.excluded) continue;
    ++r.n_tasks;
    switch (rec.outcome) {
      case Outcome::success: ++r.n_success; break;
      case Outcome::deadline_miss: ++r.n_miss; break;
      case Outcome::queue_drop: ++r.n_drop; break;
      case Outcome::unfinished: ++r.n_unfinished; break;
    }
    if (rec.venue) ++(*rec.venue == OffloadDecision::local ? r.n_local : r.n_cloud);
    if (auto l = rec.latency()) latencies.push_back(*l);
  }
  if (r.n_tasks > 0) r.success_rate = static_cast<double>(r.n_success) / static_cast<double>(r.n_tasks);
  if (!latencies.empty()) {
    std::sort(latencies.begin(), latencies.end());
    LatencyStats s;
    s.mean = std::accumulate(latencies.begin(), latencies.end(), 0.0) / static_cast<double>(latencies.size());
    s.p50 = nearest_rank(latencies, 50);
    s.p95 = nearest_rank(latencies, 95);
    s.p99 = nearest_rank(latencies, 99);
    s.max = latencies.back();
    r.latency = s;
  }
  r.energy = std::move(energy);
  r.spike_total = spike_total;
  r.n_decisions = n_decisions;
  r.measure_start = collector.measure_start();
  return r;
}

namespace {

nlohmann::json row_json(const EnergyRow& row) {
  return {{"node", row.node},     {"idle_j", row.idle_j},         {"active_j", row.active_j},
          {"tx_j", row.tx_j},     {"decision_j", row.decision_j}, {"total_j", row.total_j()}};
}

template <class T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json j;
  j["policy"] = policy;
  j["load"] = load;
  j["utilization"] = utilization;
  j["seed"] = seed;
  j["scenario_hash"] = scenario_hash;
  j["config_hash"] = config_hash;
  j["warmup_excluded"] = warmup_excluded;
  j["measure_start_s"] = measure_start;
  j["t_end_s"] = t_end;
  j["counts"] = {{"n_tasks", n_tasks},     {"n_success", n_success}, {"n_miss", n_miss},   {"n_drop", n_drop},
                 {"n_unfinished", n_unfinished}, {"n_local", n_local},     {"n_cloud", n_cloud}};
  j["success_rate"] = opt(success_rate);
  if (latency) {
    j["latency_s"] = {{"mean", latency->mean}, {"p50", latency->p50}, {"p95", latency->p95},
                      {"p99", latency->p99},   {"max", latency->max}};
  } else {
    j["latency_s"] = nullptr;
  }
  auto rows = nlohmann::json::array();
  for (const auto& row : energy.edge_rows) rows.push_back(row_json(row));
  const auto totals = energy.edge_totals();
  j["energy"] = {{"edge_nodes", rows}, {"edge_totals", row_json(totals)}, {"cloud", row_json(energy.cloud)}};
  j["spike_total"] = spike_total;
  j["n_decisions"] = n_decisions;
  j["defaults_applied"] = defaults_applied;
  return j;
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string MetricsReport::csv_header() {
  return "scenario_hash,policy,load,utilization,seed,n_tasks,n_success,n_miss,n_drop,n_unfinished,"
         "success_rate,mean_latency_s,p50_latency_s,p95_latency_s,p99_latency_s,"
         "edge_idle_j,edge_active_j,edge_tx_j,edge_decision_j,edge_total_j,spike_total,n_local,n_cloud";
}

std::string MetricsReport::csv_row() const {
  const auto t = energy.edge_totals();
  auto opt_num = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  std::ostringstream os;
  os << scenario_hash << ',' << policy << ',' << load << ',' << format_number(utilization) << ',' << seed << ','
     << n_tasks << ',' << n_success << ',' << n_miss << ',' << n_drop << ',' << n_unfinished << ','
     << opt_num(success_rate) << ',' << (latency ? format_number(latency->mean) : "") << ','
     << (latency ? format_number(latency->p50) : "") << ',' << (latency ? format_number(latency->p95) : "") << ','
     << (latency ? format_number(latency->p99) : "") << ',' << format_number(t.idle_j) << ','
     << format_number(t.active_j) << ',' << format_number(t.tx_j) << ',' << format_number(t.decision_j) << ','
     << format_number(t.total_j()) << ',' << spike_total << ',' << n_local << ',' << n_cloud;
  return os.str();
}

}  // namespace edgesnn::metrics
