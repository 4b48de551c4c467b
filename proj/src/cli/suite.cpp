#include "edgesnn/cli/suite.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "edgesnn/errors.hpp"
#include "edgesnn/policy/snn_policy.hpp"

namespace edgesnn::cli {

using metrics::MetricsReport;
using metrics::format_number;

namespace {

std::unique_ptr<policy::Policy> make_policy(const Scenario& s, PolicyKind kind, const policy::DecisionTree* tree,
                                            std::vector<policy::TrainingExample>* log) {
  switch (kind) {
    case PolicyKind::snn:
      return std::make_unique<policy::SnnPolicy>(s.snn, s.seed);
    case PolicyKind::tree:
      if (!tree) throw ConfigError("tree policy requested without a trained tree");
      return std::make_unique<policy::TreePolicy>(*tree);
    case PolicyKind::round_robin:
      return std::make_unique<policy::RoundRobinPolicy>();
    case PolicyKind::oracle:
      return std::make_unique<policy::OraclePolicy>(*s.topology, log);
  }
  throw ConfigError("unknown policy");
}

sim::RunResult simulate(const Scenario& s, policy::Policy& pol, PolicyKind kind, bool warmup_exclusion) {
  auto options = s.sim_options();
  if (!warmup_exclusion) options.measure_start = 0.0;
  auto wl_rng = make_rng(s.seed, rng_stream::workload);
  const auto tasks = workload::generate_arrivals(s, wl_rng);
  sim::Simulator simulator(*s.topology, pol, options, s.seed);
  simulator.add_tasks(tasks);
  auto result = simulator.run(s.duration);
  auto& r = result.report;
  r.policy = std::string(workload::to_string(kind));
  r.load = s.load.label;
  r.utilization = s.load.target_utilization;
  r.seed = s.seed;
  r.scenario_hash = s.scenario_hash();
  r.config_hash = s.config_hash();
  r.warmup_excluded = warmup_exclusion;
  r.measure_start = options.measure_start;
  r.defaults_applied = s.defaults_applied;
  return result;
}

std::size_t load_rank(const std::string& label) {
  for (std::size_t i = 0; i < workload::kLoadLevels.size(); ++i)
    if (label == workload::kLoadLevels[i].first) return i;
  return workload::kLoadLevels.size();
}

std::size_t policy_rank(const std::string& p) {
  static const char* order[] = {"snn", "tree", "round_robin", "oracle"};
  for (std::size_t i = 0; i < 4; ++i)
    if (p == order[i]) return i;
  return 4;
}

std::string title(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

struct Stat {
  double min = 0.0, mean = 0.0, max = 0.0;
  std::size_t n = 0;
};

Stat stat_of(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  s.n = xs.size();
  return s;
}

// (load, policy) -> reports, in canonical order.
using Cells = std::vector<std::pair<std::pair<std::string, std::string>, std::vector<const MetricsReport*>>>;

Cells cells_of(std::span<const MetricsReport> reports) {
  std::vector<const MetricsReport*> sorted;
  for (const auto& r : reports) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const MetricsReport* a, const MetricsReport* b) {
    return std::tuple(load_rank(a->load), a->load, policy_rank(a->policy), a->policy, a->seed) <
           std::tuple(load_rank(b->load), b->load, policy_rank(b->policy), b->policy, b->seed);
  });
  Cells cells;
  for (const auto* r : sorted) {
    if (cells.empty() || cells.back().first != std::make_pair(r->load, r->policy)) cells.push_back({{r->load, r->policy}, {}});
    cells.back().second.push_back(r);
  }
  return cells;
}

std::vector<std::string> policies_in(const Cells& cells) {
  std::vector<std::string> out;
  for (const auto& c : cells)
    if (std::find(out.begin(), out.end(), c.first.second) == out.end()) out.push_back(c.first.second);
  std::stable_sort(out.begin(), out.end(), [](auto& a, auto& b) { return policy_rank(a) < policy_rank(b); });
  return out;
}

std::vector<std::string> loads_in(const Cells& cells) {
  std::vector<std::string> out;
  for (const auto& c : cells)
    if (out.empty() || out.back() != c.first.first) out.push_back(c.first.first);
  return out;
}

const std::vector<const MetricsReport*>* find_cell(const Cells& cells, const std::string& load, const std::string& pol) {
  for (const auto& c : cells)
    if (c.first.first == load && c.first.second == pol) return &c.second;
  return nullptr;
}

std::vector<double> success_pct(const std::vector<const MetricsReport*>& rs) {
  std::vector<double> xs;
  for (const auto* r : rs)
    if (r->success_rate) xs.push_back(*r->success_rate * 100.0);
  return xs;
}

std::vector<double> mean_latency(const std::vector<const MetricsReport*>& rs) {
  std::vector<double> xs;
  for (const auto* r : rs)
    if (r->latency) xs.push_back(r->latency->mean);
  return xs;
}

}  // namespace

std::string column_label(std::string_view policy) {
  if (policy == "snn") return "SNN";
  if (policy == "tree") return "ML-Based";
  if (policy == "round_robin") return "Heuristic";
  if (policy == "oracle") return "Oracle";
  return std::string(policy);
}

sim::RunResult run_scenario(const Scenario& s, PolicyKind kind, const policy::DecisionTree* tree,
                            bool warmup_exclusion) {
  auto pol = make_policy(s, kind, tree, nullptr);
  return simulate(s, *pol, kind, warmup_exclusion);
}

Calibration calibrate(const Scenario& s) {
  Calibration c;
  policy::OraclePolicy oracle(*s.topology, &c.examples);
  c.run = simulate(s, oracle, PolicyKind::oracle, true);
  return c;
}

TrainedTree train_reference_tree(const Scenario& s) {
  Scenario medium = workload::make_load_suite(s)[1];
  medium.seed = s.seed;
  auto cal = calibrate(medium);
  if (cal.examples.empty())
    throw InsufficientData("calibration run produced no decisions (duration " + format_number(s.duration) + " s)");
  TrainedTree t;
  t.tree = policy::train_tree(cal.examples, s.policy.tree_max_depth, s.policy.tree_min_leaf);
  t.training_accuracy = policy::accuracy(t.tree, cal.examples);
  t.n_examples = cal.examples.size();
  t.examples = std::move(cal.examples);
  return t;
}

std::vector<MetricsReport> run_jobs(std::span<const Job> work, const policy::DecisionTree* tree, bool warmup_exclusion,
                                    unsigned jobs) {
  std::vector<MetricsReport> out(work.size());
  std::vector<std::exception_ptr> errors(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) {
      try {
        out[i] = run_scenario(work[i].scenario, work[i].policy, tree, warmup_exclusion).report;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(work.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<std::size_t> load_indices(const std::string& load) {
  if (load == "all") return {0, 1, 2};
  for (std::size_t i = 0; i < workload::kLoadLevels.size(); ++i)
    if (load == workload::kLoadLevels[i].first) return {i};
  throw ConfigError("unknown load '" + load + "' (expected low, medium, high or all)");
}

std::vector<Job> make_jobs(const Scenario& base, std::span<const PolicyKind> policies,
                           std::span<const std::size_t> loads, std::size_t n_seeds) {
  std::vector<Job> jobs;
  for (std::size_t k = 0; k < n_seeds; ++k) {
    Scenario replica = base;
    replica.seed = base.seed + 3 * k;
    const auto suite = workload::make_load_suite(replica);
    for (auto li : loads)
      for (auto p : policies) jobs.push_back({suite.at(li), p});
  }
  return jobs;
}

std::string run_file_name(const MetricsReport& r) {
  return r.scenario_hash + "_" + r.policy + "_" + r.load + "_" + std::to_string(r.seed) + ".json";
}

void sort_reports(std::vector<MetricsReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const MetricsReport& a, const MetricsReport& b) {
    return std::tuple(load_rank(a.load), a.load, policy_rank(a.policy), a.policy, a.seed) <
           std::tuple(load_rank(b.load), b.load, policy_rank(b.policy), b.policy, b.seed);
  });
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw ConfigError("write failed for '" + path.string() + "'");
}

std::string runs_csv(std::span<const MetricsReport> reports) {
  std::string s = MetricsReport::csv_header() + "\n";
  for (const auto& r : reports) s += r.csv_row() + "\n";
  return s;
}

std::string success_matrix_csv(std::span<const MetricsReport> reports) {
  const auto cells = cells_of(reports);
  const auto pols = policies_in(cells);
  std::ostringstream os;
  os << "load";
  for (const auto& p : pols) os << ',' << column_label(p);
  os << '\n';
  for (const auto& load : loads_in(cells)) {
    os << title(load);
    for (const auto& p : pols) {
      os << ',';
      if (const auto* c = find_cell(cells, load, p)) {
        const auto st = stat_of(success_pct(*c));
        if (st.n) os << format_number(st.mean);
      }
    }
    os << '\n';
  }
  return os.str();
}

std::string success_matrix_detail_csv(std::span<const MetricsReport> reports) {
  const auto cells = cells_of(reports);
  std::ostringstream os;
  os << "load,column,policy,n_seeds,success_pct_min,success_pct_mean,success_pct_max\n";
  for (const auto& [key, rs] : cells) {
    const auto st = stat_of(success_pct(rs));
    os << title(key.first) << ',' << column_label(key.second) << ',' << key.second << ',' << st.n << ','
       << format_number(st.min) << ',' << format_number(st.mean) << ',' << format_number(st.max) << '\n';
  }
  return os.str();
}

std::string latency_vs_load_csv(std::span<const MetricsReport> reports) {
  const auto cells = cells_of(reports);
  std::ostringstream os;
  os << "load,utilization,policy,n_seeds,mean_latency_s_mean,mean_latency_s_min,mean_latency_s_max,p95_latency_s_mean\n";
  for (const auto& [key, rs] : cells) {
    const auto st = stat_of(mean_latency(rs));
    std::vector<double> p95;
    for (const auto* r : rs)
      if (r->latency) p95.push_back(r->latency->p95);
    os << key.first << ',' << format_number(rs.front()->utilization) << ',' << key.second << ',' << st.n << ','
       << format_number(st.mean) << ',' << format_number(st.min) << ',' << format_number(st.max) << ','
       << format_number(stat_of(p95).mean) << '\n';
  }
  return os.str();
}

std::string energy_per_node_csv(std::span<const MetricsReport> reports) {
  const auto cells = cells_of(reports);
  std::ostringstream os;
  os << "load,policy,node,tier,n_seeds,idle_j,active_j,tx_j,decision_j,total_j\n";
  for (const auto& [key, rs] : cells) {
    // Node order is fixed by the topology: edge rows, then the edge total, then the cloud.
    const std::size_t n_edges = rs.front()->energy.edge_rows.size();
    auto emit = [&](const std::string& node, const char* tier, auto pick) {
      double idle = 0, active = 0, tx = 0, dec = 0, total = 0;
      for (const auto* r : rs) {
        const metrics::EnergyRow row = pick(*r);
        idle += row.idle_j;
        active += row.active_j;
        tx += row.tx_j;
        dec += row.decision_j;
        total += row.total_j();
      }
      const double n = static_cast<double>(rs.size());
      os << key.first << ',' << key.second << ',' << node << ',' << tier << ',' << rs.size() << ','
         << format_number(idle / n) << ',' << format_number(active / n) << ',' << format_number(tx / n) << ','
         << format_number(dec / n) << ',' << format_number(total / n) << '\n';
    };
    for (std::size_t i = 0; i < n_edges; ++i)
      emit(std::to_string(rs.front()->energy.edge_rows[i].node), "edge",
           [i](const MetricsReport& r) { return r.energy.edge_rows.at(i); });
    emit("edge_total", "edge", [](const MetricsReport& r) { return r.energy.edge_totals(); });
    emit(std::to_string(rs.front()->energy.cloud.node), "cloud",
         [](const MetricsReport& r) { return r.energy.cloud; });
  }
  return os.str();
}

std::string deltas_csv(std::span<const metrics::ComparisonEntry> entries) {
  std::ostringstream os;
  os << "load,policy,baseline,metric,unit,n_seeds,delta_mean,delta_min,delta_max\n";
  for (const auto& e : entries) {
    os << e.load << ',' << e.policy << ',' << e.baseline << ',' << metrics::to_string(e.metric) << ','
       << (e.metric == metrics::CompareMetric::success_rate ? "pp" : "percent") << ',' << e.delta.n << ','
       << format_number(e.delta.mean) << ',' << format_number(e.delta.min) << ',' << format_number(e.delta.max)
       << '\n';
  }
  return os.str();
}

std::string summary_text(std::span<const MetricsReport> reports, std::span<const metrics::ComparisonEntry> entries) {
  const auto cells = cells_of(reports);
  const auto pols = policies_in(cells);
  std::ostringstream os;
  char buf[160];
  os << "runs: " << reports.size() << "\n";
  if (!reports.empty()) os << "scenario hash: " << reports.front().scenario_hash << "\n";
  os << "\nsuccess rate, % (mean over seeds)\n";
  std::snprintf(buf, sizeof buf, "%-8s", "");
  os << buf;
  for (const auto& p : pols) {
    std::snprintf(buf, sizeof buf, "%12s", column_label(p).c_str());
    os << buf;
  }
  os << "\n";
  for (const auto& load : loads_in(cells)) {
    std::snprintf(buf, sizeof buf, "%-8s", title(load).c_str());
    os << buf;
    for (const auto& p : pols) {
      const auto* c = find_cell(cells, load, p);
      const auto st = c ? stat_of(success_pct(*c)) : Stat{};
      std::snprintf(buf, sizeof buf, "%12.1f", st.mean);
      os << buf;
    }
    os << "\n";
  }
  os << "\nmean latency, s / edge energy, J (mean over seeds)\n";
  for (const auto& [key, rs] : cells) {
    std::vector<double> energy;
    for (const auto* r : rs) energy.push_back(r->energy.edge_total_j());
    std::snprintf(buf, sizeof buf, "%-8s %-12s %10.4f %14.2f\n", key.first.c_str(), key.second.c_str(),
                  stat_of(mean_latency(rs)).mean, stat_of(energy).mean);
    os << buf;
  }
  os << "\ndeltas vs baselines (mean over seeds)\n";
  for (const auto& e : entries) {
    if (e.policy != "snn") continue;
    std::snprintf(buf, sizeof buf, "%-8s snn vs %-12s %-13s %+9.2f %s\n", e.load.c_str(), e.baseline.c_str(),
                  std::string(metrics::to_string(e.metric)).c_str(), e.delta.mean,
                  e.metric == metrics::CompareMetric::success_rate ? "pp" : "%");
    os << buf;
  }
  return os.str();
}

void write_compare_outputs(const std::filesystem::path& out, std::vector<MetricsReport> reports) {
  sort_reports(reports);
  const auto entries = metrics::compare(reports);
  for (const auto& r : reports) write_text(out / "runs" / run_file_name(r), r.to_json().dump(2) + "\n");
  write_text(out / "runs.csv", runs_csv(reports));
  write_text(out / "success_matrix.csv", success_matrix_csv(reports));
  write_text(out / "success_matrix_detail.csv", success_matrix_detail_csv(reports));
  write_text(out / "latency_vs_load.csv", latency_vs_load_csv(reports));
  write_text(out / "energy_per_node.csv", energy_per_node_csv(reports));
  write_text(out / "deltas.csv", deltas_csv(entries));
  write_text(out / "summary.txt", summary_text(reports, entries));
}

}  // namespace edgesnn::cli
