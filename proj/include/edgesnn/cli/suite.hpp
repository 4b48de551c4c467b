#pragma once
// Batch execution of scenario runs and the comparison outputs built from them.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edgesnn/metrics/compare.hpp"
#include "edgesnn/policy/decision_tree.hpp"
#include "edgesnn/policy/oracle.hpp"
#include "edgesnn/sim/simulator.hpp"
#include "edgesnn/workload/scenario.hpp"

namespace edgesnn::cli {

using workload::PolicyKind;
using workload::Scenario;

// `tree` is required for PolicyKind::tree. With warmup exclusion off every
// task is measured.
sim::RunResult run_scenario(const Scenario& s, PolicyKind kind, const policy::DecisionTree* tree,
                            bool warmup_exclusion = true);

struct Calibration {
  std::vector<policy::TrainingExample> examples;
  sim::RunResult run;
};
// Oracle run of `s` logging one example per decision.
Calibration calibrate(const Scenario& s);

// Calibration at medium load followed by CART training. Throws InsufficientData
// when the run produces no decisions.
struct TrainedTree {
  policy::DecisionTree tree;
  double training_accuracy = 0.0;
  std::size_t n_examples = 0;
  std::vector<policy::TrainingExample> examples;
};
TrainedTree train_reference_tree(const Scenario& s);

struct Job {
  Scenario scenario;
  PolicyKind policy = PolicyKind::snn;
};

// Runs every job on up to `jobs` threads. Results keep the job order. If runs
// fail, the exception of the lowest failing job index is rethrown.
std::vector<metrics::MetricsReport> run_jobs(std::span<const Job> work, const policy::DecisionTree* tree,
                                             bool warmup_exclusion, unsigned jobs);

// Load levels selected by name ("low", "medium", "high" or "all").
std::vector<std::size_t> load_indices(const std::string& load);

// Replica k of load level i uses seed base.seed + 3k + i.
std::vector<Job> make_jobs(const Scenario& base, std::span<const PolicyKind> policies,
                           std::span<const std::size_t> loads, std::size_t n_seeds);

// Per-run file name: <scenario hash>_<policy>_<load>_<seed>.json
std::string run_file_name(const metrics::MetricsReport& r);

// Canonical row order: load level, then policy, then seed.
void sort_reports(std::vector<metrics::MetricsReport>& reports);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string runs_csv(std::span<const metrics::MetricsReport> reports);
std::string success_matrix_csv(std::span<const metrics::MetricsReport> reports);
std::string success_matrix_detail_csv(std::span<const metrics::MetricsReport> reports);
std::string latency_vs_load_csv(std::span<const metrics::MetricsReport> reports);
std::string energy_per_node_csv(std::span<const metrics::MetricsReport> reports);
std::string deltas_csv(std::span<const metrics::ComparisonEntry> entries);
std::string summary_text(std::span<const metrics::MetricsReport> reports,
                         std::span<const metrics::ComparisonEntry> entries);

// Writes per-run JSON files under <out>/runs and every table above.
void write_compare_outputs(const std::filesystem::path& out, std::vector<metrics::MetricsReport> reports);

// Table column label per policy: SNN, ML-Based, Heuristic, Oracle.
std::string column_label(std::string_view policy);

}  // namespace edgesnn::cli
