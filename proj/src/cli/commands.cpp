#include "edgesnn/cli/commands.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "edgesnn/cli/suite.hpp"
#include "edgesnn/errors.hpp"

namespace edgesnn::cli {

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string scenario;
  std::string policy;
  std::optional<std::uint64_t> seed;
  std::size_t seeds = 10;
  std::string load;
  std::string out = "out";
  unsigned jobs = 1;
  std::string tree;
  bool no_warmup = false;
};

Scenario load(const Flags& f) {
  auto s = workload::load_scenario(f.scenario);
  if (f.seed) s.seed = *f.seed;
  return s;
}

policy::DecisionTree read_tree(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open tree file '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return policy::DecisionTree::from_json(j);
}

policy::DecisionTree resolve_tree(const Flags& f, const Scenario& s, std::ostream& err) {
  if (!f.tree.empty()) return read_tree(f.tree);
  const auto configured = s.resolved_tree_path();
  if (!configured.empty() && fs::exists(configured)) return read_tree(configured);
  err << "warning: no tree artifact found; training one from a medium-load oracle calibration run\n";
  return train_reference_tree(s).tree;
}

std::string stem_of(const metrics::MetricsReport& r) {
  auto name = run_file_name(r);
  return name.substr(0, name.size() - 5);
}

int cmd_run(const Flags& f, std::ostream& out, std::ostream& err) {
  auto s = load(f);
  const auto kind = f.policy.empty() ? s.policy.kind : workload::policy_from_string(f.policy);
  if (!f.load.empty()) {
    const auto idx = load_indices(f.load);
    if (idx.size() != 1) throw ConfigError("run takes a single load level");
    const auto seed = s.seed;
    s = workload::make_load_suite(s)[idx.front()];
    s.seed = seed;
  }
  std::optional<policy::DecisionTree> tree;
  if (kind == PolicyKind::tree) tree = resolve_tree(f, s, err);
  const auto result = run_scenario(s, kind, tree ? &*tree : nullptr, !f.no_warmup);
  const auto& r = result.report;
  const fs::path dir(f.out);
  write_text(dir / run_file_name(r), r.to_json().dump(2) + "\n");
  write_text(dir / (stem_of(r) + ".csv"), metrics::MetricsReport::csv_header() + "\n" + r.csv_row() + "\n");
  out << r.policy << " load=" << r.load << " seed=" << r.seed << " tasks=" << r.n_tasks
      << " success_rate=" << (r.success_rate ? metrics::format_number(*r.success_rate) : "n/a")
      << " mean_latency_s=" << (r.latency ? metrics::format_number(r.latency->mean) : "n/a")
      << " edge_energy_j=" << metrics::format_number(r.energy.edge_total_j()) << " spikes=" << r.spike_total << "\n";
  return 0;
}

int cmd_train_tree(const Flags& f, std::ostream& out) {
  const auto s = load(f);
  const auto t = train_reference_tree(s);
  const fs::path path = fs::path(f.out) / "tree.json";
  write_text(path, t.tree.to_json().dump(2) + "\n");
  out << "examples=" << t.n_examples << " depth=" << t.tree.depth()
      << " training_accuracy=" << metrics::format_number(t.training_accuracy) << " written=" << path.string() << "\n";
  return 0;
}

int cmd_compare(const Flags& f, std::ostream& out, std::ostream& err) {
  const auto s = load(f);
  if (f.seeds < 1) throw ConfigError("--seeds must be >= 1");
  const auto tree = resolve_tree(f, s, err);
  const PolicyKind policies[] = {PolicyKind::snn, PolicyKind::tree, PolicyKind::round_robin};
  const auto loads = load_indices(f.load.empty() ? "all" : f.load);
  const auto jobs = make_jobs(s, policies, loads, f.seeds);
  auto reports = run_jobs(jobs, &tree, !f.no_warmup, f.jobs);
  write_compare_outputs(f.out, reports);
  sort_reports(reports);
  out << summary_text(reports, metrics::compare(reports));
  return 0;
}

int cmd_sweep(const Flags& f, std::ostream& out, std::ostream& err) {
  const auto s = load(f);
  if (f.seeds < 1) throw ConfigError("--seeds must be >= 1");
  const auto kind = f.policy.empty() ? s.policy.kind : workload::policy_from_string(f.policy);
  std::optional<policy::DecisionTree> tree;
  if (kind == PolicyKind::tree) tree = resolve_tree(f, s, err);
  const PolicyKind policies[] = {kind};
  const auto loads = load_indices(f.load.empty() ? "all" : f.load);
  const auto jobs = make_jobs(s, policies, loads, f.seeds);
  auto reports = run_jobs(jobs, tree ? &*tree : nullptr, !f.no_warmup, f.jobs);
  sort_reports(reports);
  const fs::path dir(f.out);
  for (const auto& r : reports) write_text(dir / "runs" / run_file_name(r), r.to_json().dump(2) + "\n");
  write_text(dir / "runs.csv", runs_csv(reports));
  write_text(dir / "success_matrix_detail.csv", success_matrix_detail_csv(reports));
  write_text(dir / "latency_vs_load.csv", latency_vs_load_csv(reports));
  write_text(dir / "energy_per_node.csv", energy_per_node_csv(reports));
  out << "runs=" << reports.size() << " written=" << (dir / "runs.csv").string() << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Edge offloading simulator with a spiking decision policy"};
  app.require_subcommand(1);
  Flags f;
  const std::string policy_help = "snn|tree|round_robin|oracle";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", f.scenario, "Scenario JSON file")->required();
    sub->add_option("--seed", f.seed, "Override the scenario seed");
    sub->add_option("--out", f.out, "Output directory")->capture_default_str();
  };

  auto* run = app.add_subcommand("run", "Run one simulation");
  add_common(run);
  run->add_option("--policy", f.policy, policy_help);
  run->add_option("--load", f.load, "low|medium|high (default: the scenario's own load)");
  run->add_option("--tree", f.tree, "Tree artifact for the tree policy");
  run->add_flag("--no-warmup-exclusion", f.no_warmup, "Measure every task");

  auto* train = app.add_subcommand("train-tree", "Calibrate under the oracle and train the tree baseline");
  add_common(train);

  auto* compare = app.add_subcommand("compare", "SNN vs tree vs round robin over loads and seeds");
  add_common(compare);
  compare->add_option("--seeds", f.seeds, "Seeds per cell")->capture_default_str();
  compare->add_option("--load", f.load, "low|medium|high|all (default all)");
  compare->add_option("--jobs", f.jobs, "Parallel runs")->capture_default_str();
  compare->add_option("--tree", f.tree, "Tree artifact");
  compare->add_flag("--no-warmup-exclusion", f.no_warmup, "Measure every task");

  auto* sweep = app.add_subcommand("sweep", "One policy over loads and seeds");
  add_common(sweep);
  sweep->add_option("--policy", f.policy, policy_help);
  sweep->add_option("--seeds", f.seeds, "Seeds per load")->capture_default_str();
  sweep->add_option("--load", f.load, "low|medium|high|all (default all)");
  sweep->add_option("--jobs", f.jobs, "Parallel runs")->capture_default_str();
  sweep->add_option("--tree", f.tree, "Tree artifact for the tree policy");
  sweep->add_flag("--no-warmup-exclusion", f.no_warmup, "Measure every task");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(f, out, err);
    if (*train) return cmd_train_tree(f, out);
    if (*compare) return cmd_compare(f, out, err);
    if (*sweep) return cmd_sweep(f, out, err);
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace edgesnn::cli
