// Acceptance gate: one PASS/FAIL line per criterion. Tolerances and time
// limits are fixed here. Usage: acceptance [scenario.json] [--work DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "edgesnn/cli/commands.hpp"
#include "edgesnn/cli/suite.hpp"
#include "edgesnn/errors.hpp"
#include "edgesnn/snn/lif.hpp"
#include "edgesnn/snn/network.hpp"
#include "edgesnn/snn/stdp.hpp"
#include "micro_scenarios.hpp"
#include "stump.hpp"

namespace fs = std::filesystem;
using namespace edgesnn;

namespace {

// Tolerances.
constexpr double kLifRelTol = 0.01;
constexpr double kEnergyRelTol = 1e-12;
constexpr double kHandTol = 1e-12;
constexpr double kTreeMinAccuracy = 0.80;
constexpr int kSeeds = 10;
constexpr int kOrderingMinSeeds = 8;
constexpr int kStdpDraws = 100000;
constexpr int kRewardSequences = 10000;

// Wall-clock limits, seconds.
constexpr double kLimitLif = 1.0;
constexpr double kLimitStdp = 5.0;
constexpr double kLimitMicro = 1.0;
constexpr double kLimitDeterminism = 120.0;
constexpr double kLimitOrdering = 600.0;
constexpr double kLimitTree = 60.0;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

class Gate {
 public:
  void check(int id, const std::string& title, double limit, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = body();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = limit <= 0.0 || secs < limit;
    const bool pass = v.pass && in_time;
    all_ = all_ && pass;
    std::cout << "criterion " << id << " [" << title << "]: " << (pass ? "PASS" : "FAIL") << "  " << v.detail << " ("
              << fmt("%.2f", secs) << " s";
    if (limit > 0.0) std::cout << ", limit " << fmt("%.0f", limit) << " s" << (in_time ? "" : " EXCEEDED");
    std::cout << ")" << std::endl;
  }
  bool all() const { return all_; }

 private:
  bool all_ = true;
};

Verdict lif_numerics() {
  snn::LifParams p;
  const double v0 = p.v_rest + 15.0;
  // Closed form at dt = tau/100 over 5 tau.
  p.dt = p.tau_m / 100.0;
  snn::NeuronState s{v0, 0.0, 0};
  double max_err = 0.0, max_ref = 0.0;
  const int n = static_cast<int>(std::llround(5.0 * p.tau_m / p.dt));
  for (int k = 1; k <= n; ++k) {
    s = snn::lif_step(s, 0.0, p, k * p.dt).state;
    const double exact = 15.0 * std::exp(-k * p.dt / p.tau_m);
    max_err = std::max(max_err, std::abs((s.v - p.v_rest) - exact));
    max_ref = std::max(max_ref, exact);
  }
  const double rel = max_err / max_ref;
  // Exact Euler recurrence at several step sizes.
  bool exact = true;
  for (double div : {10.0, 37.0, 100.0, 1000.0}) {
    snn::LifParams q;
    q.dt = q.tau_m / div;
    snn::NeuronState st{v0, 0.0, 0};
    double v = v0;
    for (int k = 1; k <= static_cast<int>(5 * div); ++k) {
      st = snn::lif_step(st, 0.0, q, k * q.dt).state;
      v = v + (q.dt * (0.0 - (v - q.v_rest))) / q.tau_m;
      exact = exact && st.v == v;
    }
  }
  return {rel < kLifRelTol && exact, "trajectory rel. error " + fmt("%.4f", rel * 100) + "% (< 1%), Euler recurrence " +
                                         (exact ? "exact" : "MISMATCH")};
}

Verdict stdp_properties() {
  snn::StdpParams p;
  Rng rng = make_rng(2026, 0);
  std::uniform_real_distribution<double> dt(-0.5, 0.5), stretch(1.0001, 3.0);
  int sign_bad = 0, mono_bad = 0;
  for (int i = 0; i < kStdpDraws; ++i) {
    double d = dt(rng);
    if (d == 0.0) continue;
    const double x = snn::stdp_delta(d, p);
    if ((d > 0) != (x > 0) || x == 0.0) ++sign_bad;
    const double farther = d * stretch(rng);
    if (!(std::abs(snn::stdp_delta(farther, p)) < std::abs(x))) ++mono_bad;
  }
  if (snn::stdp_delta(0.0, p) != 0.0) ++sign_bad;

  snn::NetworkConfig cfg;
  cfg.kappa_na = 10.0;
  cfg.stdp.learning_rate = 0.8;
  Rng init = make_rng(7, rng_stream::snn_init);
  snn::SpikingNetwork net(cfg, 5, init);
  std::uniform_real_distribution<double> u(0.0, 1.0), reward(-1.0, 1.0), elig(-4.0, 4.0);
  std::uniform_int_distribution<int> len(1, 8);
  std::vector<double> trace(net.synapse_count());
  long out_of_bounds = 0, updates = 0;
  for (int sq = 0; sq < kRewardSequences; ++sq) {
    const int n = len(rng);
    for (int k = 0; k < n; ++k) {
      if (k % 4 == 0) {
        net.run_window(snn::FeatureVector{u(rng), u(rng), u(rng), u(rng), u(rng)}, rng);
      } else {
        for (auto& e : trace) e = elig(rng);
        net.arm_eligibility(trace);
      }
      net.apply_reward(reward(rng));
      ++updates;
      for (double w : net.weights()) out_of_bounds += (w < cfg.stdp.w_min || w > cfg.stdp.w_max) ? 1 : 0;
    }
  }
  const bool ok = sign_bad == 0 && mono_bad == 0 && out_of_bounds == 0;
  return {ok, std::to_string(kStdpDraws) + " dt draws: " + std::to_string(sign_bad) + " sign / " +
                  std::to_string(mono_bad) + " monotonicity violations; " + std::to_string(kRewardSequences) +
                  " reward sequences (" + std::to_string(updates) + " updates): " + std::to_string(out_of_bounds) +
                  " weights out of bounds"};
}

Verdict micro_equivalence() {
  const auto cases = testing::micro_cases();
  int bad = 0;
  std::string first;
  for (const auto& c : cases) {
    const auto res = testing::run_micro(c);
    const auto ref = testing::reference_schedule(c);
    bool ok = res.records.size() == c.expected.size();
    for (std::size_t i = 0; ok && i < c.expected.size(); ++i) {
      const auto& rec = res.records[i];
      ok = rec.outcome == c.expected[i].outcome && ref[i].outcome == c.expected[i].outcome;
      if (!ok) break;
      if (std::isnan(c.expected[i].finish)) {
        ok = !rec.finish.has_value();
        continue;
      }
      ok = rec.finish && *rec.finish == ref[i].finish &&
           std::abs(*rec.finish - c.expected[i].finish) <= kHandTol * std::max(1.0, c.expected[i].finish);
    }
    if (!ok) {
      ++bad;
      if (first.empty()) first = " (first: " + c.name + ")";
    }
  }
  return {bad == 0 && cases.size() == 25,
          std::to_string(cases.size() - bad) + "/" + std::to_string(cases.size()) + " micro-scenarios exact" + first};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> sorted_lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) v.push_back(line);
  std::sort(v.begin(), v.end());
  return v;
}

Verdict determinism(const fs::path& scenario, const fs::path& work) {
  const std::vector<std::string> files{"runs.csv",           "success_matrix.csv",  "success_matrix_detail.csv",
                                       "latency_vs_load.csv", "energy_per_node.csv", "deltas.csv"};
  auto run = [&](const std::string& name, const std::string& jobs) {
    const auto out = work / name;
    fs::remove_all(out);
    std::ostringstream o, e;
    const int code = cli::run_cli({"compare", "--scenario", scenario.string(), "--seeds", "2", "--jobs", jobs, "--out",
                                   out.string()},
                                  o, e);
    if (code != 0) throw std::runtime_error("compare exited " + std::to_string(code) + ": " + e.str());
    return out;
  };
  const auto a = run("det_a", "1");
  const auto b = run("det_b", "1");
  const auto c = run("det_par", "8");
  int identical = 0, parallel_equal = 0;
  for (const auto& f : files) {
    const auto ta = slurp(a / f);
    identical += !ta.empty() && ta == slurp(b / f) ? 1 : 0;
    parallel_equal += sorted_lines(ta) == sorted_lines(slurp(c / f)) ? 1 : 0;
  }
  int runs_equal = 0, runs_total = 0;
  for (const auto& e : fs::directory_iterator(a / "runs")) {
    ++runs_total;
    runs_equal += slurp(e.path()) == slurp(b / "runs" / e.path().filename()) &&
                          slurp(e.path()) == slurp(c / "runs" / e.path().filename())
                      ? 1
                      : 0;
  }
  const int n = static_cast<int>(files.size());
  return {identical == n && parallel_equal == n && runs_equal == runs_total && runs_total == 18,
          std::to_string(identical) + "/" + std::to_string(n) + " CSVs byte-identical across reruns, " +
              std::to_string(parallel_equal) + "/" + std::to_string(n) + " equal with --jobs 8 after row sort, " +
              std::to_string(runs_equal) + "/" + std::to_string(runs_total) + " run reports identical"};
}

struct Suite {
  std::vector<metrics::MetricsReport> reports;
  // load -> policy -> per-replica values, replica order
  std::map<std::string, std::map<std::string, std::vector<const metrics::MetricsReport*>>> grid;
};

Suite run_suite(const workload::Scenario& s, const policy::DecisionTree& tree) {
  const cli::PolicyKind policies[] = {cli::PolicyKind::snn, cli::PolicyKind::tree, cli::PolicyKind::round_robin};
  const std::size_t loads[] = {0, 1, 2};
  const auto jobs = cli::make_jobs(s, policies, loads, kSeeds);
  Suite out;
  out.reports = cli::run_jobs(jobs, &tree, true, 1);
  for (std::size_t i = 0; i < out.reports.size(); ++i) {
    const auto& r = out.reports[i];
    out.grid[r.load][r.policy].push_back(&r);  // job order is replica-major
  }
  return out;
}

double mean_of(const std::vector<const metrics::MetricsReport*>& v,
               const std::function<double(const metrics::MetricsReport&)>& f) {
  double s = 0.0;
  for (auto* r : v) s += f(*r);
  return s / static_cast<double>(v.size());
}

double success(const metrics::MetricsReport& r) { return r.success_rate.value_or(0.0); }

Verdict conservation(const Suite& suite) {
  int count_bad = 0, energy_bad = 0;
  double worst = 0.0;
  auto rel = [](double total, double sum) { return std::abs(total - sum) / std::max(std::abs(total), 1e-300); };
  for (const auto& r : suite.reports) {
    if (r.n_success + r.n_miss + r.n_drop + r.n_unfinished != r.n_tasks) ++count_bad;
    if (r.n_local + r.n_cloud + r.n_drop < r.n_tasks - r.n_unfinished) ++count_bad;
    std::vector<metrics::EnergyRow> rows = r.energy.edge_rows;
    rows.push_back(r.energy.cloud);
    double sum_rows = 0.0;
    for (const auto& row : r.energy.edge_rows) sum_rows += row.total_j();
    for (const auto& row : rows) {
      const double comp = row.idle_j + row.active_j + row.tx_j + row.decision_j;
      const double e = rel(row.total_j(), comp);
      worst = std::max(worst, e);
      if (e > kEnergyRelTol || row.idle_j < 0 || row.active_j < 0 || row.tx_j < 0 || row.decision_j < 0) ++energy_bad;
    }
    const auto tot = r.energy.edge_totals();
    const double e1 = rel(r.energy.edge_total_j(), sum_rows);
    const double e2 = rel(tot.total_j(), tot.idle_j + tot.active_j + tot.tx_j + tot.decision_j);
    worst = std::max({worst, e1, e2});
    if (e1 > kEnergyRelTol || e2 > kEnergyRelTol) ++energy_bad;
  }
  return {count_bad == 0 && energy_bad == 0 && !suite.reports.empty(),
          std::to_string(suite.reports.size()) + " runs: " + std::to_string(count_bad) + " count violations, " +
              std::to_string(energy_bad) + " energy violations, worst relative residual " + fmt("%.2e", worst)};
}

Verdict table_shape(const Suite& suite) {
  const std::vector<std::string> policies{"snn", "tree", "round_robin"};
  std::ostringstream d;
  bool decreasing = true;
  for (const auto& p : policies) {
    const double lo = mean_of(suite.grid.at("low").at(p), success);
    const double me = mean_of(suite.grid.at("medium").at(p), success);
    const double hi = mean_of(suite.grid.at("high").at(p), success);
    decreasing = decreasing && lo > me && me > hi;
    d << p << " " << fmt("%.1f", lo * 100) << ">" << fmt("%.1f", me * 100) << ">" << fmt("%.1f", hi * 100) << "; ";
  }
  const auto& high = suite.grid.at("high");
  const double s_snn = mean_of(high.at("snn"), success);
  const double s_tree = mean_of(high.at("tree"), success);
  const double s_rr = mean_of(high.at("round_robin"), success);
  int seeds_ordered = 0;
  for (int k = 0; k < kSeeds; ++k) {
    const double a = success(*high.at("snn")[k]), b = success(*high.at("tree")[k]), c = success(*high.at("round_robin")[k]);
    seeds_ordered += a > b && b > c ? 1 : 0;
  }
  const bool ordered = s_snn > s_tree && s_tree > s_rr && seeds_ordered >= kOrderingMinSeeds;
  d << "(a) " << (decreasing ? "holds" : "violated") << "; (b) high load SNN " << fmt("%.1f", s_snn * 100) << " / Tree "
    << fmt("%.1f", s_tree * 100) << " / RR " << fmt("%.1f", s_rr * 100) << ", ordering in " << seeds_ordered << "/"
    << kSeeds << " seeds; SNN-RR gap " << fmt("%+.1f", (s_snn - s_rr) * 100) << " pp";
  return {decreasing && ordered, d.str()};
}

Verdict latency_energy(const Suite& suite) {
  const auto& high = suite.grid.at("high");
  auto lat = [](const metrics::MetricsReport& r) { return r.latency ? r.latency->mean : 0.0; };
  auto energy = [](const metrics::MetricsReport& r) { return r.energy.edge_total_j(); };
  const double l_snn = mean_of(high.at("snn"), lat), l_rr = mean_of(high.at("round_robin"), lat);
  const double e_snn = mean_of(high.at("snn"), energy), e_tree = mean_of(high.at("tree"), energy);
  return {l_snn < l_rr && e_snn < e_tree,
          "high load mean latency SNN " + fmt("%.3f", l_snn) + " s vs RR " + fmt("%.3f", l_rr) + " s (" +
              fmt("%+.1f", metrics::relative_delta(l_snn, l_rr)) + "%); edge energy SNN " + fmt("%.1f", e_snn) +
              " J vs Tree " + fmt("%.1f", e_tree) + " J (" + fmt("%+.1f", metrics::relative_delta(e_snn, e_tree)) +
              "%)"};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path scenario = fs::path(EDGESNN_SOURCE_DIR) / "scenarios" / "reference.json";
  fs::path work = fs::current_path() / "acceptance_work";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--work" && i + 1 < argc) {
      work = argv[++i];
    } else {
      scenario = a;
    }
  }
  fs::create_directories(work);
  std::cout << "scenario: " << scenario.string() << "\n";

  Gate gate;
  gate.check(1, "LIF numerics", kLimitLif, lif_numerics);
  gate.check(2, "STDP properties", kLimitStdp, stdp_properties);
  gate.check(3, "kernel oracle equivalence", kLimitMicro, micro_equivalence);
  gate.check(4, "determinism", kLimitDeterminism, [&] { return determinism(scenario, work); });

  const auto base = workload::load_scenario(scenario);
  std::optional<cli::TrainedTree> trained;
  std::optional<Suite> suite;
  gate.check(8, "tree baseline sanity", kLimitTree, [&] {
    trained = cli::train_reference_tree(base);
    const double stump = testing::best_stump_accuracy(trained->examples);
    return Verdict{trained->training_accuracy >= kTreeMinAccuracy && trained->training_accuracy >= stump,
                   "training accuracy " + fmt("%.4f", trained->training_accuracy) + " on " +
                       std::to_string(trained->n_examples) + " oracle labels (>= 0.80), best stump " +
                       fmt("%.4f", stump) + ", depth " + std::to_string(trained->tree.depth())};
  });
  if (!trained) trained = cli::train_reference_tree(base);

  gate.check(6, "success ordering", kLimitOrdering, [&] {
    suite = run_suite(base, trained->tree);
    return table_shape(*suite);
  });
  gate.check(5, "conservation", 0.0, [&] { return conservation(*suite); });
  gate.check(7, "latency and energy direction", 0.0, [&] { return latency_energy(*suite); });

  std::cout << (gate.all() ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return gate.all() ? 0 : 1;
}
