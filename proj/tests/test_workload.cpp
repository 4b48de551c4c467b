#include <filesystem>
#include <numeric>
#include <string>

#include "doctest.h"
#include "edgesnn/errors.hpp"
#include "edgesnn/policy/oracle.hpp"
#include "edgesnn/sim/simulator.hpp"
#include "edgesnn/workload/scenario.hpp"

using namespace edgesnn;
using namespace edgesnn::workload;

namespace {

const std::filesystem::path kReference = std::filesystem::path(EDGESNN_SOURCE_DIR) / "scenarios" / "reference.json";

const char* kMinimal = R"({
  "seed": 3,
  "duration_s": 100,
  "topology": {
    "edge_nodes": [{"id": 1, "capacity_cps": 1e9, "p_idle_w": 2, "p_active_w": 5, "queue_limit": 4}],
    "cloud": {"id": 0, "capacity_cps": 4e9, "p_idle_w": 10, "p_active_w": 50},
    "devices": [{"id": 10, "edge": 1}],
    "uplinks": [{"edge": 1, "bandwidth_bps": 1e7, "propagation_s": 0.01, "tx_energy_j_per_bit": 1e-7}]
  }
})";

std::string with(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

double utilization(const Scenario& s, const std::vector<Task>& tasks) {
  double cycles = 0.0;
  for (const auto& t : tasks) cycles += t.cycles;
  return cycles / (s.topology->total_edge_capacity() * s.duration);
}

}  // namespace

TEST_CASE("reference scenario loads") {
  const auto s = load_scenario(kReference);
  CHECK(s.topology->devices.size() == 20);
  CHECK(s.topology->edge_nodes.size() == 4);
  CHECK(s.topology->cloud.tier == Tier::cloud);
  CHECK(validate_topology(*s.topology).empty());
  for (const auto& e : s.topology->edge_nodes) {
    CHECK(e.capacity_cps == 1e9);
    CHECK(e.queue_limit == std::optional<std::size_t>(10));
    CHECK(s.topology->uplink_of(e.id).bandwidth_bps == 1e7);
    CHECK(s.topology->uplink_of(e.id).propagation_s == 0.02);
  }
  CHECK(s.topology->cloud.capacity_cps == 16e9);
  CHECK(s.base_dir == kReference.parent_path());
}

TEST_CASE("minimal scenario parses with defaults recorded") {
  const auto s = parse_scenario(kMinimal);
  CHECK(s.seed == 3);
  CHECK(s.duration == 100.0);
  CHECK(s.warmup_fraction == 0.1);
  CHECK(s.policy.kind == PolicyKind::snn);
  CHECK(s.snn.hidden_layers == std::vector<std::size_t>{16});
  CHECK(s.snn.kappa_na == 2.0);
  CHECK_FALSE(s.defaults_applied.empty());
  const auto has = [&](const std::string& k) {
    return std::find(s.defaults_applied.begin(), s.defaults_applied.end(), k) != s.defaults_applied.end();
  };
  CHECK(has("warmup_fraction"));
  CHECK_FALSE(has("seed"));
}

TEST_CASE("scenario errors") {
  SUBCASE("missing seed names the field") {
    try {
      parse_scenario(with(kMinimal, "\"seed\": 3,", ""));
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("seed") != std::string::npos);
    }
  }
  SUBCASE("zero duration") {
    CHECK_THROWS_AS(parse_scenario(with(kMinimal, "\"duration_s\": 100", "\"duration_s\": 0")), ValidationError);
  }
  SUBCASE("unknown key is rejected with its path") {
    try {
      parse_scenario(with(kMinimal, "\"queue_limit\": 4", "\"queue_limit\": 4, \"qeue\": 1"));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("topology.edge_nodes[0].qeue") != std::string::npos);
    }
  }
  SUBCASE("syntax error reports line and column") {
    try {
      parse_scenario("{\n  \"seed\": 1,\n  \"duration_s\": ,\n}");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("wrong type") {
    CHECK_THROWS_AS(parse_scenario(with(kMinimal, "\"seed\": 3", "\"seed\": \"three\"")), ParseError);
  }
  SUBCASE("dangling device") {
    CHECK_THROWS_AS(parse_scenario(with(kMinimal, "\"edge\": 1}]", "\"edge\": 9}]")), ValidationError);
  }
  SUBCASE("invalid snn parameters") {
    CHECK_THROWS_AS(parse_scenario(with(kMinimal, "\"topology\"", "\"snn\": {\"dt_s\": 0.01}, \"topology\"")),
                    ValidationError);
  }
  SUBCASE("unknown policy") {
    CHECK_THROWS_AS(parse_scenario(with(kMinimal, "\"topology\"", "\"policy\": {\"name\": \"dqn\"}, \"topology\"")),
                    ConfigError);
  }
  SUBCASE("priority range") {
    CHECK_THROWS_AS(parse_scenario(with(kMinimal, "\"topology\"", "\"tasks\": {\"priority_min\": 0.7, \"priority_max\": 0.2}, \"topology\"")),
                    ValidationError);
    CHECK_THROWS_AS(parse_scenario(with(kMinimal, "\"topology\"", "\"tasks\": {\"priority_max\": 1.5}, \"topology\"")),
                    ValidationError);
  }
  SUBCASE("unknown snn credit or baseline names") {
    CHECK_THROWS_AS(parse_scenario(with(kMinimal, "\"topology\"", "\"snn\": {\"output_credit\": \"loser\"}, \"topology\"")),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(with(kMinimal, "\"topology\"", "\"snn\": {\"reward_baseline\": \"median\"}, \"topology\"")),
                    ConfigError);
  }
  SUBCASE("missing file names the path") {
    try {
      load_scenario("/nonexistent/dir/scen.json");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("/nonexistent/dir/scen.json") != std::string::npos);
    }
  }
}

TEST_CASE("scenario hashes") {
  const auto a = parse_scenario(kMinimal);
  auto b = parse_scenario(with(kMinimal, "\"seed\": 3", "\"seed\": 4"));
  CHECK(a.scenario_hash() == b.scenario_hash());
  CHECK(a.config_hash() != b.config_hash());
  const auto c = parse_scenario(with(kMinimal, "\"duration_s\": 100", "\"duration_s\": 101"));
  CHECK(a.scenario_hash() != c.scenario_hash());
  CHECK(a.scenario_hash().size() == 16);
  // The effective config round-trips through the parser.
  const auto d = parse_scenario(a.to_json().dump());
  CHECK(d.config_hash() == a.config_hash());
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("arrivals: zero rate, determinism, ordering, invariants") {
  auto s = load_scenario(kReference);
  s.duration = 200.0;
  s.load.target_utilization = 0.0;
  Rng r0 = make_rng(1, rng_stream::workload);
  CHECK(generate_arrivals(s, r0).empty());

  s.load.target_utilization = 0.9;
  Rng r1 = make_rng(5, rng_stream::workload), r2 = make_rng(5, rng_stream::workload);
  const auto a = generate_arrivals(s, r1);
  const auto b = generate_arrivals(s, r2);
  REQUIRE(a.size() == b.size());
  REQUIRE_FALSE(a.empty());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].arrival_time == b[i].arrival_time);
    CHECK(a[i].cycles == b[i].cycles);
    CHECK(a[i].id == static_cast<TaskId>(i));
    CHECK(a[i].violations().empty());
    CHECK(a[i].arrival_time < s.duration);
    CHECK(a[i].result_bits == doctest::Approx(s.tasks.result_fraction * a[i].size_bits));
    CHECK(a[i].edge == s.topology->device(a[i].source_device).edge);
    if (i > 0) CHECK(a[i - 1].arrival_time <= a[i].arrival_time);
  }
}

TEST_CASE("priorities stay inside the configured range") {
  auto s = parse_scenario(with(kMinimal, "\"topology\"", "\"tasks\": {\"priority_min\": 0.25, \"priority_max\": 0.5}, \"topology\""));
  s.load.target_utilization = 0.9;
  Rng rng = make_rng(2, rng_stream::workload);
  const auto tasks = generate_arrivals(s, rng);
  REQUIRE(tasks.size() > 20);
  double lo = 1.0, hi = 0.0;
  for (const auto& t : tasks) {
    lo = std::min(lo, t.priority);
    hi = std::max(hi, t.priority);
  }
  CHECK(lo >= 0.25);
  CHECK(hi <= 0.5);
  CHECK(hi - lo > 0.15);

  s.tasks.priority_min = s.tasks.priority_max = 0.5;
  Rng r1 = make_rng(2, rng_stream::workload), r2 = make_rng(2, rng_stream::workload);
  const auto fixed = generate_arrivals(s, r1);
  for (const auto& t : fixed) CHECK(t.priority == 0.5);
  // The priority draw is still consumed, so sizes match the ranged run.
  const auto ranged = generate_arrivals(parse_scenario(s.to_json().dump()), r2);
  REQUIRE(ranged.size() == fixed.size());
  CHECK(ranged.front().size_bits == fixed.front().size_bits);
  CHECK(parse_scenario(s.to_json().dump()).tasks.priority_min == 0.5);
}

TEST_CASE("snn credit and baseline names round-trip") {
  for (auto c : {snn::OutputCredit::all, snn::OutputCredit::winner, snn::OutputCredit::contrast})
    CHECK(snn::output_credit_from_string(snn::to_string(c)) == c);
  for (auto b : {snn::RewardBaseline::none, snn::RewardBaseline::mean, snn::RewardBaseline::linear,
                 snn::RewardBaseline::venue})
    CHECK(snn::reward_baseline_from_string(snn::to_string(b)) == b);
  const auto s = parse_scenario(
      with(kMinimal, "\"topology\"", "\"snn\": {\"output_credit\": \"contrast\", \"reward_baseline\": \"venue\"}, \"topology\""));
  CHECK(s.snn.output_credit == snn::OutputCredit::contrast);
  CHECK(s.snn.reward_baseline == snn::RewardBaseline::venue);
  const auto back = parse_scenario(s.to_json().dump());
  CHECK(back.snn.reward_baseline == snn::RewardBaseline::venue);
}

TEST_CASE("high load utilization converges to the target") {
  auto s = load_scenario(kReference);
  s.duration = 1000.0;
  s.load.target_utilization = 0.9;
  double sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng = make_rng(seed, rng_stream::workload);
    sum += utilization(s, generate_arrivals(s, rng));
  }
  CHECK(std::abs(sum / 10.0 - 0.9) < 0.05 * 0.9);
}

TEST_CASE("doubling the target doubles demanded cycles") {
  auto s = load_scenario(kReference);
  s.duration = 1000.0;
  double lo = 0.0, hi = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    s.load.target_utilization = 0.3;
    Rng r1 = make_rng(seed, rng_stream::workload);
    lo += utilization(s, generate_arrivals(s, r1));
    s.load.target_utilization = 0.6;
    Rng r2 = make_rng(seed + 100, rng_stream::workload);
    hi += utilization(s, generate_arrivals(s, r2));
  }
  CHECK(std::abs(hi / lo - 2.0) < 0.1);
}

TEST_CASE("explicit per-device rates override the target") {
  auto s = parse_scenario(with(kMinimal, "\"topology\"", "\"load\": {\"lambda_per_device\": [2.5]}, \"topology\""));
  CHECK(device_rates(s) == std::vector<double>{2.5});
  Rng rng = make_rng(1, rng_stream::workload);
  const auto tasks = generate_arrivals(s, rng);
  CHECK(std::abs(static_cast<double>(tasks.size()) - 250.0) < 4 * std::sqrt(250.0));
}

TEST_CASE("load suite") {
  auto base = load_scenario(kReference);
  base.seed = 42;
  const auto suite = make_load_suite(base);
  CHECK(suite[0].seed == 42);
  CHECK(suite[1].seed == 43);
  CHECK(suite[2].seed == 44);
  CHECK(suite[0].load.target_utilization == 0.3);
  CHECK(suite[1].load.target_utilization == 0.6);
  CHECK(suite[2].load.target_utilization == 0.9);
  CHECK(suite[0].load.label == "low");
  CHECK(suite[2].load.label == "high");
  CHECK(suite[0].topology.get() == suite[2].topology.get());
  CHECK(suite[0].scenario_hash() != suite[2].scenario_hash());
}

namespace {

struct LocalThenOracle final : policy::Policy {
  const Topology& topo;
  std::optional<policy::VenueEstimate> est;
  std::optional<OffloadDecision> label;
  explicit LocalThenOracle(const Topology& t) : topo(t) {}
  std::string_view name() const override { return "probe"; }
  policy::Decision decide(const policy::PolicyContext& ctx, const Task& task, Rng&) override {
    if (task.id == 0) return {OffloadDecision::local, 0.0, 0};
    est = policy::estimate_completion(ctx, task, topo);
    label = policy::oracle_label(ctx, task, topo);
    return {*label, 0.0, 0};
  }
};

Task ref_task(TaskId id, double size, double cycles) {
  Task t;
  t.id = id;
  t.source_device = 100;
  t.edge = 1;
  t.size_bits = size;
  t.result_bits = 0.1 * size;
  t.cycles = cycles;
  t.priority = 0.5;
  t.deadline = 100.0;
  return t;
}

}  // namespace

TEST_CASE("reference snapshot: edge wait 2.0 s against a 1.2 s cloud round trip") {
  const auto s = load_scenario(kReference);
  const auto& topo = *s.topology;
  LocalThenOracle pol(topo);
  sim::Simulator sim(topo, pol, {}, 1);
  // 2e9 cycles ahead on a 1 GHz node; the probe has 1e7 bits and 9.6e8 cycles:
  // cloud = (1e7/1e7 + 0.02) + 9.6e8/1.6e10 + (1e6/1e7 + 0.02) = 1.02 + 0.06 + 0.12 = 1.2 s,
  // local = 2.0 + 0.96 = 2.96 s.
  const std::vector<Task> tasks{ref_task(0, 1e3, 2e9), ref_task(1, 1e7, 9.6e8)};
  sim.add_tasks(tasks);
  const auto res = sim.run(100.0);
  REQUIRE(pol.label.has_value());
  CHECK(*pol.label == OffloadDecision::cloud);
  CHECK(pol.est->local_finish == doctest::Approx(2.96).epsilon(1e-12));
  CHECK(pol.est->cloud_finish == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(*res.records[1].latency() == doctest::Approx(1.2).epsilon(1e-12));
}
