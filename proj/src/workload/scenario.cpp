#include "edgesnn/workload/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "edgesnn/errors.hpp"

namespace edgesnn::workload {

using nlohmann::json;

std::string_view to_string(PolicyKind k) noexcept {
  switch (k) {
    case PolicyKind::snn: return "snn";
    case PolicyKind::tree: return "tree";
    case PolicyKind::round_robin: return "round_robin";
    case PolicyKind::oracle: return "oracle";
  }
  return "unknown";
}

PolicyKind policy_from_string(std::string_view name) {
  for (auto k : {PolicyKind::snn, PolicyKind::tree, PolicyKind::round_robin, PolicyKind::oracle})
    if (name == to_string(k)) return k;
  throw ConfigError("unknown policy '" + std::string(name) + "' (expected snn, tree, round_robin or oracle)");
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

// Strict object reader: tracks consumed keys, records defaulted and missing fields.
class Reader {
 public:
  Reader(const json* obj, std::string path, std::vector<std::string>& defaults, std::vector<std::string>& missing)
      : obj_(obj), path_(std::move(path)), defaults_(defaults), missing_(missing) {
    if (obj_ && !obj_->is_object()) throw ParseError(where() + ": expected an object");
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    if (auto v = find(key)) return convert<T>(*v, key);
    defaults_.push_back(field(key));
    return fallback;
  }

  template <class T>
  std::optional<T> required(const std::string& key) {
    if (auto v = find(key)) return convert<T>(*v, key);
    missing_.push_back("missing required field '" + field(key) + "'");
    return std::nullopt;
  }

  bool has(const std::string& key) const { return obj_ && obj_->contains(key); }

  Reader child(const std::string& key) {
    const json* v = find(key);
    return Reader(v, field(key), defaults_, missing_);
  }

  const json* array(const std::string& key, bool required_field) {
    const json* v = find(key);
    if (!v) {
      if (required_field) missing_.push_back("missing required field '" + field(key) + "'");
      return nullptr;
    }
    if (!v->is_array()) throw ParseError(field(key) + ": expected an array");
    return v;
  }

  void finish() const {
    if (!obj_) return;
    for (const auto& [k, _] : obj_->items())
      if (!seen_.count(k)) throw ParseError("unknown key '" + field(k) + "'");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string where() const { return path_.empty() ? "<root>" : path_; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    if (!obj_) return nullptr;
    auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }

  template <class T>
  T convert(const json& v, const std::string& key) const {
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ParseError(field(key) + ": expected a number");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_integer()) throw ParseError(field(key) + ": expected an integer");
        if constexpr (std::is_unsigned_v<T>)
          if (v.get<std::int64_t>() < 0) throw ParseError(field(key) + ": expected a non-negative integer");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ParseError(field(key) + ": expected a boolean");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ParseError(field(key) + ": expected a string");
      }
      return v.get<T>();
    } catch (const json::exception& e) {
      throw ParseError(field(key) + ": " + e.what());
    }
  }

  const json* obj_;
  std::string path_;
  std::vector<std::string>& defaults_;
  std::vector<std::string>& missing_;
  std::set<std::string> seen_;
};

NodeSpec read_node(Reader r, Tier tier) {
  NodeSpec n;
  n.tier = tier;
  n.id = r.required<int>("id").value_or(0);
  n.capacity_cps = r.required<double>("capacity_cps").value_or(1.0);
  n.p_idle_w = r.required<double>("p_idle_w").value_or(0.0);
  n.p_active_w = r.required<double>("p_active_w").value_or(0.0);
  if (tier == Tier::edge) n.queue_limit = r.required<std::size_t>("queue_limit").value_or(1);
  r.finish();
  return n;
}

LinkSpec read_link(Reader r, const char* from_key, const char* to_key, NodeId fixed_to) {
  LinkSpec l;
  l.from = r.required<int>(from_key).value_or(0);
  l.to = to_key ? r.required<int>(to_key).value_or(0) : fixed_to;
  l.bandwidth_bps = r.required<double>("bandwidth_bps").value_or(1.0);
  l.propagation_s = r.required<double>("propagation_s").value_or(0.0);
  l.tx_energy_j_per_bit = r.get<double>("tx_energy_j_per_bit", 0.0);
  r.finish();
  return l;
}

Topology read_topology(Reader r, std::vector<std::string>& defaults, std::vector<std::string>& missing) {
  Topology t;
  if (const json* arr = r.array("edge_nodes", true))
    for (std::size_t i = 0; i < arr->size(); ++i)
      t.edge_nodes.push_back(read_node(Reader(&(*arr)[i], r.field("edge_nodes[" + std::to_string(i) + "]"), defaults,
                                              missing),
                                       Tier::edge));
  if (r.has("cloud")) {
    t.cloud = read_node(r.child("cloud"), Tier::cloud);
  } else {
    r.child("cloud");
    missing.push_back("missing required field '" + r.field("cloud") + "'");
  }
  if (const json* arr = r.array("devices", true)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      Reader d(&(*arr)[i], r.field("devices[" + std::to_string(i) + "]"), defaults, missing);
      Device dev;
      dev.id = d.required<int>("id").value_or(0);
      dev.edge = d.required<int>("edge").value_or(0);
      d.finish();
      t.devices.push_back(dev);
    }
  }
  if (const json* arr = r.array("device_links", false))
    for (std::size_t i = 0; i < arr->size(); ++i)
      t.device_links.push_back(read_link(
          Reader(&(*arr)[i], r.field("device_links[" + std::to_string(i) + "]"), defaults, missing), "device", "edge", 0));
  if (const json* arr = r.array("uplinks", true))
    for (std::size_t i = 0; i < arr->size(); ++i)
      t.uplinks.push_back(read_link(Reader(&(*arr)[i], r.field("uplinks[" + std::to_string(i) + "]"), defaults, missing),
                                    "edge", nullptr, t.cloud.id));
  r.finish();
  return t;
}

snn::NetworkConfig read_snn(Reader r) {
  snn::NetworkConfig c;
  auto& l = c.lif;
  l.tau_m = r.get("tau_m_s", l.tau_m);
  l.v_rest = r.get("v_rest_mv", l.v_rest);
  l.v_reset = r.get("v_reset_mv", l.v_reset);
  l.v_th = r.get("v_th_mv", l.v_th);
  l.r_m = r.get("r_m_mohm", l.r_m);
  l.t_ref = r.get("t_ref_s", l.t_ref);
  l.dt = r.get("dt_s", l.dt);
  auto& s = c.stdp;
  s.a_plus = r.get("a_plus", s.a_plus);
  s.a_minus = r.get("a_minus", s.a_minus);
  s.tau_plus = r.get("tau_plus_s", s.tau_plus);
  s.tau_minus = r.get("tau_minus_s", s.tau_minus);
  s.w_min = r.get("w_min", s.w_min);
  s.w_max = r.get("w_max", s.w_max);
  s.trace_decay_tau = r.get("trace_decay_tau_s", s.trace_decay_tau);
  s.learning_rate = r.get("learning_rate", s.learning_rate);
  c.hidden_layers = r.get("hidden", c.hidden_layers);
  c.window = r.get("window_s", c.window);
  c.f_max = r.get("f_max_hz", c.f_max);
  c.encoder = snn::encoder_from_string(r.get<std::string>("encoder", std::string(snn::to_string(c.encoder))));
  c.kappa_na = r.get("kappa_na", c.kappa_na);
  c.pulse = r.get("pulse_s", c.pulse);
  c.init_low = r.get("init_low", c.init_low);
  c.init_high = r.get("init_high", c.init_high);
  c.output_credit = snn::output_credit_from_string(
      r.get<std::string>("output_credit", std::string(snn::to_string(c.output_credit))));
  c.learn_hidden = r.get("learn_hidden", c.learn_hidden);
  c.reward_baseline = snn::reward_baseline_from_string(
      r.get<std::string>("reward_baseline", std::string(snn::to_string(c.reward_baseline))));
  c.reward_baseline_alpha = r.get("reward_baseline_alpha", c.reward_baseline_alpha);
  r.finish();
  return c;
}

json snn_json(const snn::NetworkConfig& c) {
  return {{"tau_m_s", c.lif.tau_m},
          {"v_rest_mv", c.lif.v_rest},
          {"v_reset_mv", c.lif.v_reset},
          {"v_th_mv", c.lif.v_th},
          {"r_m_mohm", c.lif.r_m},
          {"t_ref_s", c.lif.t_ref},
          {"dt_s", c.lif.dt},
          {"a_plus", c.stdp.a_plus},
          {"a_minus", c.stdp.a_minus},
          {"tau_plus_s", c.stdp.tau_plus},
          {"tau_minus_s", c.stdp.tau_minus},
          {"w_min", c.stdp.w_min},
          {"w_max", c.stdp.w_max},
          {"trace_decay_tau_s", c.stdp.trace_decay_tau},
          {"learning_rate", c.stdp.learning_rate},
          {"hidden", c.hidden_layers},
          {"window_s", c.window},
          {"f_max_hz", c.f_max},
          {"encoder", std::string(snn::to_string(c.encoder))},
          {"kappa_na", c.kappa_na},
          {"pulse_s", c.pulse},
          {"init_low", c.init_low},
          {"init_high", c.init_high},
          {"output_credit", std::string(snn::to_string(c.output_credit))},
          {"learn_hidden", c.learn_hidden},
          {"reward_baseline", std::string(snn::to_string(c.reward_baseline))},
          {"reward_baseline_alpha", c.reward_baseline_alpha}};
}

json node_json(const NodeSpec& n) {
  json j = {{"id", n.id}, {"capacity_cps", n.capacity_cps}, {"p_idle_w", n.p_idle_w}, {"p_active_w", n.p_active_w}};
  if (n.queue_limit) j["queue_limit"] = *n.queue_limit;
  return j;
}

json link_json(const LinkSpec& l, const char* from_key, const char* to_key) {
  json j = {{from_key, l.from},
            {"bandwidth_bps", l.bandwidth_bps},
            {"propagation_s", l.propagation_s},
            {"tx_energy_j_per_bit", l.tx_energy_j_per_bit}};
  if (to_key) j[to_key] = l.to;
  return j;
}

std::string line_context(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("scenario syntax error at " + line_context(text, e.byte) + ": " + e.what());
  }

  Scenario s;
  s.base_dir = base_dir;
  std::vector<std::string> missing;
  Reader r(&root, "", s.defaults_applied, missing);

  s.name = r.get<std::string>("name", s.name);
  if (auto seed = r.required<std::uint64_t>("seed")) s.seed = *seed;
  s.duration = r.get("duration_s", s.duration);
  s.warmup_fraction = r.get("warmup_fraction", s.warmup_fraction);

  if (r.has("topology")) {
    s.topology = std::make_shared<const Topology>(read_topology(r.child("topology"), s.defaults_applied, missing));
  } else {
    r.child("topology");
    missing.push_back("missing required field 'topology'");
    s.topology = std::make_shared<const Topology>();
  }

  s.snn = read_snn(r.child("snn"));

  {
    auto p = r.child("policy");
    s.policy.kind = policy_from_string(p.get<std::string>("name", std::string(to_string(s.policy.kind))));
    s.policy.tree_path = p.get<std::string>("tree_path", s.policy.tree_path);
    s.policy.tree_max_depth = p.get("tree_max_depth", s.policy.tree_max_depth);
    s.policy.tree_min_leaf = p.get("tree_min_leaf", s.policy.tree_min_leaf);
    p.finish();
  }
  {
    auto l = r.child("load");
    s.load.label = l.get<std::string>("label", s.load.label);
    s.load.target_utilization = l.get("target_utilization", s.load.target_utilization);
    s.load.lambda_per_device = l.get("lambda_per_device", s.load.lambda_per_device);
    l.finish();
  }
  {
    auto t = r.child("tasks");
    auto& d = s.tasks;
    d.size_mean_bits = t.get("size_mean_bits", d.size_mean_bits);
    d.size_sigma = t.get("size_sigma", d.size_sigma);
    d.intensity_mean_cpb = t.get("intensity_mean_cpb", d.intensity_mean_cpb);
    d.intensity_sigma = t.get("intensity_sigma", d.intensity_sigma);
    d.result_fraction = t.get("result_fraction", d.result_fraction);
    d.slack_factor = t.get("slack_factor", d.slack_factor);
    d.priority_min = t.get("priority_min", d.priority_min);
    d.priority_max = t.get("priority_max", d.priority_max);
    t.finish();
  }
  {
    auto e = r.child("energy");
    s.energy.e_spike_j = e.get("e_spike_j", s.energy.e_spike_j);
    s.energy.e_fixed_j = e.get("e_fixed_j", s.energy.e_fixed_j);
    e.finish();
  }
  {
    auto f = r.child("features");
    auto& fp = s.features;
    fp.latency_norm_s = f.get("latency_norm_s", fp.latency_norm_s);
    fp.latency_ewma_alpha = f.get("latency_ewma_alpha", fp.latency_ewma_alpha);
    fp.size_norm_bits = f.get("size_norm_bits", fp.size_norm_bits);
    fp.energy_budget_j = f.get("energy_budget_j", fp.energy_budget_j);
    f.finish();
  }
  r.finish();

  // Validation.
  std::vector<std::string> bad = std::move(missing);
  if (!(s.duration > 0.0)) bad.emplace_back("duration_s must be > 0");
  if (!(s.warmup_fraction >= 0.0 && s.warmup_fraction < 1.0)) bad.emplace_back("warmup_fraction must lie in [0,1)");
  const auto& d = s.tasks;
  if (!(d.size_mean_bits > 0.0)) bad.emplace_back("tasks.size_mean_bits must be > 0");
  if (!(d.size_sigma > 0.0)) bad.emplace_back("tasks.size_sigma must be > 0");
  if (!(d.intensity_mean_cpb > 0.0)) bad.emplace_back("tasks.intensity_mean_cpb must be > 0");
  if (!(d.intensity_sigma > 0.0)) bad.emplace_back("tasks.intensity_sigma must be > 0");
  if (!(d.result_fraction >= 0.0)) bad.emplace_back("tasks.result_fraction must be >= 0");
  if (!(d.slack_factor > 0.0)) bad.emplace_back("tasks.slack_factor must be > 0");
  if (!(d.priority_min >= 0.0 && d.priority_min <= d.priority_max && d.priority_max <= 1.0))
    bad.emplace_back("tasks.priority_min/priority_max must satisfy 0 <= min <= max <= 1");
  if (!(s.load.target_utilization >= 0.0)) bad.emplace_back("load.target_utilization must be >= 0");
  for (double l : s.load.lambda_per_device)
    if (!(l >= 0.0)) bad.emplace_back("load.lambda_per_device entries must be >= 0");
  if (!s.load.lambda_per_device.empty() && s.load.lambda_per_device.size() != s.topology->devices.size())
    bad.emplace_back("load.lambda_per_device needs one rate per device");
  if (!(s.energy.e_spike_j >= 0.0)) bad.emplace_back("energy.e_spike_j must be >= 0");
  if (!(s.energy.e_fixed_j >= 0.0)) bad.emplace_back("energy.e_fixed_j must be >= 0");
  const auto& fp = s.features;
  if (!(fp.latency_norm_s > 0.0)) bad.emplace_back("features.latency_norm_s must be > 0");
  if (!(fp.latency_ewma_alpha > 0.0 && fp.latency_ewma_alpha <= 1.0))
    bad.emplace_back("features.latency_ewma_alpha must lie in (0,1]");
  if (!(fp.size_norm_bits > 0.0)) bad.emplace_back("features.size_norm_bits must be > 0");
  if (!(fp.energy_budget_j > 0.0)) bad.emplace_back("features.energy_budget_j must be > 0");
  if (s.policy.tree_max_depth < 0) bad.emplace_back("policy.tree_max_depth must be >= 0");
  for (auto& v : validate_topology(*s.topology)) bad.push_back("topology: " + v);
  try {
    s.snn.validate();
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) bad.push_back(v);
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));

  // Initial uplink latency estimate: a mean task's round trip on an idle system.
  if (!s.topology->edge_nodes.empty()) {
    const auto& up = s.topology->uplink_of(s.topology->edge_nodes.front().id);
    s.features.initial_latency_s = transfer_time(d.size_mean_bits, up) + d.mean_cycles() / s.topology->cloud.capacity_cps +
                                   transfer_time(d.result_fraction * d.size_mean_bits, up);
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str(), path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json Scenario::to_json() const {
  const auto& t = *topology;
  json topo;
  topo["edge_nodes"] = json::array();
  for (const auto& n : t.edge_nodes) topo["edge_nodes"].push_back(node_json(n));
  topo["cloud"] = node_json(t.cloud);
  topo["devices"] = json::array();
  for (const auto& d : t.devices) topo["devices"].push_back({{"id", d.id}, {"edge", d.edge}});
  topo["device_links"] = json::array();
  for (const auto& l : t.device_links) topo["device_links"].push_back(link_json(l, "device", "edge"));
  topo["uplinks"] = json::array();
  for (const auto& l : t.uplinks) topo["uplinks"].push_back(link_json(l, "edge", nullptr));

  json j;
  j["name"] = name;
  j["seed"] = seed;
  j["duration_s"] = duration;
  j["warmup_fraction"] = warmup_fraction;
  j["topology"] = std::move(topo);
  j["snn"] = snn_json(snn);
  j["policy"] = {{"name", std::string(workload::to_string(policy.kind))},
                 {"tree_path", policy.tree_path},
                 {"tree_max_depth", policy.tree_max_depth},
                 {"tree_min_leaf", policy.tree_min_leaf}};
  j["load"] = {{"label", load.label},
               {"target_utilization", load.target_utilization},
               {"lambda_per_device", load.lambda_per_device}};
  j["tasks"] = {{"size_mean_bits", tasks.size_mean_bits},         {"size_sigma", tasks.size_sigma},
                {"intensity_mean_cpb", tasks.intensity_mean_cpb}, {"intensity_sigma", tasks.intensity_sigma},
                {"result_fraction", tasks.result_fraction},       {"slack_factor", tasks.slack_factor},
                {"priority_min", tasks.priority_min},             {"priority_max", tasks.priority_max}};
  j["energy"] = {{"e_spike_j", energy.e_spike_j}, {"e_fixed_j", energy.e_fixed_j}};
  j["features"] = {{"latency_norm_s", features.latency_norm_s},
                   {"latency_ewma_alpha", features.latency_ewma_alpha},
                   {"size_norm_bits", features.size_norm_bits},
                   {"energy_budget_j", features.energy_budget_j}};
  return j;
}

std::string Scenario::scenario_hash() const {
  auto j = to_json();
  j.erase("policy");
  j.erase("seed");
  return fnv1a_hex(j.dump());
}

std::string Scenario::config_hash() const { return fnv1a_hex(to_json().dump()); }

sim::SimOptions Scenario::sim_options() const {
  sim::SimOptions o;
  o.measure_start = measure_start();
  o.energy = energy;
  o.features = features;
  return o;
}

std::filesystem::path Scenario::resolved_tree_path() const {
  if (policy.tree_path.empty()) return {};
  std::filesystem::path p(policy.tree_path);
  return p.is_absolute() ? p : base_dir / p;
}

}  // namespace edgesnn::workload
