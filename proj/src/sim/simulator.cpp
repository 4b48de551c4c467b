#include "edgesnn/sim/simulator.hpp"

#include <algorithm>
#include <sstream>

#include "edgesnn/errors.hpp"

namespace edgesnn::sim {

namespace {
double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

Simulator::Simulator(const Topology& topology, policy::Policy& policy, SimOptions options, std::uint64_t seed)
    : topology_(topology),
      policy_(policy),
      options_(options),
      rng_(make_rng(seed, rng_stream::policy)),
      collector_(options.measure_start) {
  for (const auto& spec : topology_.edge_nodes) {
    NodeRuntime rt;
    rt.spec = spec;
    rt.latency_ewma = options_.features.initial_latency_s;
    edges_.push_back(std::move(rt));
  }
  cloud_.spec = topology_.cloud;
}

void Simulator::add_tasks(std::span<const Task> tasks) {
  for (const auto& t : tasks) {
    const std::size_t idx = tasks_.size();
    tasks_.push_back(t);
    edge_of_task_.push_back(topology_.edge_index(t.edge));
    schedule({.time = t.arrival_time, .kind = EventKind::task_arrival, .task = idx, .node = t.edge});
  }
}

std::uint64_t Simulator::schedule(SimEvent event) {
  if (event.time < clock_) {
    throw SchedulingInPast("event " + event.describe() + " scheduled before clock " + std::to_string(clock_));
  }
  const auto seq = queue_.push(event);
  if (event.kind == EventKind::uplink_done) uplinks_in_flight_.emplace(std::make_pair(event.time, seq), event.task);
  return seq;
}

void Simulator::fail(const std::string& what) const {
  std::ostringstream os;
  os << what << "\nlast events:";
  for (const auto& e : tail_) os << "\n  " << e.describe();
  throw InvariantViolation(os.str());
}

RunResult Simulator::run(double t_end) {
  t_end_ = t_end;
  try {
    while (!queue_.empty() && queue_.top().time <= t_end) {
      const SimEvent e = queue_.pop();
      if (e.time < clock_) fail("event popped out of order: " + e.describe());
      clock_ = e.time;
      tail_.push_back(e);
      if (tail_.size() > options_.trace_tail) tail_.pop_front();
      ++events_processed_;
      if (observer_) observer_(e);
      dispatch(e);
    }
  } catch (const InvariantViolation& ex) {
    if (std::string(ex.what()).find("last events:") != std::string::npos) throw;
    fail(ex.what());
  }
  clock_ = std::max(clock_, t_end);

  // Work still in service at t_end contributes its busy time so far.
  for (auto* node : [&] {
         std::vector<NodeRuntime*> all;
         for (auto& n : edges_) all.push_back(&n);
         all.push_back(&cloud_);
         return all;
       }()) {
    if (node->in_service) add_busy(*node, node->busy_start, t_end);
  }

  const double duration = std::max(0.0, t_end - options_.measure_start);
  metrics::EnergyLedger ledger;
  std::int64_t spikes = 0;
  std::int64_t decisions = 0;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& n = edges_[i];
    metrics::NodeActivity act{n.busy_time_measured, duration, n.bits_sent_measured, n.spikes_measured,
                              n.decisions_measured};
    ledger.edge_rows.push_back(metrics::node_energy(act, n.spec, topology_.uplink_of(n.spec.id).tx_energy_j_per_bit,
                                                    options_.energy, policy_.decision_cost()));
    spikes += n.spikes_measured;
    decisions += n.decisions_measured;
  }
  ledger.cloud = metrics::node_energy({cloud_.busy_time_measured, duration, 0.0, 0, 0}, cloud_.spec, 0.0,
                                      options_.energy, policy_.decision_cost());

  RunResult out;
  out.report = metrics::finalize(collector_, std::move(ledger), spikes, decisions);
  out.report.t_end = t_end;
  out.records = collector_.records();
  out.events_processed = events_processed_;

  // Conservation over every arrival, measured or not.
  std::size_t done = 0;
  for (const auto& r : out.records) done += r.outcome != Outcome::unfinished ? 1 : 0;
  std::size_t unfinished = out.records.size() - done;
  const auto& rep = out.report;
  if (rep.n_success + rep.n_miss + rep.n_drop + rep.n_unfinished != rep.n_tasks || done + unfinished != out.records.size())
    fail("task conservation violated");
  return out;
}

void Simulator::dispatch(const SimEvent& e) {
  switch (e.kind) {
    case EventKind::task_arrival:
      handle_arrival(e.task);
      break;
    case EventKind::decision_due:
      route(e.task, e.venue);
      break;
    case EventKind::uplink_done: {
      uplinks_in_flight_.erase({e.time, e.seq});
      cloud_.fifo.push_back(e.task);
      if (!cloud_.in_service) start_next(cloud_, true);
      break;
    }
    case EventKind::exec_done: {
      const bool is_cloud = e.node == cloud_.spec.id;
      auto& node = is_cloud ? cloud_ : edges_[edge_of_task_[e.task]];
      if (!node.in_service || *node.in_service != e.task) fail("ExecDone for a task not in service");
      add_busy(node, node.busy_start, clock_);
      node.busy_time_accum += clock_ - node.busy_start;
      node.in_service.reset();
      if (is_cloud) {
        const auto& up = topology_.uplink_of(tasks_[e.task].edge);
        schedule({.time = clock_ + transfer_time(tasks_[e.task].result_bits, up),
                  .kind = EventKind::downlink_done,
                  .task = e.task,
                  .node = tasks_[e.task].edge});
      } else {
        complete_task(e.task, OffloadDecision::local, clock_);
      }
      start_next(node, is_cloud);
      break;
    }
    case EventKind::downlink_done:
      complete_task(e.task, OffloadDecision::cloud, clock_);
      break;
  }
}

policy::PolicyContext Simulator::context_for(const Task& task) const {
  const std::size_t ei = topology_.edge_index(task.edge);
  const auto& node = edges_[ei];
  const auto& fp = options_.features;
  policy::PolicyContext ctx;
  ctx.clock = clock_;
  ctx.edge_node = task.edge;
  ctx.edge_index = ei;
  ctx.queue_length = node.resident();
  ctx.queue_limit = node.spec.queue_limit.value_or(1);
  ctx.recent_uplink_latency = node.latency_ewma;
  ctx.energy_spent_j = energy_spent(node);
  ctx.features.net_latency = clamp01(node.latency_ewma / fp.latency_norm_s);
  ctx.features.energy_level = clamp01(1.0 - ctx.energy_spent_j / fp.energy_budget_j);
  ctx.features.priority = clamp01(task.priority);
  ctx.features.queue_util = clamp01(static_cast<double>(ctx.queue_length) / static_cast<double>(ctx.queue_limit));
  ctx.features.size_norm = clamp01(task.size_bits / fp.size_norm_bits);
  ctx.system = this;
  return ctx;
}

double Simulator::energy_spent(const NodeRuntime& n) const {
  const double busy = n.busy_time_accum + (n.in_service ? clock_ - n.busy_start : 0.0);
  return n.spec.p_idle_w * (clock_ - busy) + n.spec.p_active_w * busy + n.tx_j_accum + n.decision_j_accum;
}

void Simulator::handle_arrival(std::size_t ti) {
  const Task& task = tasks_[ti];
  collector_.record(metrics::transition::Arrived{task});
  const auto ctx = context_for(task);
  const auto d = policy_.decide(ctx, task, rng_);

  auto& node = edges_[edge_of_task_[ti]];
  const double cost = policy_.decision_cost() == metrics::DecisionCost::per_spike
                          ? options_.energy.e_spike_j * static_cast<double>(d.spikes)
                          : options_.energy.e_fixed_j;
  node.decision_j_accum += cost;
  if (clock_ >= options_.measure_start) {
    node.spikes_measured += d.spikes;
    ++node.decisions_measured;
  }

  if (d.delay > 0.0) {
    schedule({.time = clock_ + d.delay, .kind = EventKind::decision_due, .task = ti, .node = task.edge,
              .venue = d.venue});
  } else {
    route(ti, d.venue);
  }
}

void Simulator::route(std::size_t ti, OffloadDecision venue) {
  const Task& task = tasks_[ti];
  collector_.record(metrics::transition::Decided{task.id, clock_, venue});
  auto& node = edges_[edge_of_task_[ti]];
  if (venue == OffloadDecision::local) {
    if (node.resident() >= node.spec.queue_limit.value_or(std::numeric_limits<std::size_t>::max())) {
      drop_task(ti);
      return;
    }
    node.fifo.push_back(ti);
    if (!node.in_service) start_next(node, false);
    return;
  }
  const auto& up = topology_.uplink_of(task.edge);
  node.tx_j_accum += up.tx_energy_j_per_bit * task.size_bits;
  if (clock_ >= options_.measure_start) node.bits_sent_measured += task.size_bits;
  schedule({.time = clock_ + transfer_time(task.size_bits, up), .kind = EventKind::uplink_done, .task = ti,
            .node = topology_.cloud.id});
}

void Simulator::start_next(NodeRuntime& node, bool is_cloud) {
  if (node.in_service || node.fifo.empty()) return;
  const std::size_t ti = node.fifo.front();
  node.fifo.pop_front();
  node.in_service = ti;
  node.busy_start = clock_;
  node.busy_until = clock_ + local_exec_time(tasks_[ti], node.spec);
  collector_.record(metrics::transition::Started{tasks_[ti].id, clock_});
  schedule({.time = node.busy_until, .kind = EventKind::exec_done, .task = ti,
            .node = is_cloud ? cloud_.spec.id : node.spec.id});
}

void Simulator::add_busy(NodeRuntime& node, double start, double finish) {
  const double lo = std::max(start, options_.measure_start);
  const double hi = std::min(finish, t_end_);
  if (hi > lo) node.busy_time_measured += hi - lo;
}

void Simulator::complete_task(std::size_t ti, OffloadDecision venue, double finish_time) {
  const Task& task = tasks_[ti];
  collector_.record(metrics::transition::Finished{task.id, finish_time});
  const auto& rec = collector_.at(task.id);
  if (venue == OffloadDecision::cloud) {
    auto& node = edges_[edge_of_task_[ti]];
    const double rtt = finish_time - *rec.decision;
    const double a = options_.features.latency_ewma_alpha;
    node.latency_ewma = a * rtt + (1.0 - a) * node.latency_ewma;
  }
  policy_.feedback(task, rec.outcome, finish_time - task.arrival_time);
}

void Simulator::drop_task(std::size_t ti) {
  const Task& task = tasks_[ti];
  collector_.record(metrics::transition::Dropped{task.id, clock_});
  policy_.feedback(task, Outcome::queue_drop, 0.0);
}

double Simulator::edge_free_at(std::size_t edge_index) const {
  const auto& n = edges_.at(edge_index);
  double t = n.in_service ? n.busy_until : clock_;
  for (auto ti : n.fifo) t = t + local_exec_time(tasks_[ti], n.spec);
  return t;
}

double Simulator::cloud_finish_at(double cloud_arrival, double cycles) const {
  double t = cloud_.in_service ? cloud_.busy_until : clock_;
  for (auto ti : cloud_.fifo) t = t + local_exec_time(tasks_[ti], cloud_.spec);
  for (const auto& [key, ti] : uplinks_in_flight_) {
    if (key.first > cloud_arrival) break;
    t = std::max(t, key.first) + local_exec_time(tasks_[ti], cloud_.spec);
  }
  Task probe;
  probe.cycles = cycles;
  return std::max(t, cloud_arrival) + local_exec_time(probe, cloud_.spec);
}

}  // namespace edgesnn::sim
