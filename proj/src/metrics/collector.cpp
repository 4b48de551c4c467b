#include "edgesnn/metrics/collector.hpp"

#include <string>

#include "edgesnn/errors.hpp"

namespace edgesnn::metrics {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

void Collector::advance(double time) {
  if (time < last_time_)
    throw OrderViolation("transition at t=" + std::to_string(time) + " precedes previous t=" +
                         std::to_string(last_time_));
  last_time_ = time;
}

TaskRecord& Collector::open(TaskId id) {
  auto it = index_.find(id);
  if (it == index_.end()) throw InvariantViolation("transition for unknown task " + std::to_string(id));
  auto& r = records_[it->second];
  if (r.outcome != Outcome::unfinished) throw InvariantViolation("transition for closed task " + std::to_string(id));
  return r;
}

const TaskRecord& Collector::at(TaskId id) const { return records_.at(index_.at(id)); }

void Collector::record(const Transition& t) {
  std::visit(overloaded{
                 [&](const transition::Arrived& e) {
                   advance(e.task.arrival_time);
                   if (index_.count(e.task.id)) throw InvariantViolation("task " + std::to_string(e.task.id) + " arrived twice");
                   index_.emplace(e.task.id, records_.size());
                   TaskRecord r;
                   r.id = e.task.id;
                   r.edge = e.task.edge;
                   r.arrival = e.task.arrival_time;
                   r.deadline = e.task.deadline;
                   r.excluded = e.task.arrival_time < measure_start_;
                   records_.push_back(r);
                 },
                 [&](const transition::Decided& e) {
                   advance(e.time);
                   auto& r = open(e.id);
                   r.decision = e.time;
                   r.venue = e.venue;
                 },
                 [&](const transition::Started& e) {
                   advance(e.time);
                   open(e.id).start = e.time;
                 },
                 [&](const transition::Finished& e) {
                   advance(e.time);
                   auto& r = open(e.id);
                   r.finish = e.time;
                   r.outcome = e.time <= r.deadline ? Outcome::success : Outcome::deadline_miss;
                 },
                 [&](const transition::Dropped& e) {
                   advance(e.time);
                   open(e.id).outcome = Outcome::queue_drop;
                 },
             },
             t);
}

}  // namespace edgesnn::metrics
