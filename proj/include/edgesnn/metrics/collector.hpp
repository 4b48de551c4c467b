#pragma once
// Per-task lifecycle records assembled from kernel transitions.

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <variant>
#include <vector>

#include "edgesnn/core/model.hpp"

namespace edgesnn::metrics {

struct TaskRecord {
  TaskId id = 0;
  NodeId edge = 0;
  double arrival = 0.0;
  double deadline = 0.0;
  std::optional<OffloadDecision> venue;
  std::optional<double> decision;
  std::optional<double> start;
  std::optional<double> finish;
  Outcome outcome = Outcome::unfinished;
  bool excluded = false;  // arrived inside the warmup window

  std::optional<double> latency() const {
    if (!finish) return std::nullopt;
    return *finish - arrival;
  }
};

namespace transition {
struct Arrived {
  Task task;
};
struct Decided {
  TaskId id;
  double time;
  OffloadDecision venue;
};
struct Started {
  TaskId id;
  double time;
};
struct Finished {
  TaskId id;
  double time;
};
struct Dropped {
  TaskId id;
  double time;
};
}  // namespace transition

using Transition =
    std::variant<transition::Arrived, transition::Decided, transition::Started, transition::Finished, transition::Dropped>;

class Collector {
 public:
  // Tasks arriving before `measure_start` are flagged excluded.
  explicit Collector(double measure_start = 0.0) : measure_start_(measure_start) {}

  // Throws OrderViolation when a transition is older than the previous one,
  // and InvariantViolation for transitions of unknown or closed tasks.
  void record(const Transition& t);

  const std::vector<TaskRecord>& records() const noexcept { return records_; }
  const TaskRecord& at(TaskId id) const;
  double measure_start() const noexcept { return measure_start_; }

 private:
  TaskRecord& open(TaskId id);
  void advance(double time);

  double measure_start_;
  double last_time_ = 0.0;
  std::vector<TaskRecord> records_;
  std::unordered_map<TaskId, std::size_t> index_;
};

}  // namespace edgesnn::metrics
