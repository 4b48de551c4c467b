#pragma once

#include <cstddef>
#include <cstdint>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "edgesnn/core/model.hpp"

namespace edgesnn::sim {

enum class EventKind { task_arrival, uplink_done, exec_done, downlink_done, decision_due };

std::string_view to_string(EventKind k) noexcept;

struct SimEvent {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::task_arrival;
  std::size_t task = 0;  // index into the run's task table
  NodeId node = 0;
  OffloadDecision venue = OffloadDecision::local;  // decision_due only

  std::string describe() const;
};

// Min-queue on (time, seq). Sequence numbers are assigned on push, so events
// scheduled for the same instant pop in insertion order.
class EventQueue {
 public:
  std::uint64_t push(SimEvent event);
  SimEvent pop();
  const SimEvent& top() const { return heap_.top(); }
  bool empty() const noexcept { return heap_.empty(); }
  std::size_t size() const noexcept { return heap_.size(); }
  std::uint64_t next_seq() const noexcept { return next_seq_; }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const noexcept {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace edgesnn::sim
