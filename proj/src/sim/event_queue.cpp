#include "edgesnn/sim/event_queue.hpp"

#include <cstdio>
#include <stdexcept>

namespace edgesnn::sim {

std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::task_arrival: return "TaskArrival";
    case EventKind::uplink_done: return "UplinkDone";
    case EventKind::exec_done: return "ExecDone";
    case EventKind::downlink_done: return "DownlinkDone";
    case EventKind::decision_due: return "DecisionDue";
  }
  return "?";
}

std::string SimEvent::describe() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "t=%.9f seq=%llu %s task=%zu node=%d", time, static_cast<unsigned long long>(seq),
                std::string(to_string(kind)).c_str(), task, node);
  return buf;
}

std::uint64_t EventQueue::push(SimEvent event) {
  event.seq = next_seq_++;
  heap_.push(event);
  return event.seq;
}

SimEvent EventQueue::pop() {
  if (heap_.empty()) throw std::logic_error("pop on empty event queue");
  SimEvent e = heap_.top();
  heap_.pop();
  return e;
}

}  // namespace edgesnn::sim
