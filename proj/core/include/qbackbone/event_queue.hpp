#ifndef QBACKBONE_EVENT_QUEUE_HPP
#define QBACKBONE_EVENT_QUEUE_HPP

#include <cstdint>
#include <functional>
#include <queue>
#include <string_view>
#include <vector>

namespace qbackbone {

enum class EventKind : std::uint8_t {
  frame_generated,
  frame_at_egress,
  classical_at_ingress,
  frame_delivered,
  channel_step,
  source_window_edge,
  simulation_end,
};

std::string_view event_kind_name(EventKind kind) noexcept;

struct Event {
  double time_s = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::simulation_end;
  /// Frame id for frame events, unused otherwise.
  std::uint64_t subject = 0;
};

/// Min-heap on (time, seq). Sequence numbers are handed out at scheduling
/// time, so events at equal times run in the order they were scheduled.
class EventQueue {
public:
  const Event& schedule(double time_s, EventKind kind, std::uint64_t subject = 0) {
    heap_.push(Event{time_s, next_seq_++, kind, subject});
    return heap_.top();
  }

  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
  }

  const Event& top() const { return heap_.top(); }
  bool empty() const noexcept { return heap_.empty(); }
  std::size_t size() const noexcept { return heap_.size(); }

private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const noexcept {
      return a.time_s != b.time_s ? a.time_s > b.time_s : a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace qbackbone

#endif  // QBACKBONE_EVENT_QUEUE_HPP
