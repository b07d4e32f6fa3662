#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string_view>

#include "lsim/sim_time.hpp"

namespace lsim {

enum class EventKind : std::uint8_t {
  kLinkArrival,
  kPortTransmitDone,
  kTimerExpiry,
  kCnpDelivery,
  kFlowStart,
  kFlowStop,
};

std::string_view EventKindName(EventKind kind);

struct EventHandle {
  std::uint64_t seq = 0;
  SimTime fire_at;

  // Default-constructed handles refer to no event.
  bool valid() const { return seq != 0; }
};

struct SimStats {
  std::uint64_t events_processed = 0;
  SimTime final_time;
};

// Identity of the event currently being (or last) processed.
struct EventRecord {
  SimTime fire_at;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kTimerExpiry;
};

// Deterministic discrete-event core. Events fire in (fire_at, seq) order,
// where seq is assigned at schedule time, so ties resolve in schedule order.
// Not thread-safe: one engine per run.
class Engine {
 public:
  using Action = std::function<void()>;
  using Hook = std::function<void(const EventRecord&)>;

  Engine() = default;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Throws Error(kSchedulingInPast) if at < Now().
  EventHandle Schedule(SimTime at, EventKind kind, Action action);
  EventHandle ScheduleIn(SimTime delay, EventKind kind, Action action) {
    return Schedule(now_ + delay, kind, std::move(action));
  }

  // Returns false if the event already fired, was cancelled, or the handle is
  // empty.
  bool Cancel(EventHandle handle);

  // Processes events until the queue drains.
  SimStats Run();
  // Processes events with fire_at <= bound. The clock stays at the last
  // processed event; it is not advanced to the bound.
  SimStats RunUntil(SimTime bound);

  SimTime Now() const { return now_; }
  bool Empty() const { return queue_.empty(); }
  std::size_t Pending() const { return queue_.size(); }
  SimStats Stats() const { return {events_processed_, now_}; }

  // Invoked after every processed event, e.g. for accounting audits or
  // tracing.
  void SetPostEventHook(Hook hook) { post_event_ = std::move(hook); }

 private:
  struct Key {
    SimTime fire_at;
    std::uint64_t seq;
    auto operator<=>(const Key&) const = default;
  };
  struct Entry {
    EventKind kind;
    Action action;
  };

  bool Step(SimTime bound);

  std::map<Key, Entry> queue_;
  SimTime now_;
  std::uint64_t next_seq_ = 1;
  std::uint64_t events_processed_ = 0;
  Hook post_event_;
};

}  // namespace lsim
