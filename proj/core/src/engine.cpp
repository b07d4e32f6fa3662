#include "lsim/engine.hpp"

#include <string>

#include "lsim/error.hpp"

namespace lsim {

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kLinkArrival:
      return "LinkArrival";
    case EventKind::kPortTransmitDone:
      return "PortTransmitDone";
    case EventKind::kTimerExpiry:
      return "TimerExpiry";
    case EventKind::kCnpDelivery:
      return "CnpDelivery";
    case EventKind::kFlowStart:
      return "FlowStart";
    case EventKind::kFlowStop:
      return "FlowStop";
  }
  return "Unknown";
}

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchedulingInPast:
      return "SchedulingInPast";
    case ErrorCode::kInvalidParameter:
      return "InvalidParameter";
    case ErrorCode::kInvalidHost:
      return "InvalidHost";
    case ErrorCode::kLinkBusy:
      return "LinkBusy";
    case ErrorCode::kBufferOverflow:
      return "BufferOverflow";
    case ErrorCode::kMisroutedPacket:
      return "MisroutedPacket";
    case ErrorCode::kUnknownFlow:
      return "UnknownFlow";
    case ErrorCode::kNoDeliveries:
      return "NoDeliveries";
    case ErrorCode::kLifecycle:
      return "Lifecycle";
    case ErrorCode::kIo:
      return "IoError";
    case ErrorCode::kParse:
      return "ParseError";
    case ErrorCode::kValidation:
      return "ValidationError";
    case ErrorCode::kAuditFailure:
      return "AuditFailure";
  }
  return "Unknown";
}

EventHandle Engine::Schedule(SimTime at, EventKind kind, Action action) {
  if (at < now_) {
    throw Error(ErrorCode::kSchedulingInPast,
                "event at " + std::to_string(at.ps()) +
                    " ps scheduled with clock at " +
                    std::to_string(now_.ps()) + " ps");
  }
  const std::uint64_t seq = next_seq_++;
  queue_.emplace(Key{at, seq}, Entry{kind, std::move(action)});
  return EventHandle{seq, at};
}

bool Engine::Cancel(EventHandle handle) {
  if (!handle.valid()) return false;
  return queue_.erase(Key{handle.fire_at, handle.seq}) > 0;
}

bool Engine::Step(SimTime bound) {
  if (queue_.empty()) return false;
  auto it = queue_.begin();
  if (it->first.fire_at > bound) return false;
  const EventRecord record{it->first.fire_at, it->first.seq, it->second.kind};
  Action action = std::move(it->second.action);
  queue_.erase(it);
  now_ = record.fire_at;
  ++events_processed_;
  action();
  if (post_event_) post_event_(record);
  return true;
}

SimStats Engine::Run() { return RunUntil(SimTime::Max()); }

SimStats Engine::RunUntil(SimTime bound) {
  while (Step(bound)) {
  }
  return Stats();
}

}  // namespace lsim
