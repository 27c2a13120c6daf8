#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "dynaraft/raft/node.hpp"
#include "dynaraft/types.hpp"

namespace dynaraft::sim {

enum class FaultKind { Crash, Recover };

/// Who a fault applies to. `Leader` is resolved when the fault fires (crash
/// only); `LastCrashed` names the most recently crashed server (recover only).
enum class FaultTarget { Server, Leader, LastCrashed };

std::string_view fault_kind_name(FaultKind kind);
std::string_view fault_target_name(FaultTarget target);

/// Message-level events, only traced when message recording is on.
struct MessageEvent {
  enum class Kind { Sent, Dropped, Delivered, Discarded };
  Kind kind = Kind::Sent;
  ServerId peer;
  std::uint8_t message = 0;  // index into raft::Message
  bool operator==(const MessageEvent&) const = default;
};

/// A fault that could not be applied (no leader, nobody crashed, already
/// in the requested state).
struct FaultSkipped {
  FaultKind kind = FaultKind::Crash;
  FaultTarget target = FaultTarget::Server;
  bool operator==(const FaultSkipped&) const = default;
};

using TraceDetail = std::variant<raft::Record, MessageEvent, FaultSkipped>;

struct TraceEntry {
  SimTime at{};
  ServerId server;
  TraceDetail detail;
  bool operator==(const TraceEntry&) const = default;
};

struct EventTrace {
  std::size_t servers = 0;
  SimTime end{};
  std::vector<TraceEntry> entries;
};

/// The record inside `e` if it is a raft record of type T.
template <class T>
const T* record_as(const TraceEntry& e) {
  const auto* r = std::get_if<raft::Record>(&e.detail);
  return r ? std::get_if<T>(r) : nullptr;
}

/// One JSON object per line, keys in fixed order; times in ms with three
/// decimals.
std::string to_ndjson(const TraceEntry& e);
void write_ndjson(std::ostream& os, const EventTrace& trace);

/// FNV-1a over the NDJSON form; equal traces hash equal.
std::uint64_t fingerprint(const EventTrace& trace);

}  // namespace dynaraft::sim
