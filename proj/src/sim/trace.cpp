#include "dynaraft/sim/trace.hpp"

#include <cstdio>
#include <ostream>

namespace dynaraft::sim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string_view message_kind_name(MessageEvent::Kind kind) {
  switch (kind) {
    case MessageEvent::Kind::Sent: return "sent";
    case MessageEvent::Kind::Dropped: return "dropped";
    case MessageEvent::Kind::Delivered: return "delivered";
    case MessageEvent::Kind::Discarded: return "discarded";
  }
  return "unknown";
}

std::string_view message_index_name(std::uint8_t index) {
  static constexpr std::string_view names[] = {
      "heartbeat",    "heartbeat_response", "pre_vote_request", "pre_vote_response",
      "vote_request", "vote_response",      "append_entries",   "append_entries_response",
  };
  return index < std::size(names) ? names[index] : "unknown";
}

class Line {
 public:
  Line& key(std::string_view k) {
    s_ += ",\"";
    s_ += k;
    s_ += "\":";
    return *this;
  }
  Line& str(std::string_view k, std::string_view v) {
    key(k);
    s_ += '"';
    s_ += v;
    s_ += '"';
    return *this;
  }
  Line& num(std::string_view k, std::uint64_t v) {
    key(k);
    s_ += std::to_string(v);
    return *this;
  }
  Line& real(std::string_view k, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    key(k);
    s_ += buf;
    return *this;
  }
  Line& ms(std::string_view k, Micros v) {
    key(k);
    s_ += format_ms(v);
    return *this;
  }
  Line& flag(std::string_view k, bool v) {
    key(k);
    s_ += v ? "true" : "false";
    return *this;
  }
  std::string& raw() { return s_; }

 private:
  std::string s_;
};

void describe(Line& l, const raft::Record& record) {
  std::visit(overloaded{
                 [&](const raft::RoleChanged& r) {
                   l.str("event", "role_changed").str("role", raft::role_name(r.role)).num("term", r.term);
                   if (r.leader) l.num("leader", r.leader->value);
                 },
                 [&](const raft::TimerArmed& r) {
                   l.str("event", "timer_armed").ms("base_ms", r.base).ms("randomized_ms", r.randomized);
                 },
                 [&](const raft::ElectionTimeout& r) {
                   l.str("event", "election_timeout").ms("randomized_ms", r.randomized).str("from",
                                                                                           raft::role_name(r.from));
                 },
                 [&](const raft::CampaignAborted& r) {
                   l.str("event", "campaign_aborted").str("from", raft::role_name(r.from)).num("leader",
                                                                                             r.leader.value);
                 },
                 [&](const raft::TuningApplied& r) {
                   l.str("event", "tuning_applied")
                       .num("leader", r.leader.value)
                       .ms("et_ms", r.output.et)
                       .ms("h_ms", r.output.h)
                       .num("k", static_cast<std::uint64_t>(r.output.k))
                       .real("p", r.output.p)
                       .flag("warm", r.output.warm);
                 },
                 [&](const raft::TuningReset& r) {
                   l.str("event", "tuning_reset").ms("et_ms", r.output.et).ms("h_ms", r.output.h);
                 },
                 [&](const raft::RttMeasured& r) {
                   l.str("event", "rtt_measured").num("follower", r.follower.value).ms("rtt_ms", r.rtt);
                 },
                 [&](const raft::HeartbeatSent& r) {
                   l.str("event", "heartbeat_sent").num("follower", r.follower.value).num("seq", r.seq_id);
                 },
                 [&](const raft::IntervalApplied& r) {
                   l.str("event", "interval_applied").num("follower", r.follower.value).ms("h_ms", r.h);
                 },
                 [&](const raft::QuorumLost& r) { l.str("event", "quorum_lost").num("active", r.active); },
                 [&](const raft::Committed& r) { l.str("event", "committed").num("index", r.index).num("term", r.term); },
                 [&](const raft::Crashed&) { l.str("event", "crashed"); },
                 [&](const raft::Recovered&) { l.str("event", "recovered"); },
             },
             record);
}

}  // namespace

std::string_view fault_kind_name(FaultKind kind) { return kind == FaultKind::Crash ? "crash" : "recover"; }

std::string_view fault_target_name(FaultTarget target) {
  switch (target) {
    case FaultTarget::Server: return "server";
    case FaultTarget::Leader: return "leader";
    case FaultTarget::LastCrashed: return "last-crashed";
  }
  return "unknown";
}

std::string to_ndjson(const TraceEntry& e) {
  Line l;
  l.raw() = "{\"t_ms\":" + format_ms(e.at);
  l.num("server", e.server.value);
  std::visit(overloaded{
                 [&](const raft::Record& r) { describe(l, r); },
                 [&](const MessageEvent& m) {
                   l.str("event", "message")
                       .str("what", message_kind_name(m.kind))
                       .num("peer", m.peer.value)
                       .str("type", message_index_name(m.message));
                 },
                 [&](const FaultSkipped& f) {
                   l.str("event", "fault_skipped").str("kind", fault_kind_name(f.kind)).str("target",
                                                                                          fault_target_name(f.target));
                 },
             },
             e.detail);
  l.raw() += '}';
  return std::move(l.raw());
}

void write_ndjson(std::ostream& os, const EventTrace& trace) {
  for (const auto& e : trace.entries) os << to_ndjson(e) << '\n';
}

std::uint64_t fingerprint(const EventTrace& trace) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::string_view bytes) {
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& e : trace.entries) {
    mix(to_ndjson(e));
    mix("\n");
  }
  mix(format_ms(trace.end));
  return h;
}

}  // namespace dynaraft::sim
