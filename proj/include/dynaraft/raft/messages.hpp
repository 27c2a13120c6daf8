#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dynaraft/tuner.hpp"
#include "dynaraft/types.hpp"

namespace dynaraft::raft {

enum class Role { Follower, PreCandidate, Candidate, Leader };

std::string_view role_name(Role role);

/// Lossy carries heartbeats and their responses; everything else travels on
/// the reliable class (loss-free, FIFO per directed link).
enum class ChannelClass { Lossy, Reliable };

struct LogEntry {
  Term term = 0;
  LogIndex index = 0;
  std::string payload;

  bool operator==(const LogEntry&) const = default;
};

/// Heartbeat with tuning metadata. `send_ts` is the leader's local clock.
struct Heartbeat {
  Term term = 0;
  ServerId leader;
  std::uint64_t seq_id = 0;
  Micros send_ts{};
  std::optional<Micros> last_rtt;
  LogIndex leader_commit = 0;

  bool operator==(const Heartbeat&) const = default;
};

struct HeartbeatResponse {
  Term term = 0;
  ServerId follower;
  Micros echoed_send_ts{};
  std::optional<Micros> tuned_h;

  bool operator==(const HeartbeatResponse&) const = default;
};

/// Pre-vote requests carry the term the candidate would campaign for
/// (its own term + 1); the candidate does not advance its term to send it.
struct PreVoteRequest {
  Term term = 0;
  ServerId candidate;
  Term last_log_term = 0;
  LogIndex last_log_index = 0;

  bool operator==(const PreVoteRequest&) const = default;
};

struct PreVoteResponse {
  Term term = 0;
  ServerId voter;
  bool granted = false;

  bool operator==(const PreVoteResponse&) const = default;
};

struct VoteRequest {
  Term term = 0;
  ServerId candidate;
  Term last_log_term = 0;
  LogIndex last_log_index = 0;

  bool operator==(const VoteRequest&) const = default;
};

struct VoteResponse {
  Term term = 0;
  ServerId voter;
  bool granted = false;

  bool operator==(const VoteResponse&) const = default;
};

struct AppendEntries {
  Term term = 0;
  ServerId leader;
  LogIndex prev_index = 0;
  Term prev_term = 0;
  std::vector<LogEntry> entries;
  LogIndex leader_commit = 0;

  bool operator==(const AppendEntries&) const = default;
};

struct AppendEntriesResponse {
  Term term = 0;
  ServerId follower;
  bool success = false;
  LogIndex match_index = 0;
  /// On rejection: the index the leader should retry from.
  LogIndex conflict_hint = 0;

  bool operator==(const AppendEntriesResponse&) const = default;
};

using Message = std::variant<Heartbeat, HeartbeatResponse, PreVoteRequest, PreVoteResponse, VoteRequest,
                             VoteResponse, AppendEntries, AppendEntriesResponse>;

ChannelClass channel_for(const Message& message);
std::string_view message_name(const Message& message);
Term message_term(const Message& message);

}  // namespace dynaraft::raft
