#pragma once

#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "dynaraft/raft/messages.hpp"
#include "dynaraft/tuner.hpp"
#include "dynaraft/types.hpp"

namespace dynaraft::raft {

using namespace std::chrono_literals;

// ---------------------------------------------------------------------------
// Inputs

enum class TimerKind { Election, Heartbeat, CheckQuorum };

/// `peer` names the follower for heartbeat timers and is the node itself
/// otherwise. A firing whose deadline no longer matches the armed one is
/// stale and ignored.
struct TimerFired {
  TimerKind kind = TimerKind::Election;
  ServerId peer;
  SimTime deadline{};
};

struct MessageReceived {
  ServerId from;
  Message message;
};

struct CrashInjected {};
struct RecoverInjected {};

/// A client request; only a leader appends it.
struct ClientProposal {
  std::string payload;
};

using Input = std::variant<TimerFired, MessageReceived, CrashInjected, RecoverInjected, ClientProposal>;

// ---------------------------------------------------------------------------
// Outputs

struct Send {
  ServerId to;
  Message message;
  ChannelClass channel = ChannelClass::Reliable;

  bool operator==(const Send&) const = default;
};

struct SetTimer {
  TimerKind kind = TimerKind::Election;
  ServerId peer;
  SimTime deadline{};

  bool operator==(const SetTimer&) const = default;
};

struct RoleChanged {
  Role role = Role::Follower;
  Term term = 0;
  std::optional<ServerId> leader;
  bool operator==(const RoleChanged&) const = default;
};

/// The election timer was (re)armed with a fresh draw from [base, 2 * base).
struct TimerArmed {
  Micros base{};
  Micros randomized{};
  bool operator==(const TimerArmed&) const = default;
};

/// The election timer expired: the node suspects the leader.
struct ElectionTimeout {
  Micros randomized{};
  Role from = Role::Follower;
  bool operator==(const ElectionTimeout&) const = default;
};

/// A pre-candidate or candidate heard from a live leader and reverted.
struct CampaignAborted {
  Role from = Role::PreCandidate;
  ServerId leader;
  bool operator==(const CampaignAborted&) const = default;
};

/// Follower-side tuning result for the link to `leader`.
struct TuningApplied {
  ServerId leader;
  tuner::TuningOutput output;
  bool operator==(const TuningApplied&) const = default;
};

/// Measurement window discarded; tuning reverts to the defaults in `output`.
struct TuningReset {
  tuner::TuningOutput output;
  bool operator==(const TuningReset&) const = default;
};

struct RttMeasured {
  ServerId follower;
  Micros rtt{};
  bool operator==(const RttMeasured&) const = default;
};

struct HeartbeatSent {
  ServerId follower;
  std::uint64_t seq_id = 0;
  bool operator==(const HeartbeatSent&) const = default;
};

/// Leader-side heartbeat interval for one follower changed.
struct IntervalApplied {
  ServerId follower;
  Micros h{};
  bool operator==(const IntervalApplied&) const = default;
};

struct QuorumLost {
  std::size_t active = 0;
  bool operator==(const QuorumLost&) const = default;
};

struct Committed {
  LogIndex index = 0;
  Term term = 0;
  bool operator==(const Committed&) const = default;
};

struct Crashed {
  bool operator==(const Crashed&) const = default;
};

struct Recovered {
  bool operator==(const Recovered&) const = default;
};

using Record = std::variant<RoleChanged, TimerArmed, ElectionTimeout, CampaignAborted, TuningApplied, TuningReset,
                            RttMeasured, HeartbeatSent, IntervalApplied, QuorumLost, Committed, Crashed, Recovered>;

struct RecordEvent {
  Record record;
  bool operator==(const RecordEvent&) const = default;
};

using Action = std::variant<Send, SetTimer, RecordEvent>;
using ActionList = std::vector<Action>;

// ---------------------------------------------------------------------------

enum class TuningMode {
  Static,    ///< fixed E_t and h (Raft, Raft-Low)
  Dynatune,  ///< E_t from RTT statistics, h = E_t / K(p)
  FixedK,    ///< E_t tuned, h = E_t / fixed_k
};

struct NodeConfig {
  ServerId id;
  std::size_t cluster_size = 5;
  TuningMode mode = TuningMode::Dynatune;
  Micros static_et = 1000ms;
  Micros static_h = 100ms;
  int fixed_k = 10;
  tuner::TunerConfig tuner;
  /// Leader steps down when a majority has not acknowledged a heartbeat sent
  /// within the last leader timeout.
  bool check_quorum = true;
  /// Added to simulation time to form this server's local clock.
  Micros clock_offset{};
  std::uint64_t seed = 0;
};

/// Uniform draw from [et, 2 * et).
Micros randomize_timeout(Micros et, std::mt19937_64& rng);

/// Event-driven Raft server with pre-vote and heartbeat-based tuning.
///
/// The node performs no I/O: every input yields an ActionList that the
/// caller executes. All time comes from the caller. Copying a node copies
/// its random generator, so a copy stepped with the same inputs produces the
/// same actions.
class Node {
 public:
  explicit Node(NodeConfig config);

  /// Arms the first election timer.
  ActionList start(SimTime now);

  ActionList step(const Input& input, SimTime now);

  ActionList on_heartbeat(const Heartbeat& hb, SimTime now);
  ActionList on_heartbeat_response(const HeartbeatResponse& resp, SimTime now);
  ActionList leader_tick(ServerId follower, SimTime now);

  ServerId id() const { return config_.id; }
  const NodeConfig& config() const { return config_; }
  Role role() const { return role_; }
  Term term() const { return term_; }
  bool crashed() const { return crashed_; }
  std::optional<ServerId> leader() const { return leader_; }
  std::optional<ServerId> voted_for() const { return voted_for_; }
  const std::vector<LogEntry>& log() const { return log_; }
  LogIndex commit_index() const { return commit_index_; }
  LogIndex last_log_index() const { return log_.empty() ? 0 : log_.back().index; }
  Term last_log_term() const { return log_.empty() ? 0 : log_.back().term; }

  /// E_t currently governing this node's election timer.
  Micros election_timeout() const;
  Micros randomized_timeout() const { return randomized_; }
  std::optional<SimTime> election_deadline() const { return election_deadline_; }
  const tuner::MeasurementWindow& window() const { return window_; }
  const tuner::TuningOutput& tuning() const { return tuning_; }

  /// Leader-side interval currently used for `follower`.
  Micros heartbeat_interval(ServerId follower) const;
  std::optional<Micros> pending_rtt(ServerId follower) const;
  std::uint64_t last_seq_id(ServerId follower) const;

  std::size_t majority() const { return config_.cluster_size / 2 + 1; }

 private:
  struct Peer {
    std::uint64_t seq = 0;
    std::optional<Micros> last_rtt;
    Micros h{};
    SimTime last_send{};
    std::optional<SimTime> hb_deadline;
    LogIndex next_index = 1;
    LogIndex match_index = 0;
    std::optional<SimTime> last_append;
    std::optional<Micros> last_ack_send_ts;  // leader local clock
  };

  Micros local_clock(SimTime now) const { return now + config_.clock_offset; }
  Micros leader_timeout() const;
  Micros default_interval() const;
  bool tunes() const { return config_.mode != TuningMode::Static; }
  bool lost_leader() const;
  bool log_up_to_date(Term last_term, LogIndex last_index) const;
  Term term_at(LogIndex index) const;

  void emit(ActionList& out, Record record) const;
  void send(ActionList& out, ServerId to, Message message) const;
  void set_role(ActionList& out, Role role);
  void reset_election_timer(ActionList& out, SimTime now);
  void reset_tuning(ActionList& out);
  void refresh_tuning(ActionList& out);

  void become_follower(ActionList& out, SimTime now, Term term, std::optional<ServerId> leader);
  void become_pre_candidate(ActionList& out, SimTime now);
  void become_candidate(ActionList& out, SimTime now);
  void become_leader(ActionList& out, SimTime now);
  /// Accepts `leader` at `term` (>= own term) from a heartbeat or append.
  void follow(ActionList& out, SimTime now, Term term, ServerId leader);

  void on_election_timer(ActionList& out, SimTime now);
  void on_check_quorum(ActionList& out, SimTime now);
  void handle_heartbeat(ActionList& out, const Heartbeat& hb, SimTime now);
  void handle_heartbeat_response(ActionList& out, const HeartbeatResponse& resp, SimTime now);
  void tick(ActionList& out, ServerId follower, SimTime now);
  void handle(ActionList& out, ServerId from, const PreVoteRequest& req, SimTime now);
  void handle(ActionList& out, ServerId from, const PreVoteResponse& resp, SimTime now);
  void handle(ActionList& out, ServerId from, const VoteRequest& req, SimTime now);
  void handle(ActionList& out, ServerId from, const VoteResponse& resp, SimTime now);
  void handle(ActionList& out, ServerId from, const AppendEntries& req, SimTime now);
  void handle(ActionList& out, ServerId from, const AppendEntriesResponse& resp, SimTime now);
  void send_append(ActionList& out, ServerId follower, SimTime now);
  void advance_commit(ActionList& out, LogIndex candidate_index);
  void commit_to(ActionList& out, LogIndex index);
  void append_local(Term term, std::string payload);

  NodeConfig config_;
  std::mt19937_64 rng_;
  bool crashed_ = false;

  // Persistent state.
  Term term_ = 0;
  std::optional<ServerId> voted_for_;
  std::vector<LogEntry> log_;

  // Volatile state.
  Role role_ = Role::Follower;
  std::optional<ServerId> leader_;
  LogIndex commit_index_ = 0;
  std::optional<SimTime> election_deadline_;
  Micros randomized_{};
  std::vector<bool> prevotes_;
  std::vector<bool> votes_;

  // Follower-side measurement of the link to the current leader.
  tuner::MeasurementWindow window_;
  tuner::TuningOutput tuning_;
  LogIndex leader_match_ = 0;  // highest index known to match the current leader

  // Leader-side state, indexed by server id.
  std::vector<Peer> peers_;
  std::optional<SimTime> quorum_deadline_;
};

}  // namespace dynaraft::raft
