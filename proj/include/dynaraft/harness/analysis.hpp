#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynaraft/sim/trace.hpp"

namespace dynaraft::harness {

struct Interval {
  SimTime start{};
  SimTime end{};
  Micros length() const { return end - start; }
  bool operator==(const Interval&) const = default;
};

/// First crash that took down the serving leader (a live Leader at the
/// highest live term), if any.
std::optional<SimTime> leader_failure_time(const sim::EventTrace& trace);

struct Detection {
  enum class Status { Detected, Censored, Inapplicable };
  Status status = Status::Inapplicable;
  SimTime failure_at{};
  Micros time{};  // detection instant - failure_at
  ServerId detector;
  /// Mean armed timeout over live non-leaders at the detection instant; the
  /// detector contributes the timeout that just fired.
  Micros mean_randomized{};
};

/// Time from `failure_at` to the first election-timer expiry at a live
/// server. Censored when no expiry occurs before the trace ends.
Detection detection_time(const sim::EventTrace& trace, SimTime failure_at);
/// Locates the leader failure itself; Inapplicable when no leader crashed.
Detection detection_time(const sim::EventTrace& trace);

/// Maximal intervals with no live Leader at the highest term known to any
/// live server. Counting starts once the first leader is elected; an
/// interval still open at the end of the trace is closed there.
std::vector<Interval> ots_intervals(const sim::EventTrace& trace);

/// Time from `failure_at` until a leader serves again; nullopt if never.
std::optional<Micros> failure_ots(const std::vector<Interval>& intervals, SimTime failure_at, SimTime trace_end);

/// Overlap of `intervals` with [from, to).
Micros overlap(const std::vector<Interval>& intervals, SimTime from, SimTime to);

/// Sample at the end of each whole second s = 1..: the k-th smallest armed
/// election timeout across live non-leaders, absent when fewer than k exist.
std::vector<std::optional<Micros>> kth_smallest_timeout_series(const sim::EventTrace& trace, std::size_t k);

/// Heartbeat sends by `server` in each second [s, s + 1).
std::vector<std::uint32_t> heartbeat_rate(const sim::EventTrace& trace, ServerId server);

struct TuningSample {
  std::size_t second = 0;
  ServerId server;
  raft::Role role = raft::Role::Follower;
  bool crashed = false;
  /// Base of the most recently armed election timer.
  Micros election_timeout{};
  /// Latest follower-side tuning result (default-constructed before any).
  tuner::TuningOutput output;
};

/// Follower-side tuning state of every server at the end of each second.
std::vector<TuningSample> tuning_series(const sim::EventTrace& trace);

struct RoleCounts {
  std::size_t pre_votes = 0;       // entries into PreCandidate
  std::size_t elections = 0;       // entries into Candidate
  std::size_t leader_changes = 0;  // entries into Leader
};

/// Role transitions in [from, to), ignoring everything up to and including
/// the first leader's election.
RoleCounts role_counts(const sim::EventTrace& trace, SimTime from = SimTime::zero(),
                       SimTime to = SimTime::max());

/// Time the first leader was elected.
std::optional<SimTime> first_leader_time(const sim::EventTrace& trace);

class SafetyViolation : public std::runtime_error {
 public:
  SafetyViolation(std::string what, sim::TraceEntry first, sim::TraceEntry second);
  const sim::TraceEntry& first() const { return first_; }
  const sim::TraceEntry& second() const { return second_; }

 private:
  sim::TraceEntry first_;
  sim::TraceEntry second_;
};

/// Throws SafetyViolation on two leaders in one term or two different
/// committed entries at one index.
void audit_safety(const sim::EventTrace& trace);

}  // namespace dynaraft::harness
