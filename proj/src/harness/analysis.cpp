#include "dynaraft/harness/analysis.hpp"

#include <algorithm>
#include <map>

namespace dynaraft::harness {

namespace {

using std::chrono::seconds;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

struct ServerView {
  raft::Role role = raft::Role::Follower;
  Term term = 0;
  bool crashed = false;
  std::optional<Micros> armed;
  Micros base{};
  tuner::TuningOutput tuning;
};

/// Reconstructs per-server state by replaying trace records in order.
class Replay {
 public:
  explicit Replay(std::size_t servers) : views_(servers) {}

  void apply(const sim::TraceEntry& e) {
    const auto* record = std::get_if<raft::Record>(&e.detail);
    if (!record || e.server.index() >= views_.size()) return;
    auto& v = views_[e.server.index()];
    std::visit(overloaded{
                   [&](const raft::RoleChanged& r) {
                     v.role = r.role;
                     v.term = r.term;
                     if (r.role == raft::Role::Leader) v.armed.reset();
                   },
                   [&](const raft::TimerArmed& r) {
                     v.armed = r.randomized;
                     v.base = r.base;
                   },
                   [&](const raft::ElectionTimeout&) { v.armed.reset(); },
                   [&](const raft::TuningApplied& r) { v.tuning = r.output; },
                   [&](const raft::TuningReset& r) { v.tuning = r.output; },
                   [&](const raft::Crashed&) {
                     v.crashed = true;
                     v.armed.reset();
                   },
                   [&](const raft::Recovered&) { v.crashed = false; },
                   [](const auto&) {},
               },
               *record);
  }

  const std::vector<ServerView>& views() const { return views_; }
  const ServerView& view(ServerId id) const { return views_[id.index()]; }

  std::optional<Term> highest_live_term() const {
    std::optional<Term> best;
    for (const auto& v : views_) {
      if (!v.crashed && (!best || v.term > *best)) best = v.term;
    }
    return best;
  }

  /// A live Leader exists at the highest live term.
  bool served() const {
    const auto top = highest_live_term();
    if (!top) return false;
    return std::any_of(views_.begin(), views_.end(), [&](const ServerView& v) {
      return !v.crashed && v.role == raft::Role::Leader && v.term == *top;
    });
  }

 private:
  std::vector<ServerView> views_;
};

std::size_t whole_seconds(SimTime end) { return static_cast<std::size_t>(end / seconds{1}); }

/// Calls `sample(second, replay)` with the replayed state as of the end of each
/// whole second 1..end.
template <class F>
void sample_seconds(const sim::EventTrace& trace, F&& sample) {
  Replay replay(trace.servers);
  const std::size_t total = whole_seconds(trace.end);
  std::size_t next = 1;
  for (const auto& e : trace.entries) {
    while (next <= total && e.at > SimTime{seconds{next}}) sample(next++, replay);
    replay.apply(e);
  }
  while (next <= total) sample(next++, replay);
}

std::string describe_entry(const sim::TraceEntry& e) {
  return "server " + std::to_string(e.server.value) + " at " + format_ms(e.at) + " ms";
}

}  // namespace

std::optional<SimTime> leader_failure_time(const sim::EventTrace& trace) {
  Replay replay(trace.servers);
  for (const auto& e : trace.entries) {
    if (sim::record_as<raft::Crashed>(e) && e.server.index() < trace.servers) {
      const auto& v = replay.view(e.server);
      const auto top = replay.highest_live_term();
      if (!v.crashed && v.role == raft::Role::Leader && top && v.term == *top) return e.at;
    }
    replay.apply(e);
  }
  return std::nullopt;
}

Detection detection_time(const sim::EventTrace& trace, SimTime failure_at) {
  Detection d;
  d.failure_at = failure_at;
  d.status = Detection::Status::Censored;
  Replay replay(trace.servers);
  for (const auto& e : trace.entries) {
    if (e.at >= failure_at) {
      if (const auto* timeout = sim::record_as<raft::ElectionTimeout>(e)) {
        d.status = Detection::Status::Detected;
        d.time = e.at - failure_at;
        d.detector = e.server;
        Micros sum = timeout->randomized;
        std::int64_t count = 1;
        for (std::uint32_t i = 0; i < trace.servers; ++i) {
          const auto& v = replay.views()[i];
          if (ServerId{i} == e.server || v.crashed || v.role == raft::Role::Leader || !v.armed) continue;
          sum += *v.armed;
          ++count;
        }
        d.mean_randomized = sum / count;
        return d;
      }
    }
    replay.apply(e);
  }
  return d;
}

Detection detection_time(const sim::EventTrace& trace) {
  const auto failure = leader_failure_time(trace);
  if (!failure) return Detection{};
  return detection_time(trace, *failure);
}

std::vector<Interval> ots_intervals(const sim::EventTrace& trace) {
  std::vector<Interval> out;
  Replay replay(trace.servers);
  bool started = false;
  bool open = false;
  SimTime opened{};
  for (const auto& e : trace.entries) {
    replay.apply(e);
    const bool served = replay.served();
    if (!started) {
      if (!served) continue;
      started = true;
    }
    if (!served && !open) {
      open = true;
      opened = e.at;
    } else if (served && open) {
      if (e.at > opened) out.push_back(Interval{opened, e.at});
      open = false;
    }
  }
  if (open && trace.end > opened) out.push_back(Interval{opened, trace.end});
  return out;
}

std::optional<Micros> failure_ots(const std::vector<Interval>& intervals, SimTime failure_at, SimTime trace_end) {
  for (const auto& iv : intervals) {
    if (iv.start <= failure_at && failure_at < iv.end) {
      if (iv.end >= trace_end) return std::nullopt;
      return iv.end - failure_at;
    }
  }
  return Micros::zero();
}

Micros overlap(const std::vector<Interval>& intervals, SimTime from, SimTime to) {
  Micros total{};
  for (const auto& iv : intervals) {
    const SimTime a = std::max(iv.start, from);
    const SimTime b = std::min(iv.end, to);
    if (b > a) total += b - a;
  }
  return total;
}

std::vector<std::optional<Micros>> kth_smallest_timeout_series(const sim::EventTrace& trace, std::size_t k) {
  std::vector<std::optional<Micros>> series;
  std::vector<Micros> armed;
  sample_seconds(trace, [&](std::size_t, const Replay& replay) {
    armed.clear();
    for (const auto& v : replay.views()) {
      if (!v.crashed && v.role != raft::Role::Leader && v.armed) armed.push_back(*v.armed);
    }
    if (k == 0 || armed.size() < k) {
      series.emplace_back(std::nullopt);
      return;
    }
    std::nth_element(armed.begin(), armed.begin() + static_cast<std::ptrdiff_t>(k - 1), armed.end());
    series.emplace_back(armed[k - 1]);
  });
  return series;
}

std::vector<std::uint32_t> heartbeat_rate(const sim::EventTrace& trace, ServerId server) {
  const auto buckets = static_cast<std::size_t>((trace.end + seconds{1} - Micros{1}) / seconds{1});
  std::vector<std::uint32_t> counts(buckets, 0);
  for (const auto& e : trace.entries) {
    if (e.server != server || !sim::record_as<raft::HeartbeatSent>(e)) continue;
    const auto bucket = static_cast<std::size_t>(e.at / seconds{1});
    if (bucket < counts.size()) ++counts[bucket];
  }
  return counts;
}

std::vector<TuningSample> tuning_series(const sim::EventTrace& trace) {
  std::vector<TuningSample> out;
  sample_seconds(trace, [&](std::size_t second, const Replay& replay) {
    for (std::uint32_t i = 0; i < trace.servers; ++i) {
      const auto& v = replay.views()[i];
      out.push_back(TuningSample{second, ServerId{i}, v.role, v.crashed, v.base, v.tuning});
    }
  });
  return out;
}

std::optional<SimTime> first_leader_time(const sim::EventTrace& trace) {
  for (const auto& e : trace.entries) {
    if (const auto* r = sim::record_as<raft::RoleChanged>(e); r && r->role == raft::Role::Leader) return e.at;
  }
  return std::nullopt;
}

RoleCounts role_counts(const sim::EventTrace& trace, SimTime from, SimTime to) {
  RoleCounts counts;
  bool seen_leader = false;
  for (const auto& e : trace.entries) {
    const auto* r = sim::record_as<raft::RoleChanged>(e);
    if (!r) continue;
    if (!seen_leader) {
      seen_leader = r->role == raft::Role::Leader;
      continue;
    }
    if (e.at < from || e.at >= to) continue;
    switch (r->role) {
      case raft::Role::PreCandidate: ++counts.pre_votes; break;
      case raft::Role::Candidate: ++counts.elections; break;
      case raft::Role::Leader: ++counts.leader_changes; break;
      case raft::Role::Follower: break;
    }
  }
  return counts;
}

SafetyViolation::SafetyViolation(std::string what, sim::TraceEntry first, sim::TraceEntry second)
    : std::runtime_error(std::move(what)), first_(std::move(first)), second_(std::move(second)) {}

void audit_safety(const sim::EventTrace& trace) {
  std::map<Term, const sim::TraceEntry*> leaders;
  std::map<LogIndex, std::pair<Term, const sim::TraceEntry*>> committed;
  for (const auto& e : trace.entries) {
    if (const auto* r = sim::record_as<raft::RoleChanged>(e); r && r->role == raft::Role::Leader) {
      auto [it, inserted] = leaders.emplace(r->term, &e);
      if (!inserted && it->second->server != e.server) {
        throw SafetyViolation("two leaders in term " + std::to_string(r->term) + ": " + describe_entry(*it->second) +
                                  " and " + describe_entry(e),
                              *it->second, e);
      }
    } else if (const auto* c = sim::record_as<raft::Committed>(e)) {
      auto [it, inserted] = committed.emplace(c->index, std::make_pair(c->term, &e));
      if (!inserted && it->second.first != c->term) {
        throw SafetyViolation("committed entries differ at index " + std::to_string(c->index) + ": term " +
                                  std::to_string(it->second.first) + " at " + describe_entry(*it->second.second) +
                                  ", term " + std::to_string(c->term) + " at " + describe_entry(e),
                              *it->second.second, e);
      }
    }
  }
}

}  // namespace dynaraft::harness
