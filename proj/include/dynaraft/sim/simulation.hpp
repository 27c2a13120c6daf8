#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <variant>
#include <vector>

#include "dynaraft/raft/node.hpp"
#include "dynaraft/sim/network.hpp"
#include "dynaraft/sim/trace.hpp"

namespace dynaraft::sim {

struct Fault {
  FaultKind kind = FaultKind::Crash;
  SimTime at{};
  FaultTarget target = FaultTarget::Server;
  ServerId server;  // used when target == Server

  bool operator==(const Fault&) const = default;
};

struct SimConfig {
  std::size_t servers = 5;
  /// Shared node settings; id, seed and clock offset are filled per server.
  raft::NodeConfig node;
  /// Per-server local clock offsets; missing entries are zero.
  std::vector<Micros> clock_offsets;
  NetworkSpec network;
  std::vector<Fault> faults;
  SimTime duration = std::chrono::seconds{60};
  std::uint64_t seed = 1;
  /// When positive, the leader is offered a client proposal this often.
  Micros probe_interval{};
  /// Trace every message send, drop and delivery.
  bool record_messages = false;
};

/// Discrete-event driver for a cluster of raft::Node.
///
/// Events fire in (time, insertion order). Node seeds come from the
/// simulation seed, and the network draws from its own generator, so a given
/// config always produces the same trace.
class Simulation {
 public:
  explicit Simulation(SimConfig config);

  /// Runs until `duration` (events at exactly `duration` still fire) and
  /// hands over the trace.
  EventTrace run();

  /// Processes the next event; false when none is due before `duration`.
  bool step();

  SimTime now() const { return now_; }
  std::size_t size() const { return nodes_.size(); }
  const raft::Node& node(ServerId id) const { return nodes_.at(id.index()); }
  const EventTrace& trace() const { return trace_; }
  const Network& network() const { return network_; }

  /// Live leader with the highest term, if any.
  std::optional<ServerId> current_leader() const;

  /// Applies a fault immediately.
  void inject(const Fault& fault);

 private:
  struct Delivery {
    ServerId from;
    ServerId to;
    raft::Message message;
  };
  struct Timer {
    ServerId server;
    raft::TimerFired fired;
  };
  struct FaultFire {
    Fault fault;
  };
  struct ProbeTick {};
  using Payload = std::variant<Delivery, Timer, FaultFire, ProbeTick>;

  struct Event {
    SimTime at;
    std::uint64_t seq;
    Payload payload;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  void schedule(SimTime at, Payload payload);
  void execute(ServerId server, raft::ActionList actions);
  void record(ServerId server, TraceDetail detail);
  void dispatch(Payload& payload);

  SimConfig config_;
  Network network_;
  std::mt19937_64 net_rng_;
  std::vector<raft::Node> nodes_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_seq_ = 0;
  SimTime now_{};
  bool started_ = false;
  std::optional<ServerId> last_crashed_;
  std::uint64_t next_proposal_ = 0;
  EventTrace trace_;
};

/// Convenience: construct and run.
EventTrace simulate(SimConfig config);

}  // namespace dynaraft::sim
