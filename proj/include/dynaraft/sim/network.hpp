#pragma once

#include <random>
#include <string>
#include <vector>

#include "dynaraft/raft/messages.hpp"
#include "dynaraft/types.hpp"

namespace dynaraft::sim {

/// One plateau of a link schedule, active from `start` until the next
/// segment begins.
struct Segment {
  SimTime start{};
  Micros rtt{};
  Micros jitter{};
  double loss = 0.0;

  bool operator==(const Segment&) const = default;
};

/// Piecewise-constant RTT / jitter / loss schedule.
struct LinkProfile {
  std::vector<Segment> schedule;
  double duplication = 0.0;

  /// Last segment whose start is <= t.
  const Segment& segment_at(SimTime t) const;
  Micros rtt_at(SimTime t) const { return segment_at(t).rtt; }
  Micros jitter_at(SimTime t) const { return segment_at(t).jitter; }
  double loss_at(SimTime t) const { return segment_at(t).loss; }

  /// Problems with the schedule, each prefixed by the segment index.
  std::vector<std::string> validate() const;

  static LinkProfile constant(Micros rtt, Micros jitter = Micros{1000}, double loss = 0.0);

  bool operator==(const LinkProfile&) const = default;
};

/// Replaces the default profile for one pair. A symmetric override applies to
/// both directions, otherwise only to `from -> to`.
struct LinkOverride {
  ServerId from;
  ServerId to;
  bool symmetric = true;
  LinkProfile profile;

  bool operator==(const LinkOverride&) const = default;
};

struct NetworkSpec {
  LinkProfile default_profile = LinkProfile::constant(Micros{100'000});
  std::vector<LinkOverride> overrides;

  const LinkProfile& profile(ServerId from, ServerId to) const;

  bool operator==(const NetworkSpec&) const = default;
};

/// Message transport between simulated servers.
///
/// Lossy sends are dropped with the link's current loss rate and may be
/// duplicated; each copy gets an independent delay, so reordering is
/// possible. Reliable sends are never dropped and arrive in send order per
/// directed link.
class Network {
 public:
  Network(NetworkSpec spec, std::size_t servers);

  /// rtt_at(now) / 2 plus uniform jitter in [-jitter, +jitter], never negative.
  Micros one_way_delay(ServerId from, ServerId to, SimTime now, std::mt19937_64& rng) const;

  /// Arrival times for the copies that survive; empty when dropped.
  std::vector<SimTime> deliver(ServerId from, ServerId to, raft::ChannelClass channel, SimTime now,
                               std::mt19937_64& rng);

  const NetworkSpec& spec() const { return spec_; }

 private:
  std::size_t link(ServerId from, ServerId to) const { return from.index() * servers_ + to.index(); }

  NetworkSpec spec_;
  std::size_t servers_;
  std::vector<SimTime> last_reliable_arrival_;
};

}  // namespace dynaraft::sim
