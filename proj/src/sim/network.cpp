#include "dynaraft/sim/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynaraft::sim {

const Segment& LinkProfile::segment_at(SimTime t) const {
  if (schedule.empty()) throw std::logic_error("link profile has no segments");
  auto it = std::upper_bound(schedule.begin(), schedule.end(), t,
                             [](SimTime value, const Segment& s) { return value < s.start; });
  return it == schedule.begin() ? schedule.front() : *std::prev(it);
}

std::vector<std::string> LinkProfile::validate() const {
  std::vector<std::string> errors;
  if (schedule.empty()) {
    errors.emplace_back("schedule: at least one segment is required");
    return errors;
  }
  if (schedule.front().start != SimTime::zero()) errors.emplace_back("schedule[0].start_ms: first segment must start at 0");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto& s = schedule[i];
    const std::string at = "schedule[" + std::to_string(i) + "]";
    if (i > 0 && s.start <= schedule[i - 1].start) {
      errors.push_back(at + ".start_ms: start times must be strictly increasing");
    }
    if (s.rtt < Micros::zero()) errors.push_back(at + ".rtt_ms: must be non-negative");
    if (s.jitter < Micros::zero()) errors.push_back(at + ".jitter_ms: must be non-negative");
    if (!(s.loss >= 0.0 && s.loss < 1.0)) errors.push_back(at + ".loss: must lie in [0, 1)");
  }
  if (!(duplication >= 0.0 && duplication < 1.0)) errors.emplace_back("duplication: must lie in [0, 1)");
  return errors;
}

LinkProfile LinkProfile::constant(Micros rtt, Micros jitter, double loss) {
  return LinkProfile{{Segment{SimTime::zero(), rtt, jitter, loss}}, 0.0};
}

const LinkProfile& NetworkSpec::profile(ServerId from, ServerId to) const {
  for (const auto& o : overrides) {
    if (o.from == from && o.to == to) return o.profile;
    if (o.symmetric && o.from == to && o.to == from) return o.profile;
  }
  return default_profile;
}

Network::Network(NetworkSpec spec, std::size_t servers)
    : spec_(std::move(spec)), servers_(servers), last_reliable_arrival_(servers * servers, SimTime::zero()) {}

Micros Network::one_way_delay(ServerId from, ServerId to, SimTime now, std::mt19937_64& rng) const {
  const auto& seg = spec_.profile(from, to).segment_at(now);
  Micros delay = seg.rtt / 2;
  if (seg.jitter > Micros::zero()) {
    std::uniform_int_distribution<Micros::rep> jitter(-seg.jitter.count(), seg.jitter.count());
    delay += Micros{jitter(rng)};
  }
  return std::max(delay, Micros::zero());
}

std::vector<SimTime> Network::deliver(ServerId from, ServerId to, raft::ChannelClass channel, SimTime now,
                                      std::mt19937_64& rng) {
  std::vector<SimTime> arrivals;
  if (channel == raft::ChannelClass::Reliable) {
    auto& last = last_reliable_arrival_[link(from, to)];
    const SimTime arrival = std::max(now + one_way_delay(from, to, now, rng), last + Micros{1});
    last = arrival;
    arrivals.push_back(arrival);
    return arrivals;
  }

  const auto& profile = spec_.profile(from, to);
  std::bernoulli_distribution dropped(profile.loss_at(now));
  if (dropped(rng)) return arrivals;
  arrivals.push_back(now + one_way_delay(from, to, now, rng));
  if (profile.duplication > 0.0) {
    std::bernoulli_distribution duplicated(profile.duplication);
    if (duplicated(rng)) arrivals.push_back(now + one_way_delay(from, to, now, rng));
  }
  return arrivals;
}

}  // namespace dynaraft::sim
