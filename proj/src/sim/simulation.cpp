#include "dynaraft/sim/simulation.hpp"

#include <stdexcept>

namespace dynaraft::sim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::uint64_t kNetworkStream = 0;
constexpr std::uint64_t kNodeStreamBase = 1000;

}  // namespace

Simulation::Simulation(SimConfig config)
    : config_(std::move(config)),
      network_(config_.network, config_.servers),
      net_rng_(mix_seed(config_.seed, kNetworkStream)) {
  if (config_.servers == 0) throw std::invalid_argument("cluster must not be empty");
  nodes_.reserve(config_.servers);
  for (std::uint32_t i = 0; i < config_.servers; ++i) {
    raft::NodeConfig nc = config_.node;
    nc.id = ServerId{i};
    nc.cluster_size = config_.servers;
    nc.seed = mix_seed(config_.seed, kNodeStreamBase + i);
    nc.clock_offset = i < config_.clock_offsets.size() ? config_.clock_offsets[i] : Micros{};
    nodes_.emplace_back(nc);
  }
  trace_.servers = config_.servers;
  trace_.end = config_.duration;
}

void Simulation::schedule(SimTime at, Payload payload) {
  if (at < now_) throw std::logic_error("event scheduled in the past");
  queue_.push(Event{at, next_seq_++, std::move(payload)});
}

void Simulation::record(ServerId server, TraceDetail detail) {
  trace_.entries.push_back(TraceEntry{now_, server, std::move(detail)});
}

void Simulation::execute(ServerId server, raft::ActionList actions) {
  for (auto& action : actions) {
    std::visit(overloaded{
                   [&](raft::Send& s) {
                     const auto index = static_cast<std::uint8_t>(s.message.index());
                     if (config_.record_messages) record(server, MessageEvent{MessageEvent::Kind::Sent, s.to, index});
                     const auto arrivals = network_.deliver(server, s.to, s.channel, now_, net_rng_);
                     if (arrivals.empty() && config_.record_messages) {
                       record(server, MessageEvent{MessageEvent::Kind::Dropped, s.to, index});
                     }
                     for (std::size_t i = 0; i < arrivals.size(); ++i) {
                       if (i + 1 == arrivals.size()) {
                         schedule(arrivals[i], Delivery{server, s.to, std::move(s.message)});
                       } else {
                         schedule(arrivals[i], Delivery{server, s.to, s.message});
                       }
                     }
                   },
                   [&](raft::SetTimer& t) {
                     schedule(t.deadline, Timer{server, raft::TimerFired{t.kind, t.peer, t.deadline}});
                   },
                   [&](raft::RecordEvent& r) { record(server, std::move(r.record)); },
               },
               action);
  }
}

void Simulation::inject(const Fault& fault) {
  std::optional<ServerId> target;
  switch (fault.target) {
    case FaultTarget::Server:
      if (fault.server.index() < nodes_.size()) target = fault.server;
      break;
    case FaultTarget::Leader:
      if (fault.kind == FaultKind::Crash) target = current_leader();
      break;
    case FaultTarget::LastCrashed:
      if (fault.kind == FaultKind::Recover) target = last_crashed_;
      break;
  }
  const bool applicable =
      target && (fault.kind == FaultKind::Crash ? !nodes_[target->index()].crashed() : nodes_[target->index()].crashed());
  if (!applicable) {
    record(target.value_or(fault.server), FaultSkipped{fault.kind, fault.target});
    return;
  }
  auto& node = nodes_[target->index()];
  if (fault.kind == FaultKind::Crash) {
    last_crashed_ = target;
    execute(*target, node.step(raft::CrashInjected{}, now_));
  } else {
    execute(*target, node.step(raft::RecoverInjected{}, now_));
  }
}

std::optional<ServerId> Simulation::current_leader() const {
  std::optional<ServerId> best;
  for (const auto& n : nodes_) {
    if (n.crashed() || n.role() != raft::Role::Leader) continue;
    if (!best || n.term() > nodes_[best->index()].term()) best = n.id();
  }
  return best;
}

void Simulation::dispatch(Payload& payload) {
  std::visit(overloaded{
                 [&](Delivery& d) {
                   auto& node = nodes_[d.to.index()];
                   const auto index = static_cast<std::uint8_t>(d.message.index());
                   if (node.crashed()) {
                     if (config_.record_messages) record(d.to, MessageEvent{MessageEvent::Kind::Discarded, d.from, index});
                     return;
                   }
                   if (config_.record_messages) record(d.to, MessageEvent{MessageEvent::Kind::Delivered, d.from, index});
                   execute(d.to, node.step(raft::MessageReceived{d.from, std::move(d.message)}, now_));
                 },
                 [&](Timer& t) { execute(t.server, nodes_[t.server.index()].step(t.fired, now_)); },
                 [&](FaultFire& f) { inject(f.fault); },
                 [&](ProbeTick&) {
                   if (auto leader = current_leader()) {
                     const std::string payload = "probe-" + std::to_string(next_proposal_++);
                     execute(*leader, nodes_[leader->index()].step(raft::ClientProposal{payload}, now_));
                   }
                   schedule(now_ + config_.probe_interval, ProbeTick{});
                 },
             },
             payload);
}

bool Simulation::step() {
  if (!started_) {
    started_ = true;
    for (auto& node : nodes_) execute(node.id(), node.start(now_));
    for (const auto& f : config_.faults) schedule(f.at, FaultFire{f});
    if (config_.probe_interval > Micros::zero()) schedule(config_.probe_interval, ProbeTick{});
  }
  if (queue_.empty() || queue_.top().at > config_.duration) return false;
  Event event = std::move(const_cast<Event&>(queue_.top()));
  queue_.pop();
  now_ = event.at;
  dispatch(event.payload);
  return true;
}

EventTrace Simulation::run() {
  while (step()) {
  }
  return std::move(trace_);
}

EventTrace simulate(SimConfig config) { return Simulation(std::move(config)).run(); }

}  // namespace dynaraft::sim
