#include "dynaraft/raft/node.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace dynaraft::raft {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::size_t count_true(const std::vector<bool>& flags) {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
}

}  // namespace

Micros randomize_timeout(Micros et, std::mt19937_64& rng) {
  if (et <= Micros::zero()) throw std::invalid_argument("election timeout must be positive");
  std::uniform_int_distribution<Micros::rep> dist(et.count(), 2 * et.count() - 1);
  return Micros{dist(rng)};
}

Node::Node(NodeConfig config)
    : config_(std::move(config)),
      rng_(config_.seed),
      window_(config_.tuner.max_list_size),
      tuning_(tuner::fallback(config_.tuner)) {
  if (config_.cluster_size == 0) throw std::invalid_argument("cluster must not be empty");
  if (config_.id.index() >= config_.cluster_size) throw std::invalid_argument("server id out of range");
  if (config_.mode == TuningMode::FixedK && config_.fixed_k < 1) throw std::invalid_argument("fixed_k must be >= 1");
  prevotes_.assign(config_.cluster_size, false);
  votes_.assign(config_.cluster_size, false);
  peers_.resize(config_.cluster_size);
}

// ---------------------------------------------------------------------------
// Accessors

Micros Node::election_timeout() const { return tunes() ? tuning_.et : config_.static_et; }

Micros Node::leader_timeout() const { return tunes() ? config_.tuner.default_et : config_.static_et; }

Micros Node::default_interval() const { return tunes() ? config_.tuner.default_h : config_.static_h; }

Micros Node::heartbeat_interval(ServerId follower) const { return peers_.at(follower.index()).h; }

std::optional<Micros> Node::pending_rtt(ServerId follower) const { return peers_.at(follower.index()).last_rtt; }

std::uint64_t Node::last_seq_id(ServerId follower) const { return peers_.at(follower.index()).seq; }

bool Node::lost_leader() const {
  switch (role_) {
    case Role::PreCandidate:
    case Role::Candidate: return true;
    case Role::Follower: return !leader_.has_value();
    case Role::Leader: return false;
  }
  return false;
}

bool Node::log_up_to_date(Term last_term, LogIndex last_index) const {
  return last_term > last_log_term() || (last_term == last_log_term() && last_index >= last_log_index());
}

Term Node::term_at(LogIndex index) const {
  if (index == 0 || index > log_.size()) return 0;
  return log_[index - 1].term;
}

// ---------------------------------------------------------------------------
// Output helpers

void Node::emit(ActionList& out, Record record) const { out.emplace_back(RecordEvent{std::move(record)}); }

void Node::send(ActionList& out, ServerId to, Message message) const {
  const auto channel = channel_for(message);
  out.emplace_back(Send{to, std::move(message), channel});
}

void Node::set_role(ActionList& out, Role role) {
  role_ = role;
  emit(out, RoleChanged{role_, term_, leader_});
}

void Node::reset_election_timer(ActionList& out, SimTime now) {
  const Micros base = election_timeout();
  randomized_ = randomize_timeout(base, rng_);
  election_deadline_ = now + randomized_;
  emit(out, TimerArmed{base, randomized_});
  out.emplace_back(SetTimer{TimerKind::Election, config_.id, *election_deadline_});
}

void Node::reset_tuning(ActionList& out) {
  if (window_.rtts().empty() && window_.ids().empty() && !tuning_.warm) return;
  window_.reset();
  tuning_ = tuner::fallback(config_.tuner);
  emit(out, TuningReset{tuning_});
}

void Node::refresh_tuning(ActionList& out) {
  tuning_ = config_.mode == TuningMode::FixedK ? tuner::tune_fixed_k(window_, config_.tuner, config_.fixed_k)
                                               : tuner::tune(window_, config_.tuner);
  emit(out, TuningApplied{leader_.value_or(config_.id), tuning_});
}

// ---------------------------------------------------------------------------
// Entry points

ActionList Node::start(SimTime now) {
  ActionList out;
  emit(out, RoleChanged{role_, term_, leader_});
  reset_election_timer(out, now);
  return out;
}

ActionList Node::step(const Input& input, SimTime now) {
  ActionList out;
  std::visit(overloaded{
                 [&](const TimerFired& t) {
                   if (crashed_) return;
                   switch (t.kind) {
                     case TimerKind::Election:
                       if (role_ != Role::Leader && election_deadline_ == t.deadline) on_election_timer(out, now);
                       break;
                     case TimerKind::Heartbeat:
                       if (role_ == Role::Leader && t.peer.index() < peers_.size() &&
                           peers_[t.peer.index()].hb_deadline == t.deadline) {
                         tick(out, t.peer, now);
                       }
                       break;
                     case TimerKind::CheckQuorum:
                       if (role_ == Role::Leader && quorum_deadline_ == t.deadline) on_check_quorum(out, now);
                       break;
                   }
                 },
                 [&](const MessageReceived& m) {
                   if (crashed_) return;
                   std::visit(overloaded{
                                  [&](const Heartbeat& hb) { handle_heartbeat(out, hb, now); },
                                  [&](const HeartbeatResponse& r) { handle_heartbeat_response(out, r, now); },
                                  [&](const auto& msg) { handle(out, m.from, msg, now); },
                              },
                              m.message);
                 },
                 [&](const CrashInjected&) {
                   if (crashed_) return;
                   crashed_ = true;
                   election_deadline_.reset();
                   quorum_deadline_.reset();
                   for (auto& p : peers_) p.hb_deadline.reset();
                   emit(out, Crashed{});
                 },
                 [&](const RecoverInjected&) {
                   if (!crashed_) return;
                   crashed_ = false;
                   role_ = Role::Follower;
                   leader_.reset();
                   commit_index_ = 0;
                   leader_match_ = 0;
                   std::fill(prevotes_.begin(), prevotes_.end(), false);
                   std::fill(votes_.begin(), votes_.end(), false);
                   std::fill(peers_.begin(), peers_.end(), Peer{});
                   emit(out, Recovered{});
                   reset_tuning(out);
                   emit(out, RoleChanged{role_, term_, leader_});
                   reset_election_timer(out, now);
                 },
                 [&](const ClientProposal& p) {
                   if (crashed_ || role_ != Role::Leader) return;
                   append_local(term_, p.payload);
                   for (std::uint32_t i = 0; i < config_.cluster_size; ++i) {
                     if (ServerId{i} != config_.id) send_append(out, ServerId{i}, now);
                   }
                   advance_commit(out, last_log_index());
                 },
             },
             input);
  return out;
}

ActionList Node::on_heartbeat(const Heartbeat& hb, SimTime now) {
  ActionList out;
  if (!crashed_) handle_heartbeat(out, hb, now);
  return out;
}

ActionList Node::on_heartbeat_response(const HeartbeatResponse& resp, SimTime now) {
  ActionList out;
  if (!crashed_) handle_heartbeat_response(out, resp, now);
  return out;
}

ActionList Node::leader_tick(ServerId follower, SimTime now) {
  ActionList out;
  if (!crashed_ && role_ == Role::Leader && follower != config_.id) tick(out, follower, now);
  return out;
}

// ---------------------------------------------------------------------------
// Role transitions

void Node::become_follower(ActionList& out, SimTime now, Term term, std::optional<ServerId> leader) {
  bool changed = false;
  if (term > term_) {
    term_ = term;
    voted_for_.reset();
    leader_match_ = 0;
    changed = true;
  }
  if (role_ != Role::Follower) {
    if (role_ == Role::Leader) {
      quorum_deadline_.reset();
      for (auto& p : peers_) p.hb_deadline.reset();
    }
    role_ = Role::Follower;
    changed = true;
  }
  if (leader_ != leader) {
    leader_ = leader;
    changed = true;
  }
  if (changed) emit(out, RoleChanged{role_, term_, leader_});
  if (!election_deadline_) reset_election_timer(out, now);
}

void Node::become_pre_candidate(ActionList& out, SimTime now) {
  leader_.reset();
  std::fill(prevotes_.begin(), prevotes_.end(), false);
  prevotes_[config_.id.index()] = true;
  set_role(out, Role::PreCandidate);
  const PreVoteRequest req{term_ + 1, config_.id, last_log_term(), last_log_index()};
  for (std::uint32_t i = 0; i < config_.cluster_size; ++i) {
    if (ServerId{i} != config_.id) send(out, ServerId{i}, req);
  }
  reset_election_timer(out, now);
  if (count_true(prevotes_) >= majority()) become_candidate(out, now);
}

void Node::become_candidate(ActionList& out, SimTime now) {
  ++term_;
  voted_for_ = config_.id;
  leader_.reset();
  leader_match_ = 0;
  std::fill(votes_.begin(), votes_.end(), false);
  votes_[config_.id.index()] = true;
  set_role(out, Role::Candidate);
  const VoteRequest req{term_, config_.id, last_log_term(), last_log_index()};
  for (std::uint32_t i = 0; i < config_.cluster_size; ++i) {
    if (ServerId{i} != config_.id) send(out, ServerId{i}, req);
  }
  reset_election_timer(out, now);
  if (count_true(votes_) >= majority()) become_leader(out, now);
}

void Node::become_leader(ActionList& out, SimTime now) {
  leader_ = config_.id;
  election_deadline_.reset();
  set_role(out, Role::Leader);

  const LogIndex noop_index = last_log_index() + 1;
  for (auto& p : peers_) {
    p = Peer{};
    p.h = default_interval();
    p.next_index = noop_index;
  }
  append_local(term_, {});

  for (std::uint32_t i = 0; i < config_.cluster_size; ++i) {
    const ServerId peer{i};
    if (peer == config_.id) continue;
    send_append(out, peer, now);
    tick(out, peer, now);
  }
  if (config_.check_quorum) {
    quorum_deadline_ = now + leader_timeout();
    out.emplace_back(SetTimer{TimerKind::CheckQuorum, config_.id, *quorum_deadline_});
  }
  advance_commit(out, last_log_index());
}

void Node::follow(ActionList& out, SimTime now, Term term, ServerId leader) {
  const bool new_leader = term > term_ || leader_ != leader;
  if (role_ == Role::PreCandidate || role_ == Role::Candidate) emit(out, CampaignAborted{role_, leader});
  become_follower(out, now, term, leader);
  if (new_leader && tunes()) reset_tuning(out);
}

// ---------------------------------------------------------------------------
// Timers

void Node::on_election_timer(ActionList& out, SimTime now) {
  emit(out, ElectionTimeout{randomized_, role_});
  election_deadline_.reset();
  if (tunes()) reset_tuning(out);
  become_pre_candidate(out, now);
}

void Node::on_check_quorum(ActionList& out, SimTime now) {
  const Micros window = leader_timeout();
  const Micros cutoff = local_clock(now) - window;
  std::size_t active = 1;
  for (std::uint32_t i = 0; i < config_.cluster_size; ++i) {
    if (ServerId{i} == config_.id) continue;
    const auto& ack = peers_[i].last_ack_send_ts;
    if (ack && *ack >= cutoff) ++active;
  }
  if (active < majority()) {
    emit(out, QuorumLost{active});
    become_follower(out, now, term_, std::nullopt);
    return;
  }
  quorum_deadline_ = now + window;
  out.emplace_back(SetTimer{TimerKind::CheckQuorum, config_.id, *quorum_deadline_});
}

void Node::tick(ActionList& out, ServerId follower, SimTime now) {
  Peer& p = peers_[follower.index()];
  ++p.seq;
  send(out, follower, Heartbeat{term_, config_.id, p.seq, local_clock(now), std::exchange(p.last_rtt, std::nullopt),
                                commit_index_});
  emit(out, HeartbeatSent{follower, p.seq});
  p.last_send = now;
  p.hb_deadline = now + p.h;
  out.emplace_back(SetTimer{TimerKind::Heartbeat, follower, *p.hb_deadline});
  if (p.match_index < last_log_index() && (!p.last_append || now - *p.last_append >= leader_timeout())) {
    send_append(out, follower, now);
  }
}

// ---------------------------------------------------------------------------
// Heartbeats

void Node::handle_heartbeat(ActionList& out, const Heartbeat& hb, SimTime now) {
  if (hb.term < term_) {
    send(out, hb.leader, HeartbeatResponse{term_, config_.id, hb.send_ts, std::nullopt});
    return;
  }
  follow(out, now, hb.term, hb.leader);

  if (tunes() && window_.record_id(hb.seq_id)) {
    if (hb.last_rtt) window_.record_rtt(*hb.last_rtt);
    refresh_tuning(out);
  }
  commit_to(out, std::min(hb.leader_commit, leader_match_));
  reset_election_timer(out, now);

  std::optional<Micros> tuned_h;
  if (tunes() && tuning_.warm) tuned_h = tuning_.h;
  send(out, hb.leader, HeartbeatResponse{term_, config_.id, hb.send_ts, tuned_h});
}

void Node::handle_heartbeat_response(ActionList& out, const HeartbeatResponse& resp, SimTime now) {
  if (resp.term > term_) {
    become_follower(out, now, resp.term, std::nullopt);
    return;
  }
  if (role_ != Role::Leader || resp.term != term_) return;
  if (resp.follower.index() >= peers_.size() || resp.follower == config_.id) return;

  Peer& p = peers_[resp.follower.index()];
  const Micros rtt = local_clock(now) - resp.echoed_send_ts;
  p.last_rtt = rtt;
  emit(out, RttMeasured{resp.follower, rtt});
  if (!p.last_ack_send_ts || resp.echoed_send_ts > *p.last_ack_send_ts) p.last_ack_send_ts = resp.echoed_send_ts;

  const Micros h = resp.tuned_h.value_or(default_interval());
  if (h != p.h) {
    p.h = h;
    emit(out, IntervalApplied{resp.follower, h});
    p.hb_deadline = std::max(now, p.last_send + h);
    out.emplace_back(SetTimer{TimerKind::Heartbeat, resp.follower, *p.hb_deadline});
  }
}

// ---------------------------------------------------------------------------
// Elections

void Node::handle(ActionList& out, ServerId from, const PreVoteRequest& req, SimTime) {
  const bool grant = req.term > term_ && lost_leader() && log_up_to_date(req.last_log_term, req.last_log_index);
  send(out, from, PreVoteResponse{grant ? req.term : term_, config_.id, grant});
}

void Node::handle(ActionList& out, ServerId from, const PreVoteResponse& resp, SimTime now) {
  if (!resp.granted && resp.term > term_) {
    become_follower(out, now, resp.term, std::nullopt);
    return;
  }
  if (role_ != Role::PreCandidate || !resp.granted || resp.term != term_ + 1) return;
  if (from.index() >= prevotes_.size()) return;
  prevotes_[from.index()] = true;
  if (count_true(prevotes_) >= majority()) become_candidate(out, now);
}

void Node::handle(ActionList& out, ServerId from, const VoteRequest& req, SimTime now) {
  if (req.term > term_) become_follower(out, now, req.term, std::nullopt);
  const bool grant = req.term == term_ && (!voted_for_ || *voted_for_ == req.candidate) &&
                     log_up_to_date(req.last_log_term, req.last_log_index);
  if (grant) {
    voted_for_ = req.candidate;
    reset_election_timer(out, now);
  }
  send(out, from, VoteResponse{term_, config_.id, grant});
}

void Node::handle(ActionList& out, ServerId from, const VoteResponse& resp, SimTime now) {
  if (resp.term > term_) {
    become_follower(out, now, resp.term, std::nullopt);
    return;
  }
  if (role_ != Role::Candidate || resp.term != term_ || !resp.granted) return;
  if (from.index() >= votes_.size()) return;
  votes_[from.index()] = true;
  if (count_true(votes_) >= majority()) become_leader(out, now);
}

// ---------------------------------------------------------------------------
// Replication

void Node::append_local(Term term, std::string payload) {
  log_.push_back(LogEntry{term, last_log_index() + 1, std::move(payload)});
}

void Node::send_append(ActionList& out, ServerId follower, SimTime now) {
  Peer& p = peers_[follower.index()];
  const LogIndex prev = p.next_index - 1;
  AppendEntries req{term_, config_.id, prev, term_at(prev), {}, commit_index_};
  if (prev < log_.size()) req.entries.assign(log_.begin() + static_cast<std::ptrdiff_t>(prev), log_.end());
  send(out, follower, std::move(req));
  p.last_append = now;
}

void Node::handle(ActionList& out, ServerId from, const AppendEntries& req, SimTime now) {
  if (req.term < term_) {
    send(out, from, AppendEntriesResponse{term_, config_.id, false, 0, 0});
    return;
  }
  follow(out, now, req.term, req.leader);
  reset_election_timer(out, now);

  if (req.prev_index > last_log_index()) {
    send(out, from, AppendEntriesResponse{term_, config_.id, false, 0, last_log_index() + 1});
    return;
  }
  if (req.prev_index > 0 && term_at(req.prev_index) != req.prev_term) {
    const Term conflict = term_at(req.prev_index);
    LogIndex hint = req.prev_index;
    while (hint > 1 && term_at(hint - 1) == conflict) --hint;
    send(out, from, AppendEntriesResponse{term_, config_.id, false, 0, hint});
    return;
  }

  for (const auto& entry : req.entries) {
    if (entry.index <= last_log_index()) {
      if (term_at(entry.index) == entry.term) continue;
      log_.resize(entry.index - 1);
    }
    log_.push_back(entry);
  }
  const LogIndex match = req.prev_index + req.entries.size();
  leader_match_ = std::max(leader_match_, match);
  commit_to(out, std::min(req.leader_commit, leader_match_));
  send(out, from, AppendEntriesResponse{term_, config_.id, true, match, 0});
}

void Node::handle(ActionList& out, ServerId from, const AppendEntriesResponse& resp, SimTime now) {
  if (resp.term > term_) {
    become_follower(out, now, resp.term, std::nullopt);
    return;
  }
  if (role_ != Role::Leader || resp.term != term_ || from.index() >= peers_.size()) return;

  Peer& p = peers_[from.index()];
  if (resp.success) {
    p.match_index = std::max(p.match_index, resp.match_index);
    p.next_index = p.match_index + 1;
    advance_commit(out, p.match_index);
    if (p.next_index <= last_log_index()) send_append(out, from, now);
  } else {
    p.next_index = std::clamp<LogIndex>(resp.conflict_hint, p.match_index + 1, last_log_index() + 1);
    send_append(out, from, now);
  }
}

void Node::advance_commit(ActionList& out, LogIndex candidate_index) {
  for (LogIndex n = std::min(candidate_index, last_log_index()); n > commit_index_; --n) {
    if (term_at(n) != term_) break;
    std::size_t replicated = 1;
    for (std::uint32_t i = 0; i < config_.cluster_size; ++i) {
      if (ServerId{i} != config_.id && peers_[i].match_index >= n) ++replicated;
    }
    if (replicated >= majority()) {
      commit_to(out, n);
      return;
    }
  }
}

void Node::commit_to(ActionList& out, LogIndex index) {
  index = std::min(index, last_log_index());
  while (commit_index_ < index) {
    ++commit_index_;
    emit(out, Committed{commit_index_, term_at(commit_index_)});
  }
}

}  // namespace dynaraft::raft
