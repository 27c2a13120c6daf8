#include "dynaraft/raft/messages.hpp"

namespace dynaraft::raft {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::string_view role_name(Role role) {
  switch (role) {
    case Role::Follower: return "follower";
    case Role::PreCandidate: return "pre-candidate";
    case Role::Candidate: return "candidate";
    case Role::Leader: return "leader";
  }
  return "unknown";
}

ChannelClass channel_for(const Message& message) {
  if (std::holds_alternative<Heartbeat>(message) || std::holds_alternative<HeartbeatResponse>(message)) {
    return ChannelClass::Lossy;
  }
  return ChannelClass::Reliable;
}

std::string_view message_name(const Message& message) {
  return std::visit(overloaded{
                        [](const Heartbeat&) { return std::string_view{"heartbeat"}; },
                        [](const HeartbeatResponse&) { return std::string_view{"heartbeat_response"}; },
                        [](const PreVoteRequest&) { return std::string_view{"pre_vote_request"}; },
                        [](const PreVoteResponse&) { return std::string_view{"pre_vote_response"}; },
                        [](const VoteRequest&) { return std::string_view{"vote_request"}; },
                        [](const VoteResponse&) { return std::string_view{"vote_response"}; },
                        [](const AppendEntries&) { return std::string_view{"append_entries"}; },
                        [](const AppendEntriesResponse&) { return std::string_view{"append_entries_response"}; },
                    },
                    message);
}

Term message_term(const Message& message) {
  return std::visit([](const auto& m) { return m.term; }, message);
}

}  // namespace dynaraft::raft
