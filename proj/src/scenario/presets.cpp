#include "dynaraft/scenario/presets.hpp"

#include <stdexcept>

namespace dynaraft::scenario {

using namespace std::chrono_literals;
using harness::ScenarioSpec;
using harness::VariantSpec;

sim::LinkProfile plateau_schedule(const std::vector<Micros>& rtts, const std::vector<double>& losses, Micros plateau,
                                  Micros jitter) {
  if (rtts.size() != losses.size()) throw std::invalid_argument("rtts and losses differ in length");
  sim::LinkProfile p;
  for (std::size_t i = 0; i < rtts.size(); ++i) {
    p.schedule.push_back(sim::Segment{plateau * static_cast<Micros::rep>(i), rtts[i], jitter, losses[i]});
  }
  return p;
}

namespace {

ScenarioSpec stable_election() {
  ScenarioSpec s;
  s.name = "stable-election";
  s.description = "Leader crash on a stable 100 ms network; detection and out-of-service time, Dynatune vs Raft.";
  s.variants = {VariantSpec::dynatune(), VariantSpec::raft()};
  s.network.default_profile = sim::LinkProfile::constant(100ms, 1ms, 0.0);
  s.faults = {sim::Fault{sim::FaultKind::Crash, 10s, sim::FaultTarget::Leader, {}}};
  s.duration = 20s;
  s.repetitions = 100;
  return s;
}

ScenarioSpec gradual_rtt() {
  ScenarioSpec s;
  s.name = "gradual-rtt";
  s.description = "RTT 50 -> 200 -> 50 ms in 10 ms steps, one minute per step (compressed by time_scale).";
  s.variants = {VariantSpec::dynatune(), VariantSpec::raft(), VariantSpec::raft_low()};
  std::vector<Micros> rtts;
  for (int r = 50; r <= 200; r += 10) rtts.push_back(std::chrono::milliseconds{r});
  for (int r = 190; r >= 50; r -= 10) rtts.push_back(std::chrono::milliseconds{r});
  s.network.default_profile = plateau_schedule(rtts, std::vector<double>(rtts.size(), 0.0), 60s, 1ms);
  s.duration = 60s * static_cast<Micros::rep>(rtts.size());
  s.time_scale = 12;
  return s;
}

ScenarioSpec radical_rtt() {
  ScenarioSpec s;
  s.name = "radical-rtt";
  s.description = "RTT 50 ms, then 500 ms, then 50 ms, one minute each (compressed by time_scale).";
  s.variants = {VariantSpec::dynatune(), VariantSpec::raft(), VariantSpec::raft_low()};
  s.network.default_profile = plateau_schedule({50ms, 500ms, 50ms}, {0.0, 0.0, 0.0}, 60s, 1ms);
  s.duration = 180s;
  s.time_scale = 12;
  return s;
}

ScenarioSpec loss_sweep() {
  ScenarioSpec s;
  s.name = "loss-sweep";
  s.description = "RTT 200 ms; loss 0 -> 30 -> 0 % in 5 % steps, three minutes each; Dynatune vs Fix-K.";
  s.variants = {VariantSpec::dynatune(), VariantSpec::fix_k(10)};
  const std::vector<double> losses{0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.25, 0.20, 0.15, 0.10, 0.05, 0.0};
  s.network.default_profile = plateau_schedule(std::vector<Micros>(losses.size(), 200ms), losses, 180s, 1ms);
  s.duration = 180s * static_cast<Micros::rep>(losses.size());
  s.time_scale = 1;
  return s;
}

ScenarioSpec tuning_demo() {
  ScenarioSpec s;
  s.name = "tuning-demo";
  s.description = "Three servers; the 0-1 link changes RTT and loss while the rest stay at 100 ms. Writes the event trace.";
  s.servers = 3;
  s.variants = {VariantSpec::dynatune()};
  s.network.default_profile = sim::LinkProfile::constant(100ms, 1ms, 0.0);
  sim::LinkOverride link;
  link.from = ServerId{0};
  link.to = ServerId{1};
  link.profile = plateau_schedule({40ms, 120ms, 60ms}, {0.0, 0.1, 0.0}, 20s, 2ms);
  s.network.overrides = {link};
  s.duration = 60s;
  s.formats = {"csv", "json", "ndjson"};
  return s;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = {
      {"stable-election", "leader crash at 10 s, 100 repetitions, Dynatune vs Raft", stable_election()},
      {"gradual-rtt", "RTT 50->200->50 ms in 10 ms steps", gradual_rtt()},
      {"radical-rtt", "RTT 50->500->50 ms", radical_rtt()},
      {"loss-sweep", "loss 0->30->0 % at RTT 200 ms, Dynatune vs Fix-K", loss_sweep()},
      {"tuning-demo", "single tuned link with changing RTT and loss, full trace", tuning_demo()},
  };
  return all;
}

std::optional<ScenarioSpec> find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p.spec;
  }
  return std::nullopt;
}

}  // namespace dynaraft::scenario
