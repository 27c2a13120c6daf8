#include "dynaraft/harness/spec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace dynaraft::harness {

std::string_view variant_name(VariantName name) {
  switch (name) {
    case VariantName::Dynatune: return "dynatune";
    case VariantName::Raft: return "raft";
    case VariantName::RaftLow: return "raft-low";
    case VariantName::FixK: return "fix-k";
  }
  return "unknown";
}

std::optional<VariantName> parse_variant(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c == '_') c = '-';
    s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (s == "dynatune") return VariantName::Dynatune;
  if (s == "raft") return VariantName::Raft;
  if (s == "raft-low" || s == "raftlow") return VariantName::RaftLow;
  if (s == "fix-k" || s == "fixk") return VariantName::FixK;
  return std::nullopt;
}

VariantSpec VariantSpec::dynatune() { return VariantSpec{}; }

VariantSpec VariantSpec::raft() {
  VariantSpec v;
  v.name = VariantName::Raft;
  return v;
}

VariantSpec VariantSpec::raft_low() {
  VariantSpec v;
  v.name = VariantName::RaftLow;
  v.static_et = 100ms;
  v.static_h = 10ms;
  return v;
}

VariantSpec VariantSpec::fix_k(int k) {
  VariantSpec v;
  v.name = VariantName::FixK;
  v.fixed_k = k;
  return v;
}

VariantSpec VariantSpec::defaults(VariantName name) {
  switch (name) {
    case VariantName::Dynatune: return dynatune();
    case VariantName::Raft: return raft();
    case VariantName::RaftLow: return raft_low();
    case VariantName::FixK: return fix_k();
  }
  return dynatune();
}

raft::TuningMode VariantSpec::mode() const {
  switch (name) {
    case VariantName::Dynatune: return raft::TuningMode::Dynatune;
    case VariantName::FixK: return raft::TuningMode::FixedK;
    case VariantName::Raft:
    case VariantName::RaftLow: return raft::TuningMode::Static;
  }
  return raft::TuningMode::Static;
}

std::vector<std::string> VariantSpec::validate() const {
  std::vector<std::string> errors;
  if (mode() == raft::TuningMode::Static) {
    if (static_et <= Micros::zero()) errors.emplace_back("static_et_ms: must be positive");
    if (static_h <= Micros::zero()) errors.emplace_back("static_h_ms: must be positive");
    if (static_h >= static_et) errors.emplace_back("static_h_ms: must be below static_et_ms");
  }
  if (name == VariantName::FixK) {
    if (!fixed_k) {
      errors.emplace_back("fixed_K: required for fix-k");
    } else if (*fixed_k < 1) {
      errors.emplace_back("fixed_K: must be >= 1");
    }
  }
  for (const auto& e : tuner.validate()) errors.push_back("tuner." + e);
  return errors;
}

std::vector<std::string> ScenarioSpec::validate() const {
  std::vector<std::string> errors;
  if (servers < 3 || servers % 2 == 0) errors.emplace_back("cluster.n: must be odd and at least 3");
  if (repetitions < 1) errors.emplace_back("run.repetitions: must be >= 1");
  if (!(time_scale > 0.0) || !std::isfinite(time_scale)) errors.emplace_back("run.time_scale: must be positive");
  if (duration <= Micros::zero()) errors.emplace_back("run.duration_ms: must be positive");
  if (probe_interval < Micros::zero()) errors.emplace_back("run.probe_interval_ms: must be non-negative");
  if (kth > servers) errors.emplace_back("run.kth: must not exceed cluster.n");

  if (variants.empty()) errors.emplace_back("variant: at least one variant is required");
  for (std::size_t i = 0; i < variants.size(); ++i) {
    for (const auto& e : variants[i].validate()) errors.push_back("variant[" + std::to_string(i) + "]." + e);
  }

  for (const auto& e : network.default_profile.validate()) errors.push_back("links.default." + e);
  for (std::size_t i = 0; i < network.overrides.size(); ++i) {
    const auto& o = network.overrides[i];
    const std::string at = "links.overrides[" + std::to_string(i) + "]";
    if (o.from.index() >= servers) errors.push_back(at + ".from: server out of range");
    if (o.to.index() >= servers) errors.push_back(at + ".to: server out of range");
    if (o.from == o.to) errors.push_back(at + ".to: a link needs two distinct servers");
    for (const auto& e : o.profile.validate()) errors.push_back(at + "." + e);
  }

  if (clock_offsets.size() > servers) errors.emplace_back("cluster.clock_offsets_ms: more entries than servers");

  // Replay server-targeted faults to catch contradictions (crashing a crashed
  // server, recovering a live one).
  std::vector<bool> down(servers, false);
  for (std::size_t i = 0; i < faults.size(); ++i) {
    const auto& f = faults[i];
    const std::string at = "faults[" + std::to_string(i) + "]";
    if (f.at < SimTime::zero()) errors.push_back(at + ".at_ms: must be non-negative");
    if (f.at > duration) errors.push_back(at + ".at_ms: after the end of the run");
    if (i > 0 && f.at < faults[i - 1].at) errors.push_back(at + ".at_ms: faults must be sorted by time");
    if (f.target == sim::FaultTarget::Leader && f.kind != sim::FaultKind::Crash) {
      errors.push_back(at + ".server: \"leader\" is only valid for crash faults");
    }
    if (f.target == sim::FaultTarget::LastCrashed && f.kind != sim::FaultKind::Recover) {
      errors.push_back(at + ".server: \"last-crashed\" is only valid for recover faults");
    }
    if (f.target != sim::FaultTarget::Server) {
      continue;
    }
    if (f.server.index() >= servers) {
      errors.push_back(at + ".server: server out of range");
      continue;
    }
    const bool is_down = down[f.server.index()];
    if (f.kind == sim::FaultKind::Crash) {
      if (is_down) errors.push_back(at + ": server " + std::to_string(f.server.value) + " is already crashed");
      down[f.server.index()] = true;
    } else {
      if (!is_down) errors.push_back(at + ": server " + std::to_string(f.server.value) + " is not crashed");
      down[f.server.index()] = false;
    }
  }
  static constexpr std::string_view known_formats[] = {"csv", "json", "ndjson"};
  for (std::size_t i = 0; i < formats.size(); ++i) {
    if (std::find(std::begin(known_formats), std::end(known_formats), formats[i]) == std::end(known_formats)) {
      errors.push_back("output.formats[" + std::to_string(i) + "]: unknown format \"" + formats[i] + "\"");
    }
  }
  return errors;
}

SimTime scale_time(SimTime t, double time_scale) {
  return SimTime{static_cast<SimTime::rep>(std::llround(static_cast<double>(t.count()) / time_scale))};
}

std::uint64_t repetition_seed(std::uint64_t scenario_seed, std::size_t rep) {
  return mix_seed(scenario_seed, static_cast<std::uint64_t>(rep));
}

namespace {

sim::LinkProfile scale_profile(sim::LinkProfile p, double time_scale) {
  for (auto& s : p.schedule) s.start = scale_time(s.start, time_scale);
  return p;
}

}  // namespace

sim::SimConfig make_sim_config(const ScenarioSpec& spec, const VariantSpec& variant, std::size_t rep) {
  sim::SimConfig cfg;
  cfg.servers = spec.servers;
  cfg.node.mode = variant.mode();
  cfg.node.static_et = variant.static_et;
  cfg.node.static_h = variant.static_h;
  cfg.node.fixed_k = variant.fixed_k.value_or(10);
  cfg.node.tuner = variant.tuner;
  if (spec.scale_window && spec.time_scale > 1.0) {
    const auto scaled = static_cast<std::size_t>(
        std::llround(static_cast<double>(variant.tuner.max_list_size) / spec.time_scale));
    cfg.node.tuner.max_list_size = std::max(variant.tuner.min_list_size, scaled);
  }
  cfg.node.check_quorum = spec.check_quorum;
  cfg.clock_offsets = spec.clock_offsets;
  cfg.network.default_profile = scale_profile(spec.network.default_profile, spec.time_scale);
  for (auto o : spec.network.overrides) {
    o.profile = scale_profile(std::move(o.profile), spec.time_scale);
    cfg.network.overrides.push_back(std::move(o));
  }
  for (auto f : spec.faults) {
    f.at = scale_time(f.at, spec.time_scale);
    cfg.faults.push_back(f);
  }
  cfg.duration = scale_time(spec.duration, spec.time_scale);
  cfg.seed = repetition_seed(spec.seed, rep);
  cfg.probe_interval = spec.probe_interval;
  return cfg;
}

}  // namespace dynaraft::harness
