#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynaraft/harness/spec.hpp"

namespace dynaraft::scenario {

struct Preset {
  std::string name;
  std::string summary;
  harness::ScenarioSpec spec;
};

/// stable-election, gradual-rtt, radical-rtt, loss-sweep, tuning-demo.
const std::vector<Preset>& presets();

std::optional<harness::ScenarioSpec> find_preset(std::string_view name);

/// Piecewise schedule with one plateau per value, each `plateau` long.
sim::LinkProfile plateau_schedule(const std::vector<Micros>& rtts, const std::vector<double>& losses, Micros plateau,
                                  Micros jitter);

}  // namespace dynaraft::scenario
