#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynaraft/raft/node.hpp"
#include "dynaraft/sim/simulation.hpp"
#include "dynaraft/tuner.hpp"

namespace dynaraft::harness {

using namespace std::chrono_literals;

enum class VariantName { Dynatune, Raft, RaftLow, FixK };

/// "dynatune", "raft", "raft-low", "fix-k".
std::string_view variant_name(VariantName name);
/// Case-insensitive; also accepts "raft_low", "fixk", "fix_k".
std::optional<VariantName> parse_variant(std::string_view text);

struct VariantSpec {
  VariantName name = VariantName::Dynatune;
  Micros static_et = 1000ms;
  Micros static_h = 100ms;
  std::optional<int> fixed_k;
  tuner::TunerConfig tuner;

  static VariantSpec dynatune();
  static VariantSpec raft();
  static VariantSpec raft_low();
  static VariantSpec fix_k(int k = 10);
  static VariantSpec defaults(VariantName name);

  raft::TuningMode mode() const;
  std::vector<std::string> validate() const;

  bool operator==(const VariantSpec&) const = default;
};

/// A campaign as written in a scenario file. Times here are unscaled;
/// `make_sim_config` applies `time_scale` to schedule starts, fault times
/// and the duration.
struct ScenarioSpec {
  std::string name = "scenario";
  std::string description;
  std::size_t servers = 5;
  std::uint64_t seed = 1;
  std::vector<VariantSpec> variants{VariantSpec::dynatune()};
  sim::NetworkSpec network;
  std::vector<sim::Fault> faults;
  std::vector<Micros> clock_offsets;
  Micros duration = 60s;
  std::size_t repetitions = 1;
  double time_scale = 1.0;
  /// Divide each variant's max_list_size by time_scale (never below
  /// min_list_size), so a compressed plateau holds the same share of the
  /// measurement window as an uncompressed one.
  bool scale_window = true;
  Micros probe_interval{};
  bool check_quorum = true;
  /// Order statistic for the timeout series; 0 means f + 1.
  std::size_t kth = 0;
  std::string output_directory = "out";
  std::vector<std::string> formats{"csv", "json"};

  std::size_t effective_kth() const { return kth == 0 ? servers / 2 + 1 : kth; }
  std::vector<std::string> validate() const;

  bool operator==(const ScenarioSpec&) const = default;
};

/// t / time_scale, rounded to the nearest microsecond.
SimTime scale_time(SimTime t, double time_scale);

/// Seed of repetition `rep`; independent streams derived from the scenario seed.
std::uint64_t repetition_seed(std::uint64_t scenario_seed, std::size_t rep);

sim::SimConfig make_sim_config(const ScenarioSpec& spec, const VariantSpec& variant, std::size_t rep);

}  // namespace dynaraft::harness
