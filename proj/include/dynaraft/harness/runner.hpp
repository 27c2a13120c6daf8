#pragma once

#include <optional>
#include <vector>

#include "dynaraft/harness/analysis.hpp"
#include "dynaraft/harness/metrics.hpp"
#include "dynaraft/harness/spec.hpp"

namespace dynaraft::harness {

struct RepetitionResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  Detection detection;
  /// Leader failure to the next serving leader; absent without a leader
  /// failure or when no leader returned before the end.
  std::optional<Micros> ots;
  std::vector<Interval> ots_intervals;
  Micros total_ots{};
  RoleCounts roles;
  std::optional<SimTime> first_leader;
  std::vector<std::optional<Micros>> kth_timeout;
  /// [server][second]
  std::vector<std::vector<std::uint32_t>> heartbeat_rate;
  std::vector<TuningSample> tuning;
  std::uint64_t fingerprint = 0;
  std::optional<sim::EventTrace> trace;
};

struct RunOptions {
  /// Worker threads for repetitions; 0 picks the hardware concurrency.
  std::size_t threads = 1;
  bool keep_traces = false;
  /// Per-second series (timeouts, heartbeat rate, tuning); off for large
  /// campaigns that only need the summaries.
  bool series = true;
};

struct VariantReport {
  VariantSpec variant;
  std::vector<RepetitionResult> repetitions;
  Summary detection_ms;
  Summary ots_ms;
  Summary randomized_ms;
  Summary total_ots_ms;
  std::size_t detected = 0;
  std::size_t censored = 0;
  std::size_t inapplicable = 0;
  std::size_t unresolved_ots = 0;
  std::size_t elections = 0;
  std::size_t pre_votes = 0;
  std::size_t leader_changes = 0;
};

struct MetricsReport {
  ScenarioSpec spec;
  std::vector<VariantReport> variants;

  const VariantReport* find(VariantName name) const;
};

/// Metrics of one finished simulation. Runs the safety auditor first.
RepetitionResult analyze_trace(const sim::EventTrace& trace, std::size_t kth, bool series = true);

/// Simulates and analyzes one repetition.
RepetitionResult run_repetition(const ScenarioSpec& spec, const VariantSpec& variant, std::size_t rep,
                                const RunOptions& options = {});

/// Folds repetitions (in index order) into summaries.
VariantReport aggregate(const VariantSpec& variant, std::vector<RepetitionResult> reps);

/// All repetitions of every variant. Throws SafetyViolation from the lowest
/// failing repetition.
MetricsReport run_scenario(const ScenarioSpec& spec, const RunOptions& options = {});

}  // namespace dynaraft::harness
