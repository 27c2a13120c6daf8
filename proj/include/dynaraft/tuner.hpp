#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "dynaraft/types.hpp"

namespace dynaraft::tuner {

using namespace std::chrono_literals;

/// Runtime parameters of the tuning loop.
struct TunerConfig {
  double s = 2.0;       ///< safety factor on the RTT standard deviation
  double x = 0.999;     ///< target probability that one heartbeat arrives per timeout
  std::size_t min_list_size = 10;
  std::size_t max_list_size = 1000;
  Micros default_et = 1000ms;
  Micros default_h = 100ms;
  Micros et_floor = 10ms;
  int k_max = 64;
  double p_cap = 0.9;   ///< loss rate is clamped here before computing K

  /// Human-readable descriptions of violated invariants; empty when valid.
  std::vector<std::string> validate() const;

  bool operator==(const TunerConfig&) const = default;
};

/// Lower bound on any tuned heartbeat interval.
inline constexpr Micros kMinHeartbeatInterval = 1ms;

/// Per-link measurement state kept by a follower: RTT samples echoed back by
/// the leader and the sequence ids of heartbeats received from it.
///
/// `ids` is kept sorted and free of duplicates no matter the arrival order.
/// Both lists are bounded by `max_size`; when full, the oldest RTT sample and
/// the smallest id are discarded.
class MeasurementWindow {
 public:
  explicit MeasurementWindow(std::size_t max_size = 1000);

  void record_rtt(Micros rtt);

  /// Returns false when `seq_id` is already present (or would be evicted
  /// immediately as the oldest id of a full window).
  bool record_id(std::uint64_t seq_id);

  bool contains_id(std::uint64_t seq_id) const;

  /// 1 - received / expected over the stored id span; 0 for an empty window.
  double loss_rate() const;

  void reset();

  const std::deque<Micros>& rtts() const { return rtts_; }
  const std::deque<std::uint64_t>& ids() const { return ids_; }
  std::size_t max_size() const { return max_size_; }

  bool operator==(const MeasurementWindow&) const = default;

 private:
  std::size_t max_size_;
  std::deque<Micros> rtts_;
  std::deque<std::uint64_t> ids_;
};

struct TuningOutput {
  Micros et{};
  Micros h{};
  int k = 1;
  double p = 0.0;
  bool warm = false;

  bool operator==(const TuningOutput&) const = default;
};

/// mu + s * sigma over the RTT samples (population sigma), floored at
/// `et_floor`. Falls back to `default_et` while fewer than `min_list_size`
/// samples are held.
Micros election_timeout(const MeasurementWindow& window, const TunerConfig& cfg);

/// Smallest K >= 1 with 1 - p^K >= x, after clamping p to `p_cap`; the result
/// is capped at `k_max`.
int required_heartbeats(double p, double x, const TunerConfig& cfg);

/// floor(et / k), never below kMinHeartbeatInterval.
Micros heartbeat_interval(Micros et, int k);

/// Outputs the defaults for a cold window.
TuningOutput fallback(const TunerConfig& cfg);

/// Full tuning step: E_t from RTTs, K from the loss rate, h = E_t / K.
TuningOutput tune(const MeasurementWindow& window, const TunerConfig& cfg);

/// Same E_t tuning, but with a constant K (the Fix-K baseline).
TuningOutput tune_fixed_k(const MeasurementWindow& window, const TunerConfig& cfg, int k);

}  // namespace dynaraft::tuner
