#include "dynaraft/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynaraft::tuner {

namespace {

// Comparisons of 1 - p^K against x tolerate this much rounding so that exact
// boundaries such as p = 0.1, x = 0.999, K = 3 resolve to the smaller K.
constexpr double kProbabilityEpsilon = 1e-12;

bool arrival_target_met(double p, int k, double x) {
  return 1.0 - std::pow(p, k) >= x - kProbabilityEpsilon;
}

}  // namespace

std::vector<std::string> TunerConfig::validate() const {
  std::vector<std::string> errors;
  if (!(s >= 0.0)) errors.emplace_back("s must be non-negative");
  if (!(x > 0.0 && x < 1.0)) errors.emplace_back("x must lie in (0, 1)");
  if (min_list_size == 0) errors.emplace_back("min_list_size must be positive");
  if (max_list_size == 0) errors.emplace_back("max_list_size must be positive");
  if (min_list_size > max_list_size) errors.emplace_back("min_list_size must not exceed max_list_size");
  if (default_h <= Micros::zero()) errors.emplace_back("default_h must be positive");
  if (default_h >= default_et) errors.emplace_back("default_h must be smaller than default_et");
  if (et_floor <= Micros::zero()) errors.emplace_back("et_floor must be positive");
  if (k_max < 1) errors.emplace_back("k_max must be at least 1");
  if (!(p_cap > 0.0 && p_cap < 1.0)) errors.emplace_back("p_cap must lie in (0, 1)");
  return errors;
}

MeasurementWindow::MeasurementWindow(std::size_t max_size) : max_size_(max_size) {
  if (max_size_ == 0) throw std::invalid_argument("measurement window needs a positive size");
}

void MeasurementWindow::record_rtt(Micros rtt) {
  rtts_.push_back(rtt);
  if (rtts_.size() > max_size_) rtts_.pop_front();
}

bool MeasurementWindow::record_id(std::uint64_t seq_id) {
  auto pos = std::lower_bound(ids_.begin(), ids_.end(), seq_id);
  if (pos != ids_.end() && *pos == seq_id) return false;
  if (ids_.size() == max_size_ && pos == ids_.begin()) return false;
  ids_.insert(pos, seq_id);
  if (ids_.size() > max_size_) ids_.pop_front();
  return true;
}

bool MeasurementWindow::contains_id(std::uint64_t seq_id) const {
  return std::binary_search(ids_.begin(), ids_.end(), seq_id);
}

double MeasurementWindow::loss_rate() const {
  if (ids_.empty()) return 0.0;
  const auto expected = static_cast<double>(ids_.back() - ids_.front() + 1);
  return 1.0 - static_cast<double>(ids_.size()) / expected;
}

void MeasurementWindow::reset() {
  rtts_.clear();
  ids_.clear();
}

Micros election_timeout(const MeasurementWindow& window, const TunerConfig& cfg) {
  const auto& rtts = window.rtts();
  if (rtts.size() < cfg.min_list_size || rtts.empty()) return cfg.default_et;

  const auto n = static_cast<double>(rtts.size());
  double mean = 0.0;
  for (auto r : rtts) mean += static_cast<double>(r.count());
  mean /= n;
  double var = 0.0;
  for (auto r : rtts) {
    const double d = static_cast<double>(r.count()) - mean;
    var += d * d;
  }
  var /= n;

  const Micros et{std::llround(mean + cfg.s * std::sqrt(var))};
  return std::max(et, cfg.et_floor);
}

int required_heartbeats(double p, double x, const TunerConfig& cfg) {
  p = std::min(p, cfg.p_cap);
  if (p <= 0.0) return 1;

  int k = static_cast<int>(std::ceil(std::log(1.0 - x) / std::log(p)));
  k = std::max(k, 1);
  // The logarithm can land one step off either side of an exact boundary.
  while (k > 1 && arrival_target_met(p, k - 1, x)) --k;
  while (!arrival_target_met(p, k, x) && k < cfg.k_max) ++k;
  return std::min(k, cfg.k_max);
}

Micros heartbeat_interval(Micros et, int k) {
  if (k < 1) throw std::invalid_argument("heartbeat count must be at least 1");
  return std::max(et / k, kMinHeartbeatInterval);
}

TuningOutput fallback(const TunerConfig& cfg) {
  return TuningOutput{cfg.default_et, cfg.default_h, 1, 0.0, false};
}

namespace {

bool is_warm(const MeasurementWindow& window, const TunerConfig& cfg) {
  return window.rtts().size() >= cfg.min_list_size && window.ids().size() >= cfg.min_list_size;
}

}  // namespace

TuningOutput tune(const MeasurementWindow& window, const TunerConfig& cfg) {
  if (!is_warm(window, cfg)) return fallback(cfg);
  TuningOutput out;
  out.warm = true;
  out.et = election_timeout(window, cfg);
  out.p = window.loss_rate();
  out.k = required_heartbeats(out.p, cfg.x, cfg);
  out.h = heartbeat_interval(out.et, out.k);
  return out;
}

TuningOutput tune_fixed_k(const MeasurementWindow& window, const TunerConfig& cfg, int k) {
  if (!is_warm(window, cfg)) return fallback(cfg);
  TuningOutput out;
  out.warm = true;
  out.et = election_timeout(window, cfg);
  out.p = window.loss_rate();
  out.k = k;
  out.h = heartbeat_interval(out.et, k);
  return out;
}

}  // namespace dynaraft::tuner
