#pragma once

#include <cstddef>
#include <vector>

namespace dynaraft::harness {

/// Linear-interpolation quantile (q in [0, 1]) of an ascending sequence.
double quantile_sorted(const std::vector<double>& sorted, double q);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  /// Quantiles at i / (cdf_points - 1); empty when count == 0.
  std::vector<double> cdf;

  bool operator==(const Summary&) const = default;
};

inline constexpr std::size_t kCdfPoints = 201;

Summary summarize(std::vector<double> values, std::size_t cdf_points = kCdfPoints);

double mean(const std::vector<double>& values);

/// Pearson correlation; 0 when either series is constant or too short.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace dynaraft::harness
