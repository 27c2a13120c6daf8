#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dynaraft/harness/runner.hpp"
#include "json.hpp"

namespace dynaraft::scenario {

// CSV tables. Every table starts with a header row; times are milliseconds
// with three decimals.
std::string repetitions_csv(const harness::MetricsReport& report);
std::string kth_timeout_csv(const harness::MetricsReport& report);
std::string heartbeat_rate_csv(const harness::MetricsReport& report);
std::string ots_shading_csv(const harness::MetricsReport& report);
std::string tuning_csv(const harness::MetricsReport& report);

nlohmann::json summary_json(const harness::MetricsReport& report);

/// Files written by write_report, relative to its directory.
struct WrittenFiles {
  std::vector<std::filesystem::path> paths;
};

/// Writes the tables ("csv"), summary.json ("json") and, for repetitions that
/// kept their trace, trace_<variant>_<rep>.ndjson ("ndjson").
WrittenFiles write_report(const harness::MetricsReport& report, const std::filesystem::path& directory,
                          const std::vector<std::string>& formats);

}  // namespace dynaraft::scenario
