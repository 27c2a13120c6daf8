#include "dynaraft/scenario/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dynaraft::scenario {

using nlohmann::json;
using harness::MetricsReport;

namespace {

std::string variant_label(const harness::VariantReport& v) { return std::string(harness::variant_name(v.variant.name)); }

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string_view detection_status(harness::Detection::Status s) {
  switch (s) {
    case harness::Detection::Status::Detected: return "detected";
    case harness::Detection::Status::Censored: return "censored";
    case harness::Detection::Status::Inapplicable: return "inapplicable";
  }
  return "unknown";
}

/// Milliseconds rounded to three decimals, for JSON numbers.
double ms3(double ms) { return std::round(ms * 1000.0) / 1000.0; }

json summary_of(const harness::Summary& s) {
  json j = {{"count", s.count}};
  if (s.count == 0) return j;
  j["mean_ms"] = ms3(s.mean);
  j["min_ms"] = ms3(s.min);
  j["max_ms"] = ms3(s.max);
  j["p50_ms"] = ms3(s.p50);
  j["p95_ms"] = ms3(s.p95);
  j["p99_ms"] = ms3(s.p99);
  json cdf = json::array();
  for (std::size_t i = 0; i < s.cdf.size(); ++i) {
    const double q = s.cdf.size() > 1 ? static_cast<double>(i) / static_cast<double>(s.cdf.size() - 1) : 1.0;
    cdf.push_back({{"q", std::round(q * 1000.0) / 1000.0}, {"ms", ms3(s.cdf[i])}});
  }
  j["cdf"] = cdf;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

std::string repetitions_csv(const MetricsReport& report) {
  std::string out =
      "variant,rep,seed,detection_status,detection_ms,ots_ms,randomized_timeout_ms,total_ots_ms,elections,pre_votes,"
      "leader_changes,trace_hash\n";
  for (const auto& v : report.variants) {
    for (const auto& r : v.repetitions) {
      const bool detected = r.detection.status == harness::Detection::Status::Detected;
      char hash[17];
      std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.fingerprint));
      out += variant_label(v) + "," + std::to_string(r.index) + "," + std::to_string(r.seed) + "," +
             std::string(detection_status(r.detection.status)) + "," + (detected ? format_ms(r.detection.time) : "") +
             "," + (r.ots ? format_ms(*r.ots) : "") + "," + (detected ? format_ms(r.detection.mean_randomized) : "") +
             "," + format_ms(r.total_ots) + "," + std::to_string(r.roles.elections) + "," +
             std::to_string(r.roles.pre_votes) + "," + std::to_string(r.roles.leader_changes) + "," + hash + "\n";
    }
  }
  return out;
}

std::string kth_timeout_csv(const MetricsReport& report) {
  std::string out = "variant,rep,second,k,kth_timeout_ms\n";
  const std::string k = std::to_string(report.spec.effective_kth());
  for (const auto& v : report.variants) {
    for (const auto& r : v.repetitions) {
      for (std::size_t s = 0; s < r.kth_timeout.size(); ++s) {
        out += variant_label(v) + "," + std::to_string(r.index) + "," + std::to_string(s + 1) + "," + k + "," +
               (r.kth_timeout[s] ? format_ms(*r.kth_timeout[s]) : "") + "\n";
      }
    }
  }
  return out;
}

std::string heartbeat_rate_csv(const MetricsReport& report) {
  std::string out = "variant,rep,second,server,heartbeats\n";
  for (const auto& v : report.variants) {
    for (const auto& r : v.repetitions) {
      const std::size_t seconds = r.heartbeat_rate.empty() ? 0 : r.heartbeat_rate.front().size();
      for (std::size_t s = 0; s < seconds; ++s) {
        for (std::size_t server = 0; server < r.heartbeat_rate.size(); ++server) {
          out += variant_label(v) + "," + std::to_string(r.index) + "," + std::to_string(s) + "," +
                 std::to_string(server) + "," + std::to_string(r.heartbeat_rate[server][s]) + "\n";
        }
      }
    }
  }
  return out;
}

std::string ots_shading_csv(const MetricsReport& report) {
  std::string out = "variant,rep,start_ms,end_ms,duration_ms\n";
  for (const auto& v : report.variants) {
    for (const auto& r : v.repetitions) {
      for (const auto& iv : r.ots_intervals) {
        out += variant_label(v) + "," + std::to_string(r.index) + "," + format_ms(iv.start) + "," + format_ms(iv.end) +
               "," + format_ms(iv.length()) + "\n";
      }
    }
  }
  return out;
}

std::string tuning_csv(const MetricsReport& report) {
  std::string out = "variant,rep,second,server,role,crashed,election_timeout_ms,tuned_et_ms,tuned_h_ms,k,loss_rate,warm\n";
  for (const auto& v : report.variants) {
    for (const auto& r : v.repetitions) {
      for (const auto& t : r.tuning) {
        out += variant_label(v) + "," + std::to_string(r.index) + "," + std::to_string(t.second) + "," +
               std::to_string(t.server.value) + "," + std::string(raft::role_name(t.role)) + "," +
               (t.crashed ? "1" : "0") + "," + format_ms(t.election_timeout) + "," + format_ms(t.output.et) + "," +
               format_ms(t.output.h) + "," + std::to_string(t.output.k) + "," + fixed(t.output.p, 6) + "," +
               (t.output.warm ? "1" : "0") + "\n";
      }
    }
  }
  return out;
}

json summary_json(const MetricsReport& report) {
  json doc;
  doc["scenario"] = report.spec.name;
  doc["seed"] = report.spec.seed;
  doc["repetitions"] = report.spec.repetitions;
  doc["time_scale"] = report.spec.time_scale;
  doc["variants"] = json::array();
  for (const auto& v : report.variants) {
    json j;
    j["name"] = variant_label(v);
    j["detection"] = summary_of(v.detection_ms);
    j["ots"] = summary_of(v.ots_ms);
    j["randomized_timeout_at_detection"] = summary_of(v.randomized_ms);
    j["total_ots"] = summary_of(v.total_ots_ms);
    j["detected"] = v.detected;
    j["censored"] = v.censored;
    j["inapplicable"] = v.inapplicable;
    j["unresolved_ots"] = v.unresolved_ots;
    j["elections"] = v.elections;
    j["pre_votes"] = v.pre_votes;
    j["leader_changes"] = v.leader_changes;
    doc["variants"].push_back(j);
  }
  const auto* dyn = report.find(harness::VariantName::Dynatune);
  const auto* raft = report.find(harness::VariantName::Raft);
  if (dyn && raft && dyn->detection_ms.count > 0 && raft->detection_ms.count > 0 && raft->detection_ms.mean > 0 &&
      dyn->ots_ms.count > 0 && raft->ots_ms.count > 0 && raft->ots_ms.mean > 0) {
    doc["dynatune_vs_raft"] = {
        {"detection_reduction", std::round((1.0 - dyn->detection_ms.mean / raft->detection_ms.mean) * 1e4) / 1e4},
        {"ots_reduction", std::round((1.0 - dyn->ots_ms.mean / raft->ots_ms.mean) * 1e4) / 1e4},
    };
  }
  return doc;
}

WrittenFiles write_report(const MetricsReport& report, const std::filesystem::path& directory,
                          const std::vector<std::string>& formats) {
  auto wants = [&](std::string_view f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };
  std::filesystem::create_directories(directory);
  WrittenFiles written;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file(directory / name, content);
    written.paths.emplace_back(name);
  };
  if (wants("csv")) {
    emit("repetitions.csv", repetitions_csv(report));
    emit("kth_timeout.csv", kth_timeout_csv(report));
    emit("heartbeat_rate.csv", heartbeat_rate_csv(report));
    emit("ots_shading.csv", ots_shading_csv(report));
    emit("tuning.csv", tuning_csv(report));
  }
  if (wants("json")) emit("summary.json", summary_json(report).dump(2) + "\n");
  if (wants("ndjson")) {
    for (const auto& v : report.variants) {
      for (const auto& r : v.repetitions) {
        if (!r.trace) continue;
        std::string body;
        for (const auto& e : r.trace->entries) {
          body += sim::to_ndjson(e);
          body += '\n';
        }
        emit("trace_" + variant_label(v) + "_" + std::to_string(r.index) + ".ndjson", body);
      }
    }
  }
  return written;
}

}  // namespace dynaraft::scenario
