#include "dynaraft/harness/runner.hpp"

#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>

namespace dynaraft::harness {

const VariantReport* MetricsReport::find(VariantName name) const {
  for (const auto& v : variants) {
    if (v.variant.name == name) return &v;
  }
  return nullptr;
}

RepetitionResult analyze_trace(const sim::EventTrace& trace, std::size_t kth, bool series) {
  audit_safety(trace);
  RepetitionResult r;
  r.detection = detection_time(trace);
  r.ots_intervals = ots_intervals(trace);
  for (const auto& iv : r.ots_intervals) r.total_ots += iv.length();
  if (r.detection.status != Detection::Status::Inapplicable) {
    r.ots = failure_ots(r.ots_intervals, r.detection.failure_at, trace.end);
  }
  r.roles = role_counts(trace);
  r.first_leader = first_leader_time(trace);
  if (series) {
    r.kth_timeout = kth_smallest_timeout_series(trace, kth);
    for (std::uint32_t i = 0; i < trace.servers; ++i) r.heartbeat_rate.push_back(heartbeat_rate(trace, ServerId{i}));
    r.tuning = tuning_series(trace);
  }
  r.fingerprint = sim::fingerprint(trace);
  return r;
}

RepetitionResult run_repetition(const ScenarioSpec& spec, const VariantSpec& variant, std::size_t rep,
                                const RunOptions& options) {
  auto config = make_sim_config(spec, variant, rep);
  const auto seed = config.seed;
  auto trace = sim::simulate(std::move(config));
  auto result = analyze_trace(trace, spec.effective_kth(), options.series);
  result.index = rep;
  result.seed = seed;
  if (options.keep_traces) result.trace = std::move(trace);
  return result;
}

VariantReport aggregate(const VariantSpec& variant, std::vector<RepetitionResult> reps) {
  VariantReport report;
  report.variant = variant;
  std::vector<double> detection, ots, randomized, total;
  for (const auto& r : reps) {
    switch (r.detection.status) {
      case Detection::Status::Detected:
        ++report.detected;
        detection.push_back(to_ms(r.detection.time));
        randomized.push_back(to_ms(r.detection.mean_randomized));
        break;
      case Detection::Status::Censored: ++report.censored; break;
      case Detection::Status::Inapplicable: ++report.inapplicable; break;
    }
    if (r.detection.status != Detection::Status::Inapplicable) {
      if (r.ots) {
        ots.push_back(to_ms(*r.ots));
      } else {
        ++report.unresolved_ots;
      }
    }
    total.push_back(to_ms(r.total_ots));
    report.elections += r.roles.elections;
    report.pre_votes += r.roles.pre_votes;
    report.leader_changes += r.roles.leader_changes;
  }
  report.detection_ms = summarize(std::move(detection));
  report.ots_ms = summarize(std::move(ots));
  report.randomized_ms = summarize(std::move(randomized));
  report.total_ots_ms = summarize(std::move(total));
  report.repetitions = std::move(reps);
  return report;
}

MetricsReport run_scenario(const ScenarioSpec& spec, const RunOptions& options) {
  if (const auto errors = spec.validate(); !errors.empty()) {
    std::string message = "invalid scenario:";
    for (const auto& e : errors) message += "\n  " + e;
    throw std::invalid_argument(message);
  }

  struct Job {
    std::size_t variant;
    std::size_t rep;
  };
  std::vector<Job> jobs;
  for (std::size_t v = 0; v < spec.variants.size(); ++v) {
    for (std::size_t r = 0; r < spec.repetitions; ++r) jobs.push_back(Job{v, r});
  }
  std::vector<std::optional<RepetitionResult>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = run_repetition(spec, spec.variants[jobs[i].variant], jobs[i].rep, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::max<std::size_t>(1, std::min(threads, jobs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  MetricsReport report;
  report.spec = spec;
  std::size_t i = 0;
  for (const auto& variant : spec.variants) {
    std::vector<RepetitionResult> reps;
    for (std::size_t r = 0; r < spec.repetitions; ++r) reps.push_back(std::move(*results[i++]));
    report.variants.push_back(aggregate(variant, std::move(reps)));
  }
  return report;
}

}  // namespace dynaraft::harness
