// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "dynaraft/harness/runner.hpp"
#include "dynaraft/scenario/presets.hpp"
#include "dynaraft/tuner.hpp"

using namespace dynaraft;
using namespace dynaraft::harness;
using namespace std::chrono_literals;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunOptions parallel(bool keep_traces = false, bool series = true) {
  RunOptions o;
  o.threads = 0;
  o.keep_traces = keep_traces;
  o.series = series;
  return o;
}

// Smallest K with p^K <= 1 - x, by repeated multiplication.
int brute_force_k(double p, double x, int k_max = 64) {
  if (p <= 0.0) return 1;
  long double miss = p;
  for (int k = 1; k <= k_max; ++k) {
    if (miss <= (1.0L - x) + 1e-15L) return k;
    miss *= p;
  }
  return k_max;
}

// ---------------------------------------------------------------------------
// Criteria 1-3 share one campaign.

struct StableCampaign {
  MetricsReport report;
  double seconds = 0;
};

const StableCampaign& stable_campaign() {
  static const StableCampaign campaign = [] {
    StableCampaign c;
    const auto t0 = std::chrono::steady_clock::now();
    c.report = run_scenario(*scenario::find_preset("stable-election"), parallel(true, false));
    c.seconds = seconds_since(t0);
    return c;
  }();
  return campaign;
}

Outcome criterion1() {
  const auto& c = stable_campaign();
  const auto* dyn = c.report.find(VariantName::Dynatune);
  const auto* raft = c.report.find(VariantName::Raft);
  Outcome o;
  const double d = dyn->detection_ms.mean, r = raft->detection_ms.mean;
  const double reduction = 1.0 - d / r;
  o.note("dynatune " + fmt("%.1f", d) + " ms, raft " + fmt("%.1f", r) + " ms, reduction " +
         fmt("%.1f", 100 * reduction) + "%, " + fmt("%.1f", c.seconds) + " s");
  o.require(dyn->detected == 100 && raft->detected == 100, "every repetition detected");
  o.require(d <= 300.0, "dynatune <= 300 ms");
  o.require(r >= 1000.0 && r <= 1600.0, "raft in [1000, 1600] ms");
  o.require(reduction >= 0.70, "reduction >= 70%");
  o.require(c.seconds <= 60.0, "runtime <= 1 min");
  return o;
}

Outcome criterion2() {
  const auto& c = stable_campaign();
  const auto* dyn = c.report.find(VariantName::Dynatune);
  const auto* raft = c.report.find(VariantName::Raft);
  Outcome o;
  const double d = dyn->ots_ms.mean, r = raft->ots_ms.mean;
  const double reduction = 1.0 - d / r;
  o.note("dynatune " + fmt("%.1f", d) + " ms, raft " + fmt("%.1f", r) + " ms, reduction " +
         fmt("%.1f", 100 * reduction) + "%");
  o.require(d < r, "dynatune OTS < raft OTS");
  o.require(reduction >= 0.30, "reduction >= 30%");
  std::size_t bad = 0;
  for (const auto* v : {dyn, raft}) {
    for (const auto& rep : v->repetitions) {
      if (!rep.ots || rep.detection.status != Detection::Status::Detected || rep.detection.time > *rep.ots) ++bad;
    }
  }
  o.require(bad == 0, "detection <= OTS in every repetition (" + std::to_string(bad) + " violations)");
  return o;
}

// Expected value of the reported quantity. Every live non-leader contributes
// its current draw from U[base, 2 base), the detector included, so the
// expectation is the mean of 1.5 base over those servers, with each base read
// off the trace at the failure instant.
double randomized_oracle(const sim::EventTrace& trace, SimTime failure_at) {
  struct State {
    bool crashed = false;
    bool leader = false;
    Micros base{};
  };
  std::vector<State> s(trace.servers);
  for (const auto& e : trace.entries) {
    if (e.at > failure_at) break;
    auto& st = s[e.server.index()];
    if (const auto* r = sim::record_as<raft::RoleChanged>(e)) st.leader = r->role == raft::Role::Leader;
    if (const auto* r = sim::record_as<raft::TimerArmed>(e)) st.base = r->base;
    if (sim::record_as<raft::Crashed>(e)) st.crashed = true;
    if (sim::record_as<raft::Recovered>(e)) st.crashed = false;
  }
  double sum = 0;
  std::size_t n = 0;
  for (const auto& st : s) {
    if (st.crashed || st.leader || st.base <= Micros::zero()) continue;
    sum += 1.5 * to_ms(st.base) - 0.0005;  // uniform over integer micros [base, 2 base - 1]
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

Outcome criterion3() {
  const auto& c = stable_campaign();
  Outcome o;
  for (auto [name, lo, hi] : {std::tuple{VariantName::Raft, 1250.0, 1700.0}, std::tuple{VariantName::Dynatune, 100.0, 220.0}}) {
    const auto* v = c.report.find(name);
    const double measured = v->randomized_ms.mean;
    double oracle = 0;
    std::size_t n = 0;
    for (const auto& rep : v->repetitions) {
      if (rep.detection.status != Detection::Status::Detected || !rep.trace) continue;
      oracle += randomized_oracle(*rep.trace, rep.detection.failure_at);
      ++n;
    }
    oracle /= static_cast<double>(std::max<std::size_t>(n, 1));
    const std::string label(variant_name(name));
    o.note(label + " " + fmt("%.1f", measured) + " ms (oracle " + fmt("%.1f", oracle) + " ms)");
    o.require(measured >= lo && measured <= hi, label + " in [" + fmt("%.0f", lo) + ", " + fmt("%.0f", hi) + "] ms");
    o.require(std::fabs(measured - oracle) <= 0.10 * oracle, label + " within 10% of oracle");
  }
  return o;
}

// ---------------------------------------------------------------------------

/// Plateau index of `t` in a (scaled) schedule.
std::size_t plateau_of(const sim::LinkProfile& p, SimTime t) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < p.schedule.size(); ++i) {
    if (p.schedule[i].start <= t) idx = i;
  }
  return idx;
}

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = *scenario::find_preset("gradual-rtt");
  const auto report = run_scenario(spec, parallel());
  const double secs = seconds_since(t0);
  const auto profile = make_sim_config(spec, VariantSpec::dynatune(), 0).network.default_profile;
  Outcome o;

  const auto& dyn = report.find(VariantName::Dynatune)->repetitions.at(0);
  const auto& raft = report.find(VariantName::Raft)->repetitions.at(0);
  const auto& low = report.find(VariantName::RaftLow)->repetitions.at(0);
  o.require(dyn.total_ots == Micros::zero(), "dynatune total OTS = 0 (got " + format_ms(dyn.total_ots) + " ms)");
  o.require(raft.total_ots == Micros::zero(), "raft total OTS = 0 (got " + format_ms(raft.total_ots) + " ms)");

  Micros low_high_rtt{};
  for (std::size_t i = 0; i < profile.schedule.size(); ++i) {
    if (profile.schedule[i].rtt < 150ms) continue;
    const SimTime from = profile.schedule[i].start;
    const SimTime to = i + 1 < profile.schedule.size() ? profile.schedule[i + 1].start : dyn.trace ? dyn.trace->end : 155s;
    low_high_rtt += overlap(low.ots_intervals, from, to);
  }
  o.require(low_high_rtt >= 1s, "raft-low OTS >= 1 s while RTT >= 150 ms");

  // Per-link Et against the plateau RTT, warm follower samples only.
  std::map<std::uint32_t, std::vector<std::pair<double, double>>> links;  // server -> (rtt, et)
  std::map<std::uint32_t, std::map<std::size_t, std::vector<double>>> by_plateau;
  for (const auto& t : dyn.tuning) {
    if (t.crashed || t.role != raft::Role::Follower || !t.output.warm) continue;
    const SimTime at = std::chrono::seconds{t.second} - 1us;
    const auto idx = plateau_of(profile, at);
    links[t.server.value].emplace_back(to_ms(profile.schedule[idx].rtt), to_ms(t.output.et));
    by_plateau[t.server.value][idx].push_back(to_ms(t.output.et));
  }
  const std::size_t peak = 15, last = profile.schedule.size() - 1;
  double worst_r = 1.0;
  bool shape = links.size() >= 4;
  for (auto& [server, pairs] : links) {
    std::vector<double> rtt, et;
    for (auto [r, e] : pairs) {
      rtt.push_back(r);
      et.push_back(e);
    }
    worst_r = std::min(worst_r, pearson(rtt, et));
    auto& plats = by_plateau[server];
    const double first_m = plats.count(0) ? mean(plats[0]) : 1e9;
    const double peak_m = plats.count(peak) ? mean(plats[peak]) : 0;
    const double last_m = plats.count(last) ? mean(plats[last]) : 1e9;
    if (!(peak_m > first_m && peak_m > last_m)) shape = false;
    if (server == links.begin()->first) {
      o.note("link " + std::to_string(server) + " Et " + fmt("%.0f", first_m) + " -> " + fmt("%.0f", peak_m) + " -> " +
             fmt("%.0f", last_m) + " ms");
    }
  }
  o.note("min per-link r(Et, RTT) " + fmt("%.2f", worst_r) + ", raft-low OTS at RTT >= 150 ms " +
         fmt("%.0f", to_ms(low_high_rtt)) + " ms, " + fmt("%.1f", secs) + " s");
  o.require(shape, "every link's Et peaks on the 200 ms plateau");
  o.require(worst_r >= 0.5, "r(Et, RTT) >= 0.5 on every link");
  o.require(secs <= 120.0, "runtime <= 2 min");
  return o;
}

Outcome criterion5() {
  const auto spec = *scenario::find_preset("radical-rtt");
  const auto report = run_scenario(spec, parallel(true));
  const auto profile = make_sim_config(spec, VariantSpec::dynatune(), 0).network.default_profile;
  const SimTime from = profile.schedule[1].start, to = profile.schedule[2].start;
  Outcome o;

  const auto& dyn = report.find(VariantName::Dynatune)->repetitions.at(0);
  const auto& low = report.find(VariantName::RaftLow)->repetitions.at(0);
  const auto roles = role_counts(*dyn.trace, from, to);
  const auto dyn_ots = overlap(dyn.ots_intervals, from, to);
  const auto low_ots = overlap(low.ots_intervals, from, to);
  o.note("dynatune pre-votes " + std::to_string(roles.pre_votes) + ", leader changes " +
         std::to_string(roles.leader_changes) + ", OTS " + format_ms(dyn_ots) + " ms; raft-low leaderless " +
         fmt("%.0f", 100.0 * to_ms(low_ots) / to_ms(to - from)) + "% of plateau");
  o.require(roles.pre_votes > 0, "dynatune pre-votes during plateau");
  o.require(roles.leader_changes == 0, "no leader change during plateau");
  o.require(dyn_ots == Micros::zero(), "dynatune OTS = 0 during plateau");
  o.require(low_ots * 2 >= to - from, "raft-low leaderless >= 50% of plateau");

  // After the plateau: each follower's Et must drop below 200 ms within its
  // first 20 tuned heartbeats.
  std::map<std::uint32_t, int> seen;
  std::map<std::uint32_t, bool> recovered;
  std::map<std::uint32_t, double> last_et;
  for (const auto& e : dyn.trace->entries) {
    if (e.at < to) continue;
    const auto* t = sim::record_as<raft::TuningApplied>(e);
    if (!t) continue;
    const auto s = e.server.value;
    const int n = ++seen[s];
    if (n <= 20) {
      if (t->output.warm && t->output.et < 200ms) recovered[s] = true;
      last_et[s] = to_ms(t->output.et);
    }
  }
  bool all = !seen.empty();
  int fewest = 1 << 30;
  double highest = 0;
  for (auto& [s, n] : seen) {
    all = all && recovered[s];
    fewest = std::min(fewest, n);
    highest = std::max(highest, last_et[s]);
  }
  o.note("after the plateau: fewest tuned heartbeats per follower " + std::to_string(fewest) +
         ", highest Et within the first 20 " + fmt("%.0f", highest) + " ms");
  o.require(all, "Et < 200 ms within 20 tuned heartbeats after the plateau");
  return o;
}

Outcome criterion6() {
  const auto spec = *scenario::find_preset("loss-sweep");
  const auto report = run_scenario(spec, parallel());
  const auto profile = make_sim_config(spec, VariantSpec::dynatune(), 0).network.default_profile;
  const auto* dyn = report.find(VariantName::Dynatune);
  const auto* fix = report.find(VariantName::FixK);
  Outcome o;

  // Steady state: the last third of each plateau.
  const auto& rep = dyn->repetitions.at(0);
  std::map<std::size_t, std::map<int, std::size_t>> k_counts;
  std::size_t h_mismatch = 0;
  for (const auto& t : rep.tuning) {
    if (t.crashed || t.role != raft::Role::Follower || !t.output.warm) continue;
    const SimTime at = std::chrono::seconds{t.second} - 1us;
    const auto idx = plateau_of(profile, at);
    const SimTime start = profile.schedule[idx].start;
    const SimTime end = idx + 1 < profile.schedule.size() ? profile.schedule[idx + 1].start : spec.duration;
    if (std::chrono::abs(t.output.h - t.output.et / t.output.k) > 1ms) ++h_mismatch;
    if (at < start + (end - start) * 2 / 3) continue;
    ++k_counts[idx][t.output.k];
  }
  std::string ks, wrong;
  for (std::size_t i = 0; i < profile.schedule.size(); ++i) {
    const double p = profile.schedule[i].loss;
    const int expected = brute_force_k(p, spec.variants[0].tuner.x);
    int mode = 0;
    std::size_t best = 0;
    for (auto [k, n] : k_counts[i]) {
      if (n > best) {
        best = n;
        mode = k;
      }
    }
    ks += (ks.empty() ? "" : ",") + std::to_string(mode);
    if (mode != expected) {
      wrong += (wrong.empty() ? "" : ", ") + fmt("p=%.2f", p) + " K=" + std::to_string(mode) + " want " +
               std::to_string(expected);
    }
  }
  o.note("steady K per plateau " + ks);
  o.require(wrong.empty(), "steady-state K equals brute force (" + wrong + ")");
  o.require(h_mismatch == 0, "h = Et/K within 1 ms (" + std::to_string(h_mismatch) + " samples off)");
  o.require(dyn->elections == 0 && fix->elections == 0,
            "zero elections (dynatune " + std::to_string(dyn->elections) + ", fix-k " + std::to_string(fix->elections) +
                ")");

  // Leader heartbeat rate on the p = 0 plateau, after warm-up.
  auto leader_rate = [&](const RepetitionResult& r) {
    const std::size_t from = 60, to = std::chrono::duration_cast<std::chrono::seconds>(profile.schedule[1].start).count();
    double best = 0;
    for (const auto& per_sec : r.heartbeat_rate) {
      double sum = 0;
      for (std::size_t s = from; s < to && s < per_sec.size(); ++s) sum += per_sec[s];
      best = std::max(best, sum / static_cast<double>(to - from));
    }
    return best;
  };
  const double dyn_rate = leader_rate(rep), fix_rate = leader_rate(fix->repetitions.at(0));
  o.note("leader heartbeats/s at p=0: dynatune " + fmt("%.1f", dyn_rate) + ", fix-k " + fmt("%.1f", fix_rate));
  o.require(dyn_rate * 5 <= fix_rate, "dynatune rate <= 1/5 of fix-k");
  return o;
}

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  tuner::TunerConfig cfg;

  std::size_t k_wrong = 0;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double p = i / 100.0 * cfg.p_cap;
      const double x = 0.5 + j / 100.0 * 0.4999;
      const int k = tuner::required_heartbeats(p, x, cfg);
      if (k != brute_force_k(p, x)) ++k_wrong;
    }
  }
  o.require(k_wrong == 0, "K minimal on 10^4 grid (" + std::to_string(k_wrong) + " wrong)");

  std::mt19937_64 rng(77);
  std::size_t loss_wrong = 0, bound_wrong = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t max = 1 + rng() % 100;
    const std::uint64_t n = 1 + rng() % 300;
    std::bernoulli_distribution drop((rng() % 60) / 100.0), dup((rng() % 30) / 100.0);
    std::vector<std::uint64_t> seq;
    for (std::uint64_t id = 1; id <= n; ++id) {
      if (drop(rng)) continue;
      seq.push_back(id);
      if (dup(rng)) seq.push_back(id);
    }
    switch (trial % 4) {
      case 0: break;
      case 1: std::shuffle(seq.begin(), seq.end(), rng); break;
      case 2: std::reverse(seq.begin(), seq.end()); break;
      case 3:
        for (std::size_t i = 0; i + 2 < seq.size(); i += 3) std::swap(seq[i], seq[i + 2]);
        break;
    }
    tuner::MeasurementWindow w(max);
    for (auto id : seq) w.record_id(id);
    std::set<std::uint64_t> distinct(seq.begin(), seq.end());
    std::vector<std::uint64_t> kept(distinct.begin(), distinct.end());
    if (kept.size() > max) kept.erase(kept.begin(), kept.end() - static_cast<std::ptrdiff_t>(max));
    const double oracle =
        kept.empty() ? 0.0 : 1.0 - static_cast<double>(kept.size()) / static_cast<double>(kept.back() - kept.front() + 1);
    if (w.loss_rate() != oracle) ++loss_wrong;
    const bool sorted_unique = std::adjacent_find(w.ids().begin(), w.ids().end(),
                                                  [](auto a, auto b) { return a >= b; }) == w.ids().end();
    if (w.ids().size() > max || !sorted_unique) ++bound_wrong;
  }
  o.require(loss_wrong == 0, "loss_rate equals direct count (" + std::to_string(loss_wrong) + " wrong)");
  o.require(bound_wrong == 0, "window bounded and deduplicated (" + std::to_string(bound_wrong) + " wrong)");

  std::size_t reset_wrong = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    tuner::MeasurementWindow w(50);
    for (int i = 0; i < 60; ++i) {
      w.record_rtt(Micros{static_cast<Micros::rep>(1000 + rng() % 500'000)});
      w.record_id(rng() % 100);
    }
    w.reset();
    if (!(tuner::tune(w, cfg) == tuner::fallback(cfg)) || tuner::tune(w, cfg).et != cfg.default_et ||
        tuner::tune(w, cfg).h != cfg.default_h) {
      ++reset_wrong;
    }
  }
  o.require(reset_wrong == 0, "fallback exact after reset");
  const double secs = seconds_since(t0);
  o.note("10^4 grid points, 10^4 arrival patterns, " + fmt("%.2f", secs) + " s");
  o.require(secs <= 30.0, "runtime <= 30 s");
  return o;
}

// Random scenario within the experimental ranges: RTT 50-500 ms, loss up to
// 30 %, crash/recover plans, any variant.
ScenarioSpec random_scenario(std::mt19937_64& rng, std::size_t index) {
  ScenarioSpec s;
  s.name = "safety-" + std::to_string(index);
  s.seed = rng();
  s.servers = std::array<std::size_t, 3>{3, 5, 7}[rng() % 3];
  const std::array<VariantSpec, 4> all{VariantSpec::dynatune(), VariantSpec::raft(), VariantSpec::raft_low(),
                                       VariantSpec::fix_k(1 + static_cast<int>(rng() % 10))};
  s.variants = {all[index % 4]};
  s.duration = std::chrono::seconds{20 + rng() % 21};
  s.probe_interval = std::chrono::milliseconds{100 + rng() % 400};
  s.time_scale = 1;

  auto random_profile = [&] {
    sim::LinkProfile p;
    const int segments = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < segments; ++i) {
      const SimTime start = i == 0 ? SimTime{} : p.schedule.back().start + std::chrono::milliseconds{1000 + rng() % 9000};
      p.schedule.push_back(sim::Segment{start, std::chrono::milliseconds{50 + rng() % 451},
                                        std::chrono::milliseconds{rng() % 20}, (rng() % 31) / 100.0});
    }
    p.duplication = (rng() % 4 == 0) ? (rng() % 10) / 100.0 : 0.0;
    return p;
  };
  s.network.default_profile = random_profile();
  for (int i = 0, n = static_cast<int>(rng() % 3); i < n; ++i) {
    sim::LinkOverride ov;
    ov.from = ServerId{static_cast<std::uint32_t>(rng() % s.servers)};
    ov.to = ServerId{static_cast<std::uint32_t>((ov.from.value + 1 + rng() % (s.servers - 1)) % s.servers)};
    ov.symmetric = rng() % 2;
    ov.profile = random_profile();
    s.network.overrides.push_back(ov);
  }
  SimTime t{};
  for (int i = 0, n = static_cast<int>(rng() % 6); i < n; ++i) {
    t += std::chrono::milliseconds{500 + rng() % 5000};
    if (t >= s.duration) break;
    sim::Fault f;
    f.at = t;
    f.kind = rng() % 2 ? sim::FaultKind::Crash : sim::FaultKind::Recover;
    const auto pick = rng() % 3;
    if (f.kind == sim::FaultKind::Crash) {
      f.target = pick == 0 ? sim::FaultTarget::Leader : sim::FaultTarget::Server;
    } else {
      f.target = pick == 0 ? sim::FaultTarget::LastCrashed : sim::FaultTarget::Server;
    }
    f.server = ServerId{static_cast<std::uint32_t>(rng() % s.servers)};
    s.faults.push_back(f);
  }
  return s;
}

std::string ndjson(const sim::EventTrace& trace) {
  std::ostringstream os;
  sim::write_ndjson(os, trace);
  return os.str();
}

Outcome criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(8);
  std::vector<ScenarioSpec> specs;
  for (std::size_t i = 0; i < 1000; ++i) specs.push_back(random_scenario(rng, i));

  std::atomic<std::size_t> next{0}, violations{0}, irreproducible{0}, commits{0};
  std::mutex first_error_mutex;
  std::string first_error;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < specs.size();) {
      const auto& spec = specs[i];
      const auto cfg = make_sim_config(spec, spec.variants[0], 0);
      const auto a = sim::simulate(cfg);
      const auto b = sim::simulate(cfg);
      try {
        audit_safety(a);
      } catch (const SafetyViolation& v) {
        ++violations;
        std::lock_guard lock(first_error_mutex);
        if (first_error.empty()) first_error = spec.name + ": " + v.what();
      }
      if (ndjson(a) != ndjson(b)) ++irreproducible;
      for (const auto& e : a.entries) commits += sim::record_as<raft::Committed>(e) != nullptr;
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::max(1u, std::thread::hardware_concurrency());
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  const double secs = seconds_since(t0);

  Outcome o;
  o.note("1000 scenarios, " + std::to_string(commits.load()) + " commits audited, " + fmt("%.1f", secs) + " s");
  o.require(violations == 0, "no safety violations (" + std::to_string(violations.load()) + ") " + first_error);
  o.require(irreproducible == 0, "byte-identical replays (" + std::to_string(irreproducible.load()) + " differ)");
  o.require(secs <= 600.0, "runtime <= 10 min");
  return o;
}

Outcome criterion9() {
  auto spec = *scenario::find_preset("stable-election");
  const auto base = run_scenario(spec, parallel(true, false));
  spec.clock_offsets = {0ms, 500ms, -500ms, 500ms, -500ms};
  const auto shifted = run_scenario(spec, parallel(true, false));

  std::size_t rtts = 0, tunings = 0, differing = 0;
  for (std::size_t v = 0; v < base.variants.size(); ++v) {
    for (std::size_t r = 0; r < base.variants[v].repetitions.size(); ++r) {
      auto pick = [&](const sim::EventTrace& t) {
        std::vector<sim::TraceEntry> out;
        for (const auto& e : t.entries) {
          if (sim::record_as<raft::RttMeasured>(e) || sim::record_as<raft::TuningApplied>(e)) out.push_back(e);
        }
        return out;
      };
      const auto a = pick(*base.variants[v].repetitions[r].trace);
      const auto b = pick(*shifted.variants[v].repetitions[r].trace);
      for (const auto& e : a) (sim::record_as<raft::RttMeasured>(e) ? rtts : tunings) += 1;
      if (a != b) ++differing;
    }
  }
  Outcome o;
  o.note(std::to_string(rtts) + " RTT samples, " + std::to_string(tunings) + " tuning outputs compared");
  o.require(rtts > 0 && tunings > 0, "records present");
  o.require(differing == 0, "identical under +-500 ms offsets (" + std::to_string(differing) + " repetitions differ)");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"stable-election detection", criterion1}, {"stable-election OTS", criterion2},
      {"randomized timeout at detection", criterion3}, {"gradual RTT", criterion4},
      {"radical RTT", criterion5}, {"loss sweep", criterion6},
      {"tuner properties", criterion7}, {"safety campaign", criterion8},
      {"clock offsets", criterion9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
