#include <gtest/gtest.h>

#include "dynaraft/harness/runner.hpp"
#include "dynaraft/scenario/presets.hpp"

using namespace dynaraft;
using namespace dynaraft::harness;
using namespace std::chrono_literals;

namespace {

ScenarioSpec small_campaign() {
  auto spec = *scenario::find_preset("stable-election");
  spec.repetitions = 6;
  return spec;
}

}  // namespace

TEST(Spec, VariantNames) {
  EXPECT_EQ(parse_variant("Raft_Low"), VariantName::RaftLow);
  EXPECT_EQ(parse_variant("FIX-K"), VariantName::FixK);
  EXPECT_FALSE(parse_variant("paxos"));
  for (auto v : {VariantName::Dynatune, VariantName::Raft, VariantName::RaftLow, VariantName::FixK}) {
    EXPECT_EQ(parse_variant(variant_name(v)), v);
  }
}

TEST(Spec, FixKNeedsK) {
  auto v = VariantSpec::fix_k();
  v.fixed_k.reset();
  const auto errors = v.validate();
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_NE(errors[0].find("fixed_K"), std::string::npos);
}

TEST(Spec, ScenarioValidation) {
  ScenarioSpec s;
  EXPECT_TRUE(s.validate().empty());
  s.servers = 0;
  s.repetitions = 0;
  s.faults = {sim::Fault{sim::FaultKind::Crash, 5s, sim::FaultTarget::Leader, {}},
              sim::Fault{sim::FaultKind::Crash, 2s, sim::FaultTarget::Leader, {}}};
  const auto errors = s.validate();
  EXPECT_GE(errors.size(), 3u);
}

TEST(Spec, ScaleTime) {
  EXPECT_EQ(scale_time(60s, 12), 5s);
  EXPECT_EQ(scale_time(1000us, 3), 333us);
  EXPECT_EQ(scale_time(2000us, 3), 667us);
  EXPECT_EQ(scale_time(7s, 1), 7s);
}

TEST(Spec, RepetitionSeedsDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::size_t r = 0; r < 1000; ++r) seen.insert(repetition_seed(1, r));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(repetition_seed(5, 3), repetition_seed(5, 3));
  EXPECT_NE(repetition_seed(5, 3), repetition_seed(6, 3));
}

TEST(Spec, MakeSimConfigScales) {
  auto spec = *scenario::find_preset("gradual-rtt");
  const auto cfg = make_sim_config(spec, VariantSpec::dynatune(), 2);
  EXPECT_EQ(cfg.duration, 155s);  // 31 plateaus of 5 s
  EXPECT_EQ(cfg.network.default_profile.schedule[1].start, 5s);
  EXPECT_EQ(cfg.network.default_profile.schedule[1].rtt, 60ms);  // delays never scale
  EXPECT_EQ(cfg.node.tuner.max_list_size, 83u);
  EXPECT_EQ(cfg.seed, repetition_seed(spec.seed, 2));
  spec.scale_window = false;
  EXPECT_EQ(make_sim_config(spec, VariantSpec::dynatune(), 2).node.tuner.max_list_size, 1000u);
}

TEST(Runner, VariantsShareRepetitionSeeds) {
  const auto report = run_scenario(small_campaign());
  ASSERT_EQ(report.variants.size(), 2u);
  for (std::size_t r = 0; r < 6; ++r) {
    EXPECT_EQ(report.variants[0].repetitions[r].seed, report.variants[1].repetitions[r].seed);
    EXPECT_EQ(report.variants[0].repetitions[r].index, r);
  }
}

TEST(Runner, ThreadCountDoesNotChangeResults) {
  RunOptions one;
  RunOptions many;
  many.threads = 4;
  const auto a = run_scenario(small_campaign(), one);
  const auto b = run_scenario(small_campaign(), many);
  ASSERT_EQ(a.variants.size(), b.variants.size());
  for (std::size_t v = 0; v < a.variants.size(); ++v) {
    EXPECT_EQ(a.variants[v].detection_ms, b.variants[v].detection_ms);
    EXPECT_EQ(a.variants[v].ots_ms, b.variants[v].ots_ms);
    for (std::size_t r = 0; r < a.variants[v].repetitions.size(); ++r) {
      EXPECT_EQ(a.variants[v].repetitions[r].fingerprint, b.variants[v].repetitions[r].fingerprint);
    }
  }
}

TEST(Runner, DetectionNeverExceedsOts) {
  const auto report = run_scenario(small_campaign());
  for (const auto& v : report.variants) {
    EXPECT_EQ(v.detected, 6u);
    for (const auto& r : v.repetitions) {
      ASSERT_TRUE(r.ots);
      EXPECT_LE(r.detection.time, *r.ots);
    }
  }
}

TEST(Runner, AggregateMatchesDirectMean) {
  const auto report = run_scenario(small_campaign());
  const auto& v = report.variants[0];
  double sum = 0;
  for (const auto& r : v.repetitions) sum += to_ms(r.detection.time);
  EXPECT_NEAR(v.detection_ms.mean, sum / 6.0, 1e-9);
}

TEST(Runner, InvalidSpecRejected) {
  ScenarioSpec s;
  s.servers = 0;
  EXPECT_THROW(run_scenario(s), std::invalid_argument);
}
