// dynaraft: run, validate and list simulation scenarios.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dynaraft/harness/runner.hpp"
#include "dynaraft/scenario/presets.hpp"
#include "dynaraft/scenario/report.hpp"
#include "dynaraft/scenario/scenario.hpp"

namespace fs = std::filesystem;
using namespace dynaraft;

namespace {

struct RunArgs {
  std::string target;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::vector<std::string> variants;
  std::optional<double> time_scale;
  std::optional<std::string> out;
  bool trace = false;
  std::size_t threads = 0;
};

std::optional<harness::ScenarioSpec> resolve(const std::string& target) {
  if (auto preset = scenario::find_preset(target)) return preset;
  auto parsed = scenario::load(target);
  if (!parsed.ok()) {
    std::cerr << target << ": invalid scenario\n";
    for (const auto& e : parsed.errors) std::cerr << "  " << e << "\n";
    return std::nullopt;
  }
  return parsed.spec;
}

void print_summary(const harness::MetricsReport& report) {
  std::printf("%-10s %5s %9s %12s %12s %12s %9s %9s %9s\n", "variant", "reps", "detected", "detect_ms", "ots_ms",
              "total_ots_ms", "pre_votes", "elections", "leaders");
  for (const auto& v : report.variants) {
    auto mean_or_dash = [](const harness::Summary& s) {
      return s.count ? format_ms(from_ms(s.mean)) : std::string("-");
    };
    std::printf("%-10s %5zu %9zu %12s %12s %12s %9zu %9zu %9zu\n",
                std::string(harness::variant_name(v.variant.name)).c_str(), v.repetitions.size(), v.detected,
                mean_or_dash(v.detection_ms).c_str(), mean_or_dash(v.ots_ms).c_str(),
                mean_or_dash(v.total_ots_ms).c_str(), v.pre_votes, v.elections, v.leader_changes);
  }
}

int run(const RunArgs& args) {
  auto spec = resolve(args.target);
  if (!spec) return 2;
  if (args.seed) spec->seed = *args.seed;
  if (args.reps) spec->repetitions = *args.reps;
  if (args.time_scale) spec->time_scale = *args.time_scale;
  if (!args.variants.empty()) {
    std::vector<harness::VariantSpec> chosen;
    for (const auto& text : args.variants) {
      auto name = harness::parse_variant(text);
      if (!name) {
        std::cerr << "unknown variant: " << text << "\n";
        return 2;
      }
      auto existing = std::find_if(spec->variants.begin(), spec->variants.end(),
                                   [&](const harness::VariantSpec& v) { return v.name == *name; });
      chosen.push_back(existing != spec->variants.end() ? *existing : harness::VariantSpec::defaults(*name));
    }
    spec->variants = chosen;
  }
  if (args.trace && std::find(spec->formats.begin(), spec->formats.end(), "ndjson") == spec->formats.end()) {
    spec->formats.push_back("ndjson");
  }
  if (auto errors = spec->validate(); !errors.empty()) {
    std::cerr << "invalid scenario\n";
    for (const auto& e : errors) std::cerr << "  " << e << "\n";
    return 2;
  }

  fs::path out = args.out ? *args.out : spec->output_directory;
  if (const char* env = std::getenv("DYNARAFT_OUT"); env && *env) out = env;

  harness::RunOptions options;
  options.threads = args.threads;
  options.keep_traces = std::find(spec->formats.begin(), spec->formats.end(), "ndjson") != spec->formats.end();
  harness::MetricsReport report;
  try {
    report = harness::run_scenario(*spec, options);
  } catch (const harness::SafetyViolation& e) {
    std::cerr << "safety violation: " << e.what() << "\n";
    return 3;
  }
  auto written = scenario::write_report(report, out, spec->formats);
  print_summary(report);
  std::cout << "wrote " << written.paths.size() << " file(s) to " << out.string() << "\n";
  return 0;
}

int validate(const std::string& path) {
  auto parsed = scenario::load(path);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) std::cerr << path << ": " << e << "\n";
    return 2;
  }
  std::cout << path << ": ok\n";
  return 0;
}

int list_presets(const std::optional<std::string>& write_dir) {
  for (const auto& p : scenario::presets()) {
    std::printf("%-16s %s\n", p.name.c_str(), p.summary.c_str());
    if (write_dir) {
      fs::create_directories(*write_dir);
      std::ofstream(fs::path(*write_dir) / (p.name + ".json")) << scenario::serialize(p.spec);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Raft with pre-vote and per-link timeout tuning in a deterministic simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a preset or scenario file");
  run_cmd->add_option("target", run_args.target, "Preset name or path to a scenario JSON file")->required();
  run_cmd->add_option("--seed", run_args.seed, "Override the scenario seed");
  run_cmd->add_option("--reps", run_args.reps, "Override the repetition count")->check(CLI::PositiveNumber);
  run_cmd->add_option("--variant", run_args.variants, "Variants to run (repeatable)");
  run_cmd->add_option("--time-scale", run_args.time_scale, "Override time_scale")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run_args.out, "Output directory (DYNARAFT_OUT takes precedence)");
  run_cmd->add_flag("--trace", run_args.trace, "Also write NDJSON event traces");
  run_cmd->add_option("--threads", run_args.threads, "Worker threads; 0 uses all cores");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("path", validate_path)->required();

  std::optional<std::string> write_dir;
  auto* presets_cmd = app.add_subcommand("presets", "List the built-in presets");
  presets_cmd->add_option("--write", write_dir, "Also write each preset as JSON into this directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(run_args);
    if (*validate_cmd) return validate(validate_path);
    if (*presets_cmd) return list_presets(write_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
