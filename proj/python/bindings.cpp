#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dynaraft/harness/runner.hpp"
#include "dynaraft/scenario/presets.hpp"
#include "dynaraft/scenario/report.hpp"
#include "dynaraft/scenario/scenario.hpp"
#include "dynaraft/tuner.hpp"

namespace py = pybind11;
using namespace dynaraft;

namespace {

tuner::TunerConfig tuner_config(double s, double x, std::size_t min_list_size, std::size_t max_list_size) {
  tuner::TunerConfig cfg;
  cfg.s = s;
  cfg.x = x;
  cfg.min_list_size = min_list_size;
  cfg.max_list_size = max_list_size;
  return cfg;
}

tuner::MeasurementWindow make_window(const std::vector<double>& rtts_ms, const std::vector<std::uint64_t>& ids,
                                     std::size_t max_size) {
  tuner::MeasurementWindow w(max_size);
  for (double r : rtts_ms) w.record_rtt(from_ms(r));
  for (auto id : ids) w.record_id(id);
  return w;
}

py::dict output_dict(const tuner::TuningOutput& o) {
  py::dict d;
  d["et_ms"] = to_ms(o.et);
  d["h_ms"] = to_ms(o.h);
  d["k"] = o.k;
  d["p"] = o.p;
  d["warm"] = o.warm;
  return d;
}

harness::ScenarioSpec resolve(const std::string& target) {
  if (auto preset = scenario::find_preset(target)) return *preset;
  auto parsed = scenario::parse_text(target);
  if (!parsed.ok()) {
    std::string msg = "invalid scenario";
    for (const auto& e : parsed.errors) msg += "\n  " + e;
    throw py::value_error(msg);
  }
  return *parsed.spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Raft with per-link timeout tuning in a deterministic simulator";

  m.def(
      "election_timeout_ms",
      [](const std::vector<double>& rtts_ms, double s, std::size_t min_list_size) {
        auto cfg = tuner_config(s, 0.999, min_list_size, std::max<std::size_t>(rtts_ms.size(), 1));
        return to_ms(tuner::election_timeout(make_window(rtts_ms, {}, cfg.max_list_size), cfg));
      },
      py::arg("rtts_ms"), py::arg("s") = 2.0, py::arg("min_list_size") = 10);

  m.def(
      "required_heartbeats",
      [](double p, double x) { return tuner::required_heartbeats(p, x, tuner::TunerConfig{}); }, py::arg("p"),
      py::arg("x") = 0.999);

  m.def(
      "heartbeat_interval_ms", [](double et_ms, int k) { return to_ms(tuner::heartbeat_interval(from_ms(et_ms), k)); },
      py::arg("et_ms"), py::arg("k"));

  m.def(
      "tune",
      [](const std::vector<double>& rtts_ms, const std::vector<std::uint64_t>& ids, double s, double x,
         std::size_t min_list_size, std::size_t max_list_size) {
        auto cfg = tuner_config(s, x, min_list_size, max_list_size);
        return output_dict(tuner::tune(make_window(rtts_ms, ids, max_list_size), cfg));
      },
      py::arg("rtts_ms"), py::arg("ids"), py::arg("s") = 2.0, py::arg("x") = 0.999, py::arg("min_list_size") = 10,
      py::arg("max_list_size") = 1000);

  m.def("preset_names", [] {
    std::vector<std::string> names;
    for (const auto& p : scenario::presets()) names.push_back(p.name);
    return names;
  });

  m.def(
      "preset_json",
      [](const std::string& name) {
        auto spec = scenario::find_preset(name);
        if (!spec) throw py::key_error(name);
        return scenario::serialize(*spec);
      },
      py::arg("name"));

  m.def(
      "validate", [](const std::string& text) { return scenario::parse_text(text).errors; }, py::arg("text"));

  m.def(
      "run_json",
      [](const std::string& target, std::optional<std::size_t> reps, std::optional<std::uint64_t> seed,
         std::size_t threads) {
        auto spec = resolve(target);
        if (reps) spec.repetitions = *reps;
        if (seed) spec.seed = *seed;
        harness::RunOptions options;
        options.threads = threads;
        options.series = false;
        harness::MetricsReport report;
        {
          py::gil_scoped_release release;
          report = harness::run_scenario(spec, options);
        }
        return scenario::summary_json(report).dump();
      },
      py::arg("target"), py::arg("reps") = py::none(), py::arg("seed") = py::none(), py::arg("threads") = 0);
}
