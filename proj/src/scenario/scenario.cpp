#include "dynaraft/scenario/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace dynaraft::scenario {

using nlohmann::json;

namespace {

class Reader {
 public:
  std::vector<std::string> errors;

  void error(const std::string& path, const std::string& message) { errors.push_back(path + ": " + message); }

  /// Checks that `j` is an object and that it has no keys outside `allowed`.
  bool object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) {
      error(path, "expected an object");
      return false;
    }
    for (const auto& [key, value] : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) error(join(path, key), "unknown key");
    }
    return true;
  }

  const json* member(const json& obj, const std::string& path, const char* key, bool required) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) error(join(path, key), "required");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& obj, const std::string& path, const char* key, bool required = false) {
    const json* v = member(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      error(join(path, key), "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<std::uint64_t> count(const json& obj, const std::string& path, const char* key,
                                     bool required = false) {
    const json* v = member(obj, path, key, required);
    if (!v) return std::nullopt;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer() && v->get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v->get<std::int64_t>());
    error(join(path, key), "expected a non-negative integer");
    return std::nullopt;
  }

  std::optional<std::int64_t> integer(const json& obj, const std::string& path, const char* key,
                                      bool required = false) {
    const json* v = member(obj, path, key, required);
    if (!v) return std::nullopt;
    if (v->is_number_integer()) return v->get<std::int64_t>();
    error(join(path, key), "expected an integer");
    return std::nullopt;
  }

  std::optional<bool> boolean(const json& obj, const std::string& path, const char* key) {
    const json* v = member(obj, path, key, false);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) {
      error(join(path, key), "expected true or false");
      return std::nullopt;
    }
    return v->get<bool>();
  }

  std::optional<std::string> string(const json& obj, const std::string& path, const char* key,
                                    bool required = false) {
    const json* v = member(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      error(join(path, key), "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<Micros> millis(const json& obj, const std::string& path, const char* key, bool required = false) {
    auto v = number(obj, path, key, required);
    if (!v) return std::nullopt;
    return from_ms(*v);
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }
  static std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
};

void read_tuner(Reader& r, const json& j, const std::string& path, tuner::TunerConfig& t) {
  if (!r.object(j, path,
                {"s", "x", "min_list_size", "max_list_size", "default_et_ms", "default_h_ms", "et_floor_ms", "k_max",
                 "p_cap"})) {
    return;
  }
  if (auto v = r.number(j, path, "s")) t.s = *v;
  if (auto v = r.number(j, path, "x")) t.x = *v;
  if (auto v = r.count(j, path, "min_list_size")) t.min_list_size = *v;
  if (auto v = r.count(j, path, "max_list_size")) t.max_list_size = *v;
  if (auto v = r.millis(j, path, "default_et_ms")) t.default_et = *v;
  if (auto v = r.millis(j, path, "default_h_ms")) t.default_h = *v;
  if (auto v = r.millis(j, path, "et_floor_ms")) t.et_floor = *v;
  if (auto v = r.integer(j, path, "k_max")) t.k_max = static_cast<int>(*v);
  if (auto v = r.number(j, path, "p_cap")) t.p_cap = *v;
}

std::optional<harness::VariantSpec> read_variant(Reader& r, const json& j, const std::string& path) {
  if (!r.object(j, path, {"name", "static_et_ms", "static_h_ms", "fixed_K", "tuner"})) return std::nullopt;
  auto name = r.string(j, path, "name", true);
  if (!name) return std::nullopt;
  auto parsed = harness::parse_variant(*name);
  if (!parsed) {
    r.error(Reader::join(path, "name"), "unknown variant \"" + *name + "\" (expected dynatune, raft, raft-low, fix-k)");
    return std::nullopt;
  }
  auto v = harness::VariantSpec::defaults(*parsed);
  // fixed_K must be spelled out for Fix-K.
  v.fixed_k.reset();
  if (auto x = r.millis(j, path, "static_et_ms")) v.static_et = *x;
  if (auto x = r.millis(j, path, "static_h_ms")) v.static_h = *x;
  if (auto x = r.integer(j, path, "fixed_K")) v.fixed_k = static_cast<int>(*x);
  if (const json* t = r.member(j, path, "tuner", false)) read_tuner(r, *t, Reader::join(path, "tuner"), v.tuner);
  for (const auto& e : v.validate()) r.errors.push_back(Reader::join(path, e));
  return v;
}

std::optional<sim::LinkProfile> read_profile(Reader& r, const json& j, const std::string& path,
                                             std::initializer_list<std::string_view> allowed) {
  if (!r.object(j, path, allowed)) return std::nullopt;
  sim::LinkProfile p;
  if (auto d = r.number(j, path, "duplication")) p.duplication = *d;
  const json* schedule = r.member(j, path, "schedule", true);
  if (!schedule) return p;
  const std::string spath = Reader::join(path, "schedule");
  if (!schedule->is_array()) {
    r.error(spath, "expected an array");
    return p;
  }
  for (std::size_t i = 0; i < schedule->size(); ++i) {
    const auto& seg = (*schedule)[i];
    const std::string at = Reader::at(spath, i);
    if (!r.object(seg, at, {"start_ms", "rtt_ms", "jitter_ms", "loss"})) continue;
    sim::Segment s;
    s.start = r.millis(seg, at, "start_ms", true).value_or(Micros{});
    s.rtt = r.millis(seg, at, "rtt_ms", true).value_or(Micros{});
    s.jitter = r.millis(seg, at, "jitter_ms").value_or(Micros{1000});
    s.loss = r.number(seg, at, "loss").value_or(0.0);
    p.schedule.push_back(s);
  }
  for (const auto& e : p.validate()) r.errors.push_back(Reader::join(path, e));
  return p;
}

std::optional<sim::Fault> read_fault(Reader& r, const json& j, const std::string& path) {
  if (!r.object(j, path, {"kind", "server", "at_ms"})) return std::nullopt;
  sim::Fault f;
  bool ok = true;
  if (auto kind = r.string(j, path, "kind", true)) {
    if (*kind == "crash") {
      f.kind = sim::FaultKind::Crash;
    } else if (*kind == "recover") {
      f.kind = sim::FaultKind::Recover;
    } else {
      r.error(Reader::join(path, "kind"), "expected \"crash\" or \"recover\"");
      ok = false;
    }
  } else {
    ok = false;
  }
  if (const json* s = r.member(j, path, "server", true)) {
    if (s->is_string() && s->get<std::string>() == "leader") {
      f.target = sim::FaultTarget::Leader;
    } else if (s->is_string() && s->get<std::string>() == "last-crashed") {
      f.target = sim::FaultTarget::LastCrashed;
    } else if (s->is_number_integer() && s->get<std::int64_t>() >= 0) {
      f.target = sim::FaultTarget::Server;
      f.server = ServerId{static_cast<std::uint32_t>(s->get<std::int64_t>())};
    } else {
      r.error(Reader::join(path, "server"), "expected a server index, \"leader\" or \"last-crashed\"");
      ok = false;
    }
  } else {
    ok = false;
  }
  if (auto at = r.millis(j, path, "at_ms", true)) {
    f.at = *at;
  } else {
    ok = false;
  }
  if (!ok) return std::nullopt;
  return f;
}

}  // namespace

ParseResult parse(const json& doc) {
  Reader r;
  ParseResult result;
  harness::ScenarioSpec spec;
  if (!r.object(doc, "$", {"name", "description", "cluster", "variant", "links", "faults", "run", "output"})) {
    result.errors = std::move(r.errors);
    return result;
  }
  // Top-level paths read better without the "$." prefix.
  const std::string root;
  if (auto v = r.string(doc, root, "name")) spec.name = *v;
  if (auto v = r.string(doc, root, "description")) spec.description = *v;

  if (const json* c = r.member(doc, root, "cluster", true); c && r.object(*c, "cluster", {"n", "seed", "clock_offsets_ms"})) {
    if (auto v = r.count(*c, "cluster", "n", true)) spec.servers = *v;
    if (auto v = r.count(*c, "cluster", "seed")) spec.seed = *v;
    if (const json* offsets = r.member(*c, "cluster", "clock_offsets_ms", false)) {
      if (!offsets->is_array()) {
        r.error("cluster.clock_offsets_ms", "expected an array");
      } else {
        for (std::size_t i = 0; i < offsets->size(); ++i) {
          if (!(*offsets)[i].is_number()) {
            r.error(Reader::at("cluster.clock_offsets_ms", i), "expected a number");
            continue;
          }
          spec.clock_offsets.push_back(from_ms((*offsets)[i].get<double>()));
        }
      }
    }
  }

  spec.variants.clear();
  if (const json* v = r.member(doc, root, "variant", true)) {
    if (v->is_array()) {
      if (v->empty()) r.error("variant", "at least one variant is required");
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (auto parsed = read_variant(r, (*v)[i], Reader::at("variant", i))) spec.variants.push_back(*parsed);
      }
    } else if (auto parsed = read_variant(r, *v, "variant")) {
      spec.variants.push_back(*parsed);
    }
  }

  if (const json* l = r.member(doc, root, "links", true); l && r.object(*l, "links", {"default", "overrides"})) {
    if (const json* d = r.member(*l, "links", "default", true)) {
      if (auto p = read_profile(r, *d, "links.default", {"schedule", "duplication"})) spec.network.default_profile = *p;
    }
    if (const json* o = r.member(*l, "links", "overrides", false)) {
      if (!o->is_array()) {
        r.error("links.overrides", "expected an array");
      } else {
        for (std::size_t i = 0; i < o->size(); ++i) {
          const std::string at = Reader::at("links.overrides", i);
          const auto& item = (*o)[i];
          auto p = read_profile(r, item, at, {"from", "to", "symmetric", "schedule", "duplication"});
          if (!p) continue;
          sim::LinkOverride ov;
          ov.profile = *p;
          ov.from = ServerId{static_cast<std::uint32_t>(r.count(item, at, "from", true).value_or(0))};
          ov.to = ServerId{static_cast<std::uint32_t>(r.count(item, at, "to", true).value_or(0))};
          ov.symmetric = r.boolean(item, at, "symmetric").value_or(true);
          if (ov.from.index() >= spec.servers) r.error(at + ".from", "server out of range");
          if (ov.to.index() >= spec.servers) r.error(at + ".to", "server out of range");
          if (ov.from == ov.to) r.error(at + ".to", "a link needs two distinct servers");
          spec.network.overrides.push_back(std::move(ov));
        }
      }
    }
  }

  if (const json* f = r.member(doc, root, "faults", false)) {
    if (!f->is_array()) {
      r.error("faults", "expected an array");
    } else {
      for (std::size_t i = 0; i < f->size(); ++i) {
        if (auto fault = read_fault(r, (*f)[i], Reader::at("faults", i))) spec.faults.push_back(*fault);
      }
    }
  }

  if (const json* run = r.member(doc, root, "run", true);
      run && r.object(*run, "run",
                      {"duration_ms", "repetitions", "time_scale", "scale_window", "probe_interval_ms", "check_quorum",
                       "kth"})) {
    if (auto v = r.millis(*run, "run", "duration_ms", true)) spec.duration = *v;
    if (auto v = r.count(*run, "run", "repetitions")) spec.repetitions = *v;
    if (auto v = r.number(*run, "run", "time_scale")) spec.time_scale = *v;
    if (auto v = r.boolean(*run, "run", "scale_window")) spec.scale_window = *v;
    if (auto v = r.millis(*run, "run", "probe_interval_ms")) spec.probe_interval = *v;
    if (auto v = r.boolean(*run, "run", "check_quorum")) spec.check_quorum = *v;
    if (auto v = r.count(*run, "run", "kth")) spec.kth = *v;
  }

  if (const json* out = r.member(doc, root, "output", false); out && r.object(*out, "output", {"directory", "formats"})) {
    if (auto v = r.string(*out, "output", "directory")) spec.output_directory = *v;
    if (const json* formats = r.member(*out, "output", "formats", false)) {
      if (!formats->is_array()) {
        r.error("output.formats", "expected an array");
      } else {
        spec.formats.clear();
        for (std::size_t i = 0; i < formats->size(); ++i) {
          if ((*formats)[i].is_string()) {
            spec.formats.push_back((*formats)[i].get<std::string>());
          } else {
            r.error(Reader::at("output.formats", i), "expected a string");
          }
        }
      }
    }
  }

  // Semantic checks that the structural pass did not already report.
  for (auto& e : spec.validate()) {
    const bool duplicate = e.rfind("variant", 0) == 0 || e.rfind("links.", 0) == 0;
    if (!duplicate && std::find(r.errors.begin(), r.errors.end(), e) == r.errors.end()) r.errors.push_back(std::move(e));
  }

  result.errors = std::move(r.errors);
  if (result.errors.empty()) result.spec = std::move(spec);
  return result;
}

ParseResult parse_text(std::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) {
    ParseResult r;
    r.errors.emplace_back("$: not valid JSON");
    return r;
  }
  return parse(doc);
}

ParseResult load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.errors.push_back(path.string() + ": cannot open file");
    return r;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

namespace {

double ms(Micros t) { return to_ms(t); }

json profile_json(const sim::LinkProfile& p) {
  json schedule = json::array();
  for (const auto& s : p.schedule) {
    schedule.push_back({{"start_ms", ms(s.start)}, {"rtt_ms", ms(s.rtt)}, {"jitter_ms", ms(s.jitter)}, {"loss", s.loss}});
  }
  return {{"schedule", schedule}, {"duplication", p.duplication}};
}

json variant_json(const harness::VariantSpec& v) {
  json j = {{"name", std::string(harness::variant_name(v.name))}};
  if (v.mode() == raft::TuningMode::Static) {
    j["static_et_ms"] = ms(v.static_et);
    j["static_h_ms"] = ms(v.static_h);
  }
  if (v.fixed_k) j["fixed_K"] = *v.fixed_k;
  const auto& t = v.tuner;
  j["tuner"] = {{"s", t.s},
                {"x", t.x},
                {"min_list_size", t.min_list_size},
                {"max_list_size", t.max_list_size},
                {"default_et_ms", ms(t.default_et)},
                {"default_h_ms", ms(t.default_h)},
                {"et_floor_ms", ms(t.et_floor)},
                {"k_max", t.k_max},
                {"p_cap", t.p_cap}};
  return j;
}

}  // namespace

json to_json(const harness::ScenarioSpec& spec) {
  json doc;
  doc["name"] = spec.name;
  doc["description"] = spec.description;
  doc["cluster"] = {{"n", spec.servers}, {"seed", spec.seed}};
  if (!spec.clock_offsets.empty()) {
    json offsets = json::array();
    for (auto o : spec.clock_offsets) offsets.push_back(ms(o));
    doc["cluster"]["clock_offsets_ms"] = offsets;
  }
  if (spec.variants.size() == 1) {
    doc["variant"] = variant_json(spec.variants.front());
  } else {
    doc["variant"] = json::array();
    for (const auto& v : spec.variants) doc["variant"].push_back(variant_json(v));
  }
  doc["links"]["default"] = profile_json(spec.network.default_profile);
  if (!spec.network.overrides.empty()) {
    doc["links"]["overrides"] = json::array();
    for (const auto& o : spec.network.overrides) {
      json j = profile_json(o.profile);
      j["from"] = o.from.value;
      j["to"] = o.to.value;
      j["symmetric"] = o.symmetric;
      doc["links"]["overrides"].push_back(j);
    }
  }
  doc["faults"] = json::array();
  for (const auto& f : spec.faults) {
    json server;
    switch (f.target) {
      case sim::FaultTarget::Server: server = f.server.value; break;
      case sim::FaultTarget::Leader: server = "leader"; break;
      case sim::FaultTarget::LastCrashed: server = "last-crashed"; break;
    }
    doc["faults"].push_back({{"kind", std::string(sim::fault_kind_name(f.kind))}, {"server", server}, {"at_ms", ms(f.at)}});
  }
  doc["run"] = {{"duration_ms", ms(spec.duration)},
                {"repetitions", spec.repetitions},
                {"time_scale", spec.time_scale},
                {"scale_window", spec.scale_window},
                {"probe_interval_ms", ms(spec.probe_interval)},
                {"check_quorum", spec.check_quorum},
                {"kth", spec.kth}};
  doc["output"] = {{"directory", spec.output_directory}, {"formats", spec.formats}};
  return doc;
}

std::string serialize(const harness::ScenarioSpec& spec) { return to_json(spec).dump(2) + "\n"; }

}  // namespace dynaraft::scenario
