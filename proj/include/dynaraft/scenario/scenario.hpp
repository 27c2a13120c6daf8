#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynaraft/harness/spec.hpp"
#include "json.hpp"

namespace dynaraft::scenario {

struct ParseResult {
  std::optional<harness::ScenarioSpec> spec;
  /// Every problem found, each prefixed with its JSON path.
  std::vector<std::string> errors;

  bool ok() const { return spec.has_value() && errors.empty(); }
};

/// Schema and semantic validation in one pass; never stops at the first
/// error. Times in the document are milliseconds.
ParseResult parse(const nlohmann::json& doc);
ParseResult parse_text(std::string_view text);
ParseResult load(const std::filesystem::path& path);

nlohmann::json to_json(const harness::ScenarioSpec& spec);
/// Pretty-printed JSON; parse(serialize(s)) reproduces s field for field.
std::string serialize(const harness::ScenarioSpec& spec);

}  // namespace dynaraft::scenario
