#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "robdiff/harness.hpp"

namespace robdiff {

inline constexpr int kSchemaVersion = 1;

struct ConfigIssue {
  std::string path;  // JSON pointer, e.g. "/signal/L"
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }
  nlohmann::json to_json() const;

 private:
  std::vector<ConfigIssue> issues_;
};

/// Reads and parses a JSON file. Throws std::ios_base::failure when the file
/// cannot be opened and ConfigError when it is not valid JSON.
nlohmann::json load_json_file(const std::filesystem::path& path);

/// Scenario config:
///
///   {
///     "schema_version": 1,
///     "name": "...",
///     "signal": {"kind": "ramp-parabola" | "polynomial" | "bang-bang" | "random"
///                        | "trace-file" | "adversary", "L": .., "R": .., ...},
///     "noise":  {"N": .., "segments": [{"kind": "constant" | "arc" | "step"
///                                        | "white", "start", "duration", ...}]},
///     "run":    {"dt": .., "duration": .., "seed": .., "t_start": ..},
///     "engines": [{"kind": .., "name": .., "params": {..}}]
///   }
///
/// Segment "start" may be omitted to continue from the previous segment.
/// Relative trace-file paths resolve against `base_dir`. All problems found
/// are reported together.
Scenario parse_scenario(const nlohmann::json& config,
                        const std::filesystem::path& base_dir = {});

/// Sweep config: {"schema_version": 1, "sweep": {"L": [..], "N": [..],
/// "dt": [..], "engine": {..}, "N_bar": .., "random_draws": .., "seed": ..,
/// "R": ..}}.
SweepSpec parse_sweep(const nlohmann::json& config);

}  // namespace robdiff
