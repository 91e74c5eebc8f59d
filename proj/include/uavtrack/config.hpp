#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uavtrack/detector.hpp"
#include "uavtrack/orchestrator.hpp"
#include "uavtrack/params.hpp"

namespace uavtrack {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NCC detector settings; the template itself is captured at run time.
struct NccSettings {
  std::vector<double> scales{0.9, 1.0, 1.1};
  double score_threshold = 0.7;
  double nms_jaccard = 0.3;
  int stride = 2;
  double latency_ms = 60.0;
};

/// Everything loadable from a flat `section.key=value` file. Every key has
/// a default; unknown keys are rejected.
struct ToolConfig {
  TrackerParams trackers;
  OracleConfig oracle;
  NccSettings ncc;
  TrackerCosts mosse_cost{1.0, 0.5};
  TrackerCosts kcf_cost{2.0, 1.5};
  TrackerCosts medianflow_cost{0.5, 4.0};

  const TrackerCosts& simulated_cost(TrackerKind k) const;
  TrackerCosts& simulated_cost(TrackerKind k);

  /// Applies one `key=value` pair. Throws ConfigError.
  void set(std::string_view key, std::string_view value);
  void validate() const;
  /// All keys with their current values, sorted.
  std::map<std::string, std::string> entries() const;
};

/// Parses `key=value` lines; blank lines and `#` comments are ignored.
ToolConfig parse_config(std::string_view text, ToolConfig base = {});
ToolConfig load_config(const std::filesystem::path& path, ToolConfig base = {});

}  // namespace uavtrack
