#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavtrack/geometry.hpp"
#include "uavtrack/orchestrator.hpp"

namespace uavtrack {

nlohmann::json to_json(const MetricsReport& r);
MetricsReport metrics_from_json(const nlohmann::json& j);

/// `tp,fp,fn,excluded,precision,recall,f_score,iou_threshold`
std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsReport& r);

nlohmann::json to_json(const Distribution& d);
nlohmann::json to_json(const TimingSummary& t);
nlohmann::json to_json(const FrameRecord& r);

/// One FrameRecord JSON object per line.
void write_trace_jsonl(const std::filesystem::path& path, const RunTrace& trace);

/// Malformed predictions file; `line` is 1-based.
class PredictionsError : public std::runtime_error {
 public:
  PredictionsError(const std::string& what, int line) : std::runtime_error(what), line(line) {}
  int line;
};

struct Predictions {
  std::vector<std::optional<BoundingBox>> boxes;
  std::vector<FrameSource> sources;
};

/// `frame,x,y,width,height,source`, -1 sentinels on NONE frames.
void write_predictions_csv(const std::filesystem::path& path, const RunTrace& trace);
Predictions read_predictions_csv(const std::filesystem::path& path);

}  // namespace uavtrack
