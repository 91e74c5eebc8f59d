#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uavtrack/detector.hpp"
#include "uavtrack/geometry.hpp"
#include "uavtrack/image.hpp"
#include "uavtrack/tracker.hpp"

namespace uavtrack {

enum class FrameSource { DetectorInit, Tracker, None };
enum class DetectOutcome { Single, NoneFound, Multiple, NotAttempted };

std::string_view to_string(FrameSource s);
std::string_view to_string(DetectOutcome d);
std::optional<FrameSource> parse_frame_source(std::string_view s);
std::optional<DetectOutcome> parse_detect_outcome(std::string_view s);

struct FrameRecord {
  int frame_index = 0;
  FrameSource source = FrameSource::None;
  std::optional<BoundingBox> box;
  /// Detection time plus tracker initialization time.
  std::optional<double> init_ms;
  std::optional<double> update_ms;
  /// Detection time spent on this frame, successful or not.
  double detect_ms = 0.0;
  bool detect_attempted = false;
  DetectOutcome detect_outcome = DetectOutcome::NotAttempted;
};

enum class ClockMode { Simulated, WallClock };

/// Tracker costs charged under the simulated clock.
struct TrackerCosts {
  double init_ms = 0.0;
  double update_ms = 0.0;
};

struct RunConfig {
  int f_lim = 10;
  double iou_threshold = kDefaultIouThreshold;
  ClockMode clock = ClockMode::Simulated;
  TrackerCosts simulated;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RunTrace {
  std::vector<FrameRecord> records;
  double total_ms = 0.0;
  int detector_calls = 0;
  int inits = 0;
  int updates = 0;
  /// Set when no detection ever succeeded; the trace is all NONE.
  std::optional<std::string> warning;
  RunConfig config;
};

using TrackerFactory = std::function<std::unique_ptr<Tracker>()>;

/// Runs the track-by-detection state machine over `sequence`.
///
/// With no active tracker the detector runs every frame until it returns
/// exactly one box. An active tracker is updated until f_lim frames have
/// passed since its initialization; a lost update yields a NONE frame and the
/// tracker is kept. From then on the detector is tried every frame: a single
/// box re-initializes a fresh tracker, anything else keeps the old tracker
/// and updates it on the same frame.
RunTrace run(const Sequence& sequence, const Detector& detector, const TrackerFactory& factory,
             const RunConfig& config);

/// Throws std::invalid_argument when the trace and the truth differ in length.
MetricsReport evaluate(const RunTrace& trace, const GroundTruthTrack& truth, double threshold);
MetricsReport evaluate(std::span<const std::optional<BoundingBox>> predictions,
                       const GroundTruthTrack& truth, double threshold);

struct Distribution {
  std::size_t count = 0;
  double min = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double p95 = 0.0;  // nearest rank
  double max = 0.0;
};

std::optional<Distribution> summarize(std::vector<double> samples);

struct TimingSummary {
  std::optional<Distribution> init;    // absent when there were no inits
  std::optional<Distribution> update;  // absent when there were no updates
  double total_ms = 0.0;
  /// Total processing time (inits, updates, failed detections) / frames.
  double average_ms = 0.0;
  int frames = 0;
};

TimingSummary timing_summary(const RunTrace& trace);

}  // namespace uavtrack
