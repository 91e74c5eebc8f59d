#include "uavtrack/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace uavtrack {

std::string_view to_string(FrameSource s) {
  switch (s) {
    case FrameSource::DetectorInit: return "DETECTOR_INIT";
    case FrameSource::Tracker: return "TRACKER";
    case FrameSource::None: return "NONE";
  }
  return "?";
}

std::string_view to_string(DetectOutcome d) {
  switch (d) {
    case DetectOutcome::Single: return "SINGLE";
    case DetectOutcome::NoneFound: return "NONE_FOUND";
    case DetectOutcome::Multiple: return "MULTIPLE";
    case DetectOutcome::NotAttempted: return "NOT_ATTEMPTED";
  }
  return "?";
}

std::optional<FrameSource> parse_frame_source(std::string_view s) {
  for (auto v : {FrameSource::DetectorInit, FrameSource::Tracker, FrameSource::None})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

std::optional<DetectOutcome> parse_detect_outcome(std::string_view s) {
  for (auto v : {DetectOutcome::Single, DetectOutcome::NoneFound, DetectOutcome::Multiple,
                 DetectOutcome::NotAttempted})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

void RunConfig::validate() const {
  if (f_lim < 1) throw std::invalid_argument("f_lim must be >= 1");
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw std::invalid_argument("iou threshold must be in (0, 1)");
  }
  if (!(simulated.init_ms >= 0.0 && simulated.update_ms >= 0.0)) {
    throw std::invalid_argument("simulated tracker costs must be >= 0");
  }
}

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(bool wall) : wall_(wall) {
    if (wall_) start_ = std::chrono::steady_clock::now();
  }
  /// Elapsed wall time, or `simulated` under the simulated clock.
  double elapsed_or(double simulated) const {
    if (!wall_) return simulated;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  bool wall_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

RunTrace run(const Sequence& sequence, const Detector& detector, const TrackerFactory& factory,
             const RunConfig& config) {
  config.validate();
  const bool wall = config.clock == ClockMode::WallClock;
  RunTrace trace;
  trace.config = config;
  trace.records.reserve(sequence.frames.size());

  std::unique_ptr<Tracker> tracker;
  int since_init = 0;

  for (const Frame& frame : sequence.frames) {
    FrameRecord rec;
    rec.frame_index = frame.index;

    const bool want_detection = !tracker || since_init >= config.f_lim;
    bool initialized = false;
    if (want_detection) {
      rec.detect_attempted = true;
      ++trace.detector_calls;
      Stopwatch sw(wall);
      DetectResult det = detector.detect(frame);
      rec.detect_ms = sw.elapsed_or(det.simulated_ms);
      const auto n = det.detections.size();
      rec.detect_outcome = n == 1   ? DetectOutcome::Single
                           : n == 0 ? DetectOutcome::NoneFound
                                    : DetectOutcome::Multiple;
      if (n == 1) {
        auto fresh = factory();
        Stopwatch isw(wall);
        bool ok = true;
        try {
          fresh->init(frame, det.detections.front().box);
        } catch (const TrackerInitError&) {
          ok = false;
        }
        const double init_cost = isw.elapsed_or(config.simulated.init_ms);
        if (ok) {
          tracker = std::move(fresh);
          since_init = 0;
          initialized = true;
          ++trace.inits;
          rec.source = FrameSource::DetectorInit;
          rec.box = det.detections.front().box;
          rec.init_ms = rec.detect_ms + init_cost;
        } else {
          // A box the tracker rejects costs the attempt but counts as a failed detection.
          rec.detect_ms += init_cost;
        }
      }
    }

    if (!initialized && tracker) {
      Stopwatch sw(wall);
      const TrackOutcome out = tracker->update(frame);
      rec.update_ms = sw.elapsed_or(config.simulated.update_ms);
      ++trace.updates;
      if (!out.lost()) {
        rec.source = FrameSource::Tracker;
        rec.box = out.box;
      }
    }

    trace.total_ms += rec.init_ms.value_or(0.0) + rec.update_ms.value_or(0.0) +
                      (rec.source == FrameSource::DetectorInit ? 0.0 : rec.detect_ms);
    trace.records.push_back(rec);
    if (tracker) ++since_init;
  }

  if (trace.inits == 0 && !trace.records.empty()) {
    trace.warning = "detector never returned a single box; no tracker was initialized";
  }
  return trace;
}

MetricsReport evaluate(std::span<const std::optional<BoundingBox>> predictions,
                       const GroundTruthTrack& truth, double threshold) {
  if (predictions.size() != truth.size()) {
    throw std::invalid_argument("evaluate: " + std::to_string(predictions.size()) +
                                " predictions for " + std::to_string(truth.size()) + " truth frames");
  }
  std::vector<FrameClass> classes(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) classes[i] = classify_frame(predictions[i], truth[i], threshold);
  return MetricsReport::from_counts(accumulate(classes), threshold);
}

MetricsReport evaluate(const RunTrace& trace, const GroundTruthTrack& truth, double threshold) {
  std::vector<std::optional<BoundingBox>> preds(trace.records.size());
  for (std::size_t i = 0; i < preds.size(); ++i) preds[i] = trace.records[i].box;
  return evaluate(preds, truth, threshold);
}

std::optional<Distribution> summarize(std::vector<double> s) {
  if (s.empty()) return std::nullopt;
  std::sort(s.begin(), s.end());
  Distribution d;
  d.count = s.size();
  d.min = s.front();
  d.max = s.back();
  const std::size_t m = s.size() / 2;
  d.median = s.size() % 2 == 1 ? s[m] : 0.5 * (s[m - 1] + s[m]);
  d.mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(s.size())));
  d.p95 = s[std::max<std::size_t>(rank, 1) - 1];
  return d;
}

TimingSummary timing_summary(const RunTrace& trace) {
  std::vector<double> inits, updates;
  TimingSummary t;
  for (const auto& r : trace.records) {
    if (r.init_ms) inits.push_back(*r.init_ms);
    if (r.update_ms) updates.push_back(*r.update_ms);
    t.total_ms += r.init_ms.value_or(0.0) + r.update_ms.value_or(0.0) +
                  (r.source == FrameSource::DetectorInit ? 0.0 : r.detect_ms);
  }
  t.init = summarize(std::move(inits));
  t.update = summarize(std::move(updates));
  t.frames = static_cast<int>(trace.records.size());
  t.average_ms = t.frames == 0 ? 0.0 : t.total_ms / t.frames;
  return t;
}

}  // namespace uavtrack
