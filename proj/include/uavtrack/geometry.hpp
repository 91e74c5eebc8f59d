#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uavtrack {

/// Axis-aligned box in pixel coordinates. (x, y) is the top-left corner.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }
  bool valid() const;

  static BoundingBox from_center(double cx, double cy, double w, double h) {
    return {cx - 0.5 * w, cy - 0.5 * h, w, h};
  }
  BoundingBox translated(double dx, double dy) const { return {x + dx, y + dy, w, h}; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// One optional box per frame index; std::nullopt marks an absent target.
using GroundTruthTrack = std::vector<std::optional<BoundingBox>>;

double intersection_area(const BoundingBox& a, const BoundingBox& b);

/// Intersection over union, computed on the real-valued box coordinates.
double jaccard(const BoundingBox& a, const BoundingBox& b);

enum class FrameClass { TruePositive, FalsePositive, FalseNegative, Excluded };

inline constexpr double kDefaultIouThreshold = 0.6;

/// A prediction counts as a true positive only when its overlap is strictly
/// greater than `threshold`; an overlap exactly at the threshold is a false
/// positive.
FrameClass classify_frame(const std::optional<BoundingBox>& pred,
                          const std::optional<BoundingBox>& truth,
                          double threshold = kDefaultIouThreshold);

struct MatchCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t excluded = 0;

  MatchCounts& operator+=(const MatchCounts& o);
  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

MatchCounts accumulate(std::span<const FrameClass> outcomes);

// Zero denominators yield 0.
double precision(const MatchCounts& c);
double recall(const MatchCounts& c);
double f_score(const MatchCounts& c);

struct MetricsReport {
  MatchCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  double iou_threshold = kDefaultIouThreshold;

  static MetricsReport from_counts(const MatchCounts& c, double iou_threshold);
};

/// Micro-averaged pooling: counts are summed, then the ratios are recomputed.
/// Throws std::invalid_argument when the reports were produced at different
/// IoU thresholds.
MetricsReport pool(std::span<const MetricsReport> reports);
MatchCounts pool(std::span<const MatchCounts> counts);

/// Mean of the per-report F-Scores (macro averaging). Reporting option only.
double macro_f_score(std::span<const MetricsReport> reports);

}  // namespace uavtrack
