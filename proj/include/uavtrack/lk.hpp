#pragma once

#include <span>
#include <vector>

#include "uavtrack/image.hpp"
#include "uavtrack/params.hpp"

namespace uavtrack {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct TrackedPoint {
  Point2 pos;
  bool ok = false;
};

/// Intensity pyramid (values in [0, 1]) with per-level gradients.
struct Pyramid {
  std::vector<Patch> levels;
  std::vector<Patch> gx;
  std::vector<Patch> gy;
};

Pyramid build_pyramid(const Frame& frame, int levels);

/// Pyramidal iterative Lucas-Kanade. Point coordinates are pixel indices
/// (pixel (i, j) has its center at (i, j)). A point fails when its window
/// leaves the image at full resolution or its gradient matrix is
/// near-singular at full resolution (smaller eigenvalue / window area < 1e-4;
/// coarser levels with too little texture pass their guess down unrefined).
std::vector<TrackedPoint> lk_track_points(const Pyramid& prev, const Pyramid& next,
                                          std::span<const Point2> points,
                                          const MedianFlowParams& params);

/// Convenience overload; throws std::invalid_argument on a size mismatch.
std::vector<TrackedPoint> lk_track_points(const Frame& prev, const Frame& next,
                                          std::span<const Point2> points,
                                          const MedianFlowParams& params);

}  // namespace uavtrack
