#pragma once

#include "uavtrack/lk.hpp"
#include "uavtrack/tracker.hpp"

namespace uavtrack {

struct MedianFlowStep {
  TrackOutcome outcome;
  double median_fb_error = 0.0;
  int survivors = 0;
  double dx = 0.0;
  double dy = 0.0;
  double scale = 1.0;
};

/// One forward-backward median-flow step from `prev` to `next`.
MedianFlowStep medianflow_step(const Frame& prev, const BoundingBox& box, const Frame& next,
                               const MedianFlowParams& params);
/// Same step on prebuilt pyramids of equal shape.
MedianFlowStep medianflow_step(const Pyramid& prev, const BoundingBox& box, const Pyramid& next,
                               const MedianFlowParams& params);

class MedianFlowTracker final : public Tracker {
 public:
  explicit MedianFlowTracker(MedianFlowParams params = {});

  TrackerKind kind() const override { return TrackerKind::MedianFlow; }
  void init(const Frame& frame, const BoundingBox& box) override;
  TrackOutcome update(const Frame& frame) override;
  BoundingBox box() const override { return box_; }
  std::uint64_t model_fingerprint() const override;

  const MedianFlowStep& last_step() const { return last_; }

 private:
  MedianFlowParams params_;
  Frame prev_;
  Pyramid prev_pyramid_;
  BoundingBox box_;
  MedianFlowStep last_;
};

}  // namespace uavtrack
