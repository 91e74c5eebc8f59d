#pragma once

#include <cstdint>
#include <vector>

#include "uavtrack/geometry.hpp"
#include "uavtrack/image.hpp"

namespace uavtrack {

struct Detection {
  BoundingBox box;
  double score = 0.0;
};

struct DetectResult {
  std::vector<Detection> detections;
  /// Cost charged under the simulated clock.
  double simulated_ms = 0.0;
};

/// Detector contract of the track-by-detection loop. Implementations are
/// immutable after construction, so concurrent detect() calls are safe.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual DetectResult detect(const Frame& frame) const = 0;
};

// ---- oracle --------------------------------------------------------------

struct OracleConfig {
  double miss_prob = 0.0;
  double multi_prob = 0.0;
  double jitter_sigma = 0.0;
  double latency_ms = 60.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Ground-truth backed detector. Randomness is keyed on (seed, frame_index),
/// so the output for a frame does not depend on call order. Throws
/// std::out_of_range for an index outside the track.
std::vector<Detection> detect_oracle(const OracleConfig& config, const GroundTruthTrack& truth,
                                     int frame_index);

class OracleDetector final : public Detector {
 public:
  OracleDetector(OracleConfig config, GroundTruthTrack truth);
  DetectResult detect(const Frame& frame) const override;

 private:
  OracleConfig config_;
  GroundTruthTrack truth_;
};

// ---- normalized cross-correlation ----------------------------------------

struct NccConfig {
  Patch templ;  // luminance values, captured from a reference frame
  std::vector<double> scales{0.9, 1.0, 1.1};
  double score_threshold = 0.7;
  double nms_jaccard = 0.3;
  int stride = 2;
  double latency_ms = 60.0;

  void validate() const;
};

/// Template = the box region of `frame` at the box's rounded pixel size.
Patch capture_template(const Frame& frame, const BoundingBox& box);

/// Greedy suppression: keeps detections in descending score order, dropping
/// any whose Jaccard with an already kept one exceeds `max_jaccard`.
std::vector<Detection> non_max_suppression(std::vector<Detection> candidates, double max_jaccard);

/// Multi-scale sliding-window NCC. Throws std::invalid_argument when the
/// template is wider or taller than the frame.
std::vector<Detection> detect_ncc(const NccConfig& config, const Frame& frame);

class NccDetector final : public Detector {
 public:
  explicit NccDetector(NccConfig config);
  DetectResult detect(const Frame& frame) const override;

 private:
  NccConfig config_;
};

}  // namespace uavtrack
