#pragma once

// Scripted stand-ins for the detector and tracker, for state-machine tests.

#include <map>
#include <memory>
#include <set>

#include "uavtrack/detector.hpp"
#include "uavtrack/orchestrator.hpp"
#include "uavtrack/tracker.hpp"

namespace stubs {

using namespace uavtrack;

/// Returns `count` copies of a fixed box per frame (default 1), at a fixed cost.
class ScriptedDetector final : public Detector {
 public:
  explicit ScriptedDetector(BoundingBox box, double latency_ms = 60.0) : box_(box), latency_(latency_ms) {}
  ScriptedDetector& on(int frame, int count) {
    counts_[frame] = count;
    return *this;
  }
  DetectResult detect(const Frame& frame) const override {
    calls_.insert(frame.index);
    const auto it = counts_.find(frame.index);
    const int n = it == counts_.end() ? 1 : it->second;
    DetectResult r;
    for (int i = 0; i < n; ++i) r.detections.push_back({box_.translated(2.0 * i * box_.w, 0), 1.0});
    r.simulated_ms = latency_;
    return r;
  }
  const std::set<int>& calls() const { return calls_; }

 private:
  BoundingBox box_;
  double latency_;
  std::map<int, int> counts_;
  mutable std::set<int> calls_;
};

/// Echoes its init box; lost on the listed frame indices.
class StubTracker : public Tracker {
 public:
  explicit StubTracker(std::set<int> lost_on = {}) : lost_on_(std::move(lost_on)) {}
  TrackerKind kind() const override { return TrackerKind::Mosse; }
  void init(const Frame&, const BoundingBox& box) override {
    box_ = box;
    updates_since_init_ = 0;
  }
  TrackOutcome update(const Frame& frame) override {
    if (lost_on_.count(frame.index)) return TrackOutcome::lost_target();
    ++updates_since_init_;
    return TrackOutcome::estimate(box_);
  }
  BoundingBox box() const override { return box_; }
  std::uint64_t model_fingerprint() const override { return static_cast<std::uint64_t>(updates_since_init_); }

 private:
  std::set<int> lost_on_;
  BoundingBox box_;
  int updates_since_init_ = 0;
};

inline TrackerFactory stub_factory(std::set<int> lost_on = {}) {
  return [lost_on] { return std::make_unique<StubTracker>(lost_on); };
}

/// Frames with the right indices; content is irrelevant to the stubs.
inline Sequence blank_sequence(int n, int w = 32, int h = 32) {
  Sequence s;
  s.name = "blank";
  for (int i = 0; i < n; ++i) s.frames.emplace_back(i, w, h);
  return s;
}

}  // namespace stubs
