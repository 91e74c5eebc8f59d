#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "uavtrack/geometry.hpp"
#include "uavtrack/image.hpp"
#include "uavtrack/params.hpp"

namespace uavtrack {

enum class TrackerKind { Mosse, Kcf, MedianFlow };

inline constexpr TrackerKind kAllTrackers[] = {TrackerKind::Mosse, TrackerKind::Kcf,
                                               TrackerKind::MedianFlow};

std::string_view to_string(TrackerKind k);
std::optional<TrackerKind> parse_tracker_kind(std::string_view s);

/// Per-frame tracker result: an estimated box, or lost.
struct TrackOutcome {
  std::optional<BoundingBox> box;

  bool lost() const { return !box.has_value(); }
  static TrackOutcome estimate(const BoundingBox& b) { return {b}; }
  static TrackOutcome lost_target() { return {}; }
};

/// Raised when a tracker cannot be initialized on the given box.
class TrackerInitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Single-target tracker. A tracker is owned by exactly one run.
///
/// update() either returns an estimate and adapts the model online, or
/// returns lost and leaves the model and the current box untouched.
class Tracker {
 public:
  virtual ~Tracker() = default;

  virtual TrackerKind kind() const = 0;
  /// Throws TrackerInitError for degenerate boxes or boxes off the frame.
  virtual void init(const Frame& frame, const BoundingBox& box) = 0;
  /// Throws std::invalid_argument when the frame size differs from init.
  virtual TrackOutcome update(const Frame& frame) = 0;
  virtual BoundingBox box() const = 0;
  /// Hash of the learned model bytes; equal before and after a lost update.
  virtual std::uint64_t model_fingerprint() const = 0;
};

std::unique_ptr<Tracker> make_tracker(TrackerKind kind, const TrackerParams& params,
                                      std::uint64_t seed);

namespace detail {

/// FNV-1a over raw bytes; used for model fingerprints.
class Fingerprint {
 public:
  template <class T>
  Fingerprint& add(const T* data, std::size_t count) {
    const auto* b = reinterpret_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < count * sizeof(T); ++i) {
      h_ ^= b[i];
      h_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

void check_init_box(const Frame& frame, const BoundingBox& box);
void check_same_size(int w, int h, const Frame& frame);

}  // namespace detail
}  // namespace uavtrack
