#pragma once

#include <vector>

#include "uavtrack/fft.hpp"
#include "uavtrack/tracker.hpp"

namespace uavtrack {

/// k(d) = exp(-max(0, |x|^2 + |z|^2 - 2 c(d)) / (sigma^2 N)) where
/// c(d) = sum_p x(p) z(p + d) is the circular cross-correlation, computed in
/// the Fourier domain. Throws std::invalid_argument on a size mismatch.
Patch gaussian_kernel_correlation(const Patch& x, const Patch& z, double sigma);

/// Kernelized correlation filter on raw grayscale features, fixed scale.
class KcfTracker final : public Tracker {
 public:
  explicit KcfTracker(KcfParams params = {});

  TrackerKind kind() const override { return TrackerKind::Kcf; }
  void init(const Frame& frame, const BoundingBox& box) override;
  TrackOutcome update(const Frame& frame) override;
  BoundingBox box() const override { return box_; }
  std::uint64_t model_fingerprint() const override;

  /// Windowed features of the padded search area centered on (cx, cy).
  Patch features(const Frame& frame, double cx, double cy) const;
  /// Detection response of the current model over features z.
  Patch response(const Patch& z) const;
  const Patch& labels() const { return labels_; }
  const Patch& template_features() const { return x_; }
  int window_width() const { return win_w_; }
  int window_height() const { return win_h_; }

  /// Lost when the peak falls below this fraction of the running median of
  /// previous successful peaks (checked after 3 successes).
  static constexpr double kLostRatio = 0.2;
  static constexpr int kMaxWindow = 128;
  static constexpr int kMinWindow = 16;

 private:
  Spectrum train(const Patch& x) const;

  KcfParams params_;
  int frame_w_ = 0, frame_h_ = 0;
  BoundingBox box_;
  double pad_w_ = 0.0, pad_h_ = 0.0;
  int win_w_ = 0, win_h_ = 0;
  Patch cos_window_;
  Patch labels_;
  Spectrum labels_hat_;
  Patch x_;
  Spectrum alpha_hat_;
  std::vector<double> peaks_;
};

}  // namespace uavtrack
