#pragma once

#include <cstdint>

#include "uavtrack/fft.hpp"
#include "uavtrack/tracker.hpp"

namespace uavtrack {

/// Separable Hann window; endpoints are exactly zero.
Patch hann_window(int w, int h);

/// log(1 + v), zero mean, unit norm (norm + eps), then Hann weighting.
Patch mosse_preprocess(const Patch& p, double eps);

/// Real part of IFFT(filter_conj * FFT(patch)); the circular
/// cross-correlation of the spatial filter with the patch.
Patch correlation_response(const Spectrum& filter_conj, const Patch& patch);

/// (peak - mean(sidelobe)) / (std(sidelobe) + eps); the sidelobe excludes an
/// `exclude` x `exclude` square around the peak.
double peak_to_sidelobe(const Patch& response, int peak_x, int peak_y, int exclude, double eps);

struct Correlation {
  Patch response;
  double dx = 0.0;  // sub-pixel peak offset from the window center, window units
  double dy = 0.0;
  double psr = 0.0;
};

/// Minimum Output Sum of Squared Error correlation filter tracker, fixed
/// scale. The filter covers the box resampled to window x window.
class MosseTracker final : public Tracker {
 public:
  explicit MosseTracker(MosseParams params = {}, std::uint64_t seed = 0);

  TrackerKind kind() const override { return TrackerKind::Mosse; }
  void init(const Frame& frame, const BoundingBox& box) override;
  TrackOutcome update(const Frame& frame) override;
  BoundingBox box() const override { return box_; }
  std::uint64_t model_fingerprint() const override;

  Patch preprocess(const Patch& p) const { return mosse_preprocess(p, params_.reg_eps); }
  Correlation correlate(const Patch& preprocessed) const;
  /// A / (B + eps).
  Spectrum filter_conj() const;
  const Patch& target_response() const { return target_; }
  const MosseParams& params() const { return params_; }
  double last_psr() const { return last_psr_; }

 private:
  Spectrum spectrum_of(const Frame& frame, const BoundingBox& box) const;

  MosseParams params_;
  std::uint64_t seed_;
  int frame_w_ = 0, frame_h_ = 0;
  BoundingBox box_;
  Patch target_;      // desired Gaussian response G
  Spectrum target_hat_;
  Spectrum num_;      // A
  Spectrum den_;      // B
  double last_psr_ = 0.0;
};

}  // namespace uavtrack
