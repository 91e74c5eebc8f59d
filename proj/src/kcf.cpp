#include "uavtrack/kcf.hpp"

#include <algorithm>
#include <cmath>

#include "uavtrack/media.hpp"
#include "uavtrack/mosse.hpp"

namespace uavtrack {
namespace {

int window_side(double padded) {
  int n = KcfTracker::kMinWindow;
  while (n < padded && n < KcfTracker::kMaxWindow) n *= 2;
  return n;
}

double parabolic_offset(double l, double c, double r) {
  const double den = l - 2.0 * c + r;
  if (!(den < 0.0)) return 0.0;
  return std::clamp(0.5 * (l - r) / den, -0.5, 0.5);
}

double median_of(std::vector<double> v) {
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
  if (v.size() % 2 == 1) return v[m];
  const double hi = v[m];
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
  return 0.5 * (lo + hi);
}

}  // namespace

Patch gaussian_kernel_correlation(const Patch& x, const Patch& z, double sigma) {
  if (x.width != z.width || x.height != z.height) {
    throw std::invalid_argument("gaussian_kernel_correlation: patch sizes differ");
  }
  double xx = 0.0, zz = 0.0;
  for (double v : x.values) xx += v * v;
  for (double v : z.values) zz += v * v;
  Patch k = ifft2_real(multiply_conj(fft2(x), fft2(z)));
  const double denom = sigma * sigma * static_cast<double>(x.size());
  for (double& c : k.values) c = std::exp(-std::max(0.0, xx + zz - 2.0 * c) / denom);
  return k;
}

KcfTracker::KcfTracker(KcfParams params) : params_(params) { params_.validate(); }

Patch KcfTracker::features(const Frame& frame, double cx, double cy) const {
  Patch p = extract_patch(frame, BoundingBox::from_center(cx, cy, pad_w_, pad_h_), win_w_, win_h_);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p.values[i] = (p.values[i] / 255.0 - 0.5) * cos_window_.values[i];
  }
  return p;
}

Spectrum KcfTracker::train(const Patch& x) const {
  Spectrum k = fft2(gaussian_kernel_correlation(x, x, params_.kernel_sigma));
  Spectrum alpha(k.width, k.height);
  for (std::size_t i = 0; i < k.size(); ++i) alpha.bins[i] = labels_hat_.bins[i] / (k.bins[i] + params_.lambda);
  return alpha;
}

Patch KcfTracker::response(const Patch& z) const {
  return ifft2_real(multiply(alpha_hat_, fft2(gaussian_kernel_correlation(x_, z, params_.kernel_sigma))));
}

void KcfTracker::init(const Frame& frame, const BoundingBox& box) {
  detail::check_init_box(frame, box);
  frame_w_ = frame.width;
  frame_h_ = frame.height;
  box_ = box;
  pad_w_ = box.w * (1.0 + params_.padding);
  pad_h_ = box.h * (1.0 + params_.padding);
  win_w_ = window_side(pad_w_);
  win_h_ = window_side(pad_h_);
  cos_window_ = hann_window(win_w_, win_h_);

  // Gaussian labels peaking at zero shift, circularly wrapped.
  const double target_w = box.w * win_w_ / pad_w_;
  const double target_h = box.h * win_h_ / pad_h_;
  const double sigma = params_.output_sigma_factor * std::sqrt(target_w * target_h);
  labels_ = Patch(win_w_, win_h_);
  for (int y = 0; y < win_h_; ++y) {
    const int dy = y <= win_h_ / 2 ? y : y - win_h_;
    for (int x = 0; x < win_w_; ++x) {
      const int dx = x <= win_w_ / 2 ? x : x - win_w_;
      labels_.at(x, y) = std::exp(-0.5 * (dx * dx + dy * dy) / (sigma * sigma));
    }
  }
  labels_hat_ = fft2(labels_);

  x_ = features(frame, box.cx(), box.cy());
  alpha_hat_ = train(x_);
  peaks_.clear();
}

TrackOutcome KcfTracker::update(const Frame& frame) {
  detail::check_same_size(frame_w_, frame_h_, frame);
  const Patch r = response(features(frame, box_.cx(), box_.cy()));
  const auto it = std::max_element(r.values.begin(), r.values.end());
  const double peak = *it;
  if (peaks_.size() >= 3 && peak < kLostRatio * median_of(peaks_)) {
    return TrackOutcome::lost_target();
  }

  const int idx = static_cast<int>(it - r.values.begin());
  const int px = idx % r.width, py = idx / r.width;
  const auto wrap = [](int v, int n) { return (v % n + n) % n; };
  double sx = px + parabolic_offset(r.at(wrap(px - 1, r.width), py), peak, r.at(wrap(px + 1, r.width), py));
  double sy = py + parabolic_offset(r.at(px, wrap(py - 1, r.height)), peak, r.at(px, wrap(py + 1, r.height)));
  if (sx > r.width / 2.0) sx -= r.width;
  if (sy > r.height / 2.0) sy -= r.height;

  box_ = box_.translated(sx * pad_w_ / win_w_, sy * pad_h_ / win_h_);
  peaks_.push_back(peak);

  const Patch x_new = features(frame, box_.cx(), box_.cy());
  const Spectrum alpha_new = train(x_new);
  const double eta = params_.interp_factor;
  for (std::size_t i = 0; i < x_.size(); ++i) x_.values[i] = (1.0 - eta) * x_.values[i] + eta * x_new.values[i];
  for (std::size_t i = 0; i < alpha_hat_.size(); ++i) {
    alpha_hat_.bins[i] = (1.0 - eta) * alpha_hat_.bins[i] + eta * alpha_new.bins[i];
  }
  return TrackOutcome::estimate(box_);
}

std::uint64_t KcfTracker::model_fingerprint() const {
  detail::Fingerprint fp;
  fp.add(x_.values.data(), x_.size())
      .add(alpha_hat_.bins.data(), alpha_hat_.size())
      .add(peaks_.data(), peaks_.size())
      .add(&box_, 1);
  return fp.value();
}

}  // namespace uavtrack
