#include "uavtrack/mosse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "uavtrack/media.hpp"

namespace uavtrack {
namespace {

constexpr int kSidelobeExclude = 11;
constexpr double kMaxWarpAngle = 10.0 * std::numbers::pi / 180.0;
constexpr double kMaxWarpScale = 0.05;

// Offset of the parabola vertex through (-1, l), (0, c), (1, r).
double parabolic_offset(double l, double c, double r) {
  const double den = l - 2.0 * c + r;
  if (!(den < 0.0)) return 0.0;
  return std::clamp(0.5 * (l - r) / den, -0.5, 0.5);
}

}  // namespace

Patch hann_window(int w, int h) {
  const auto hann = [](int i, int n) {
    return n <= 1 ? 1.0 : 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (n - 1)));
  };
  Patch win(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) win.at(x, y) = hann(x, w) * hann(y, h);
  return win;
}

Patch mosse_preprocess(const Patch& p, double eps) {
  Patch out = p;
  double mean = 0.0;
  for (double& v : out.values) {
    v = std::log1p(v);
    mean += v;
  }
  const double n = static_cast<double>(std::max<std::size_t>(1, out.size()));
  mean /= n;
  // One refinement pass; a constant patch then centers to exact zeros.
  double residual = 0.0;
  for (double v : out.values) residual += v - mean;
  mean += residual / n;
  double ss = 0.0;
  for (double& v : out.values) {
    v -= mean;
    ss += v * v;
  }
  const double inv = 1.0 / (std::sqrt(ss) + eps);
  const Patch win = hann_window(p.width, p.height);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] *= inv * win.values[i];
  return out;
}

Patch correlation_response(const Spectrum& filter_conj, const Patch& patch) {
  return ifft2_real(multiply(filter_conj, fft2(patch)));
}

double peak_to_sidelobe(const Patch& r, int px, int py, int exclude, double eps) {
  const int half = exclude / 2;
  double sum = 0.0, sq = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      if (std::abs(x - px) <= half && std::abs(y - py) <= half) continue;
      const double v = r.at(x, y);
      sum += v;
      sq += v * v;
      ++n;
    }
  }
  if (n == 0) return 0.0;
  const double mean = sum / static_cast<double>(n);
  const double var = std::max(0.0, sq / static_cast<double>(n) - mean * mean);
  return (r.at(px, py) - mean) / (std::sqrt(var) + eps);
}

MosseTracker::MosseTracker(MosseParams params, std::uint64_t seed)
    : params_(params), seed_(seed) {
  params_.validate();
  const int n = params_.window;
  target_ = Patch(n, n);
  const double c = n / 2.0;
  const double s2 = 2.0 * params_.sigma_target * params_.sigma_target;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) target_.at(x, y) = std::exp(-((x - c) * (x - c) + (y - c) * (y - c)) / s2);
  target_hat_ = fft2(target_);
}

Spectrum MosseTracker::spectrum_of(const Frame& frame, const BoundingBox& box) const {
  return fft2(preprocess(extract_patch(frame, box, params_.window, params_.window)));
}

void MosseTracker::init(const Frame& frame, const BoundingBox& box) {
  detail::check_init_box(frame, box);
  frame_w_ = frame.width;
  frame_h_ = frame.height;
  box_ = box;
  const int n = params_.window;
  num_ = Spectrum(n, n);
  den_ = Spectrum(n, n);

  std::mt19937_64 rng(seed_);
  std::uniform_real_distribution<double> angle(-kMaxWarpAngle, kMaxWarpAngle);
  std::uniform_real_distribution<double> scale(1.0 - kMaxWarpScale, 1.0 + kMaxWarpScale);
  for (int k = 0; k <= params_.init_perturbations; ++k) {
    const Patch raw = k == 0 ? extract_patch(frame, box, n, n)
                             : extract_patch_affine(frame, box, n, n, angle(rng), scale(rng));
    const Spectrum f = fft2(preprocess(raw));
    for (std::size_t i = 0; i < f.size(); ++i) {
      num_.bins[i] += target_hat_.bins[i] * std::conj(f.bins[i]);
      den_.bins[i] += f.bins[i] * std::conj(f.bins[i]);
    }
  }
  last_psr_ = 0.0;
}

Spectrum MosseTracker::filter_conj() const {
  Spectrum h(num_.width, num_.height);
  for (std::size_t i = 0; i < h.size(); ++i) h.bins[i] = num_.bins[i] / (den_.bins[i] + params_.reg_eps);
  return h;
}

Correlation MosseTracker::correlate(const Patch& preprocessed) const {
  Correlation c;
  c.response = correlation_response(filter_conj(), preprocessed);
  const Patch& r = c.response;
  const auto it = std::max_element(r.values.begin(), r.values.end());
  const int idx = static_cast<int>(it - r.values.begin());
  const int px = idx % r.width, py = idx / r.width;
  const auto wrap = [](int v, int n) { return (v % n + n) % n; };
  const double ox = parabolic_offset(r.at(wrap(px - 1, r.width), py), r.at(px, py),
                                     r.at(wrap(px + 1, r.width), py));
  const double oy = parabolic_offset(r.at(px, wrap(py - 1, r.height)), r.at(px, py),
                                     r.at(px, wrap(py + 1, r.height)));
  c.dx = px + ox - r.width / 2;
  c.dy = py + oy - r.height / 2;
  c.psr = peak_to_sidelobe(r, px, py, kSidelobeExclude, params_.reg_eps);
  return c;
}

TrackOutcome MosseTracker::update(const Frame& frame) {
  detail::check_same_size(frame_w_, frame_h_, frame);
  const int n = params_.window;
  const Correlation c = correlate(preprocess(extract_patch(frame, box_, n, n)));
  last_psr_ = c.psr;
  if (!(c.psr >= params_.psr_threshold)) return TrackOutcome::lost_target();

  box_ = box_.translated(c.dx * box_.w / n, c.dy * box_.h / n);
  const Spectrum f = spectrum_of(frame, box_);
  const double lr = params_.learning_rate;
  for (std::size_t i = 0; i < f.size(); ++i) {
    num_.bins[i] = lr * (target_hat_.bins[i] * std::conj(f.bins[i])) + (1.0 - lr) * num_.bins[i];
    den_.bins[i] = lr * (f.bins[i] * std::conj(f.bins[i])) + (1.0 - lr) * den_.bins[i];
  }
  return TrackOutcome::estimate(box_);
}

std::uint64_t MosseTracker::model_fingerprint() const {
  detail::Fingerprint fp;
  fp.add(num_.bins.data(), num_.size()).add(den_.bins.data(), den_.size()).add(&box_, 1);
  return fp.value();
}

}  // namespace uavtrack
