#include "uavtrack/detector.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "uavtrack/kernels.hpp"
#include "uavtrack/media.hpp"
#include "uavtrack/seed.hpp"

namespace uavtrack {

void OracleConfig::validate() const {
  const auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(miss_prob) || !prob(multi_prob) || miss_prob + multi_prob > 1.0) {
    throw std::invalid_argument("oracle: miss_prob, multi_prob in [0,1] with sum <= 1 required");
  }
  if (!(jitter_sigma >= 0.0)) throw std::invalid_argument("oracle.jitter_sigma must be >= 0");
  if (!(latency_ms >= 0.0)) throw std::invalid_argument("oracle.latency_ms must be >= 0");
}

std::vector<Detection> detect_oracle(const OracleConfig& config, const GroundTruthTrack& truth,
                                     int frame_index) {
  if (frame_index < 0 || static_cast<std::size_t>(frame_index) >= truth.size()) {
    throw std::out_of_range("detect_oracle: frame index " + std::to_string(frame_index) +
                            " outside track of " + std::to_string(truth.size()));
  }
  const auto& gt = truth[static_cast<std::size_t>(frame_index)];
  if (!gt) return {};

  std::mt19937_64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(frame_index)));
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u < config.miss_prob) return {};
  if (u < config.miss_prob + config.multi_prob) {
    return {{*gt, 1.0}, {gt->translated(1.5 * gt->w, 0.0), 1.0}};
  }
  if (config.jitter_sigma <= 0.0) return {{*gt, 1.0}};
  std::normal_distribution<double> n(0.0, config.jitter_sigma);
  const double cx = gt->cx() + n(rng);
  const double cy = gt->cy() + n(rng);
  const double w = std::max(1.0, gt->w + n(rng));
  const double h = std::max(1.0, gt->h + n(rng));
  return {{BoundingBox::from_center(cx, cy, w, h), 1.0}};
}

OracleDetector::OracleDetector(OracleConfig config, GroundTruthTrack truth)
    : config_(config), truth_(std::move(truth)) {
  config_.validate();
}

DetectResult OracleDetector::detect(const Frame& frame) const {
  return {detect_oracle(config_, truth_, frame.index), config_.latency_ms};
}

void NccConfig::validate() const {
  if (templ.width < 2 || templ.height < 2) throw std::invalid_argument("ncc: template not captured");
  if (scales.empty()) throw std::invalid_argument("ncc: scales must be non-empty");
  for (double s : scales) {
    if (!(s > 0.0)) throw std::invalid_argument("ncc: scales must be > 0");
  }
  if (!(score_threshold > 0.0 && score_threshold < 1.0)) {
    throw std::invalid_argument("ncc.score_threshold must be in (0, 1)");
  }
  if (stride < 1) throw std::invalid_argument("ncc.stride must be >= 1");
  if (!(latency_ms >= 0.0)) throw std::invalid_argument("ncc.latency_ms must be >= 0");
}

Patch capture_template(const Frame& frame, const BoundingBox& box) {
  const int w = std::max(2, static_cast<int>(std::lround(box.w)));
  const int h = std::max(2, static_cast<int>(std::lround(box.h)));
  return extract_patch(frame, box, w, h);
}

std::vector<Detection> non_max_suppression(std::vector<Detection> candidates, double max_jaccard) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Detection& a, const Detection& b) { return a.score > b.score; });
  std::vector<Detection> kept;
  for (const auto& c : candidates) {
    const bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      return jaccard(k.box, c.box) > max_jaccard;
    });
    if (!overlaps) kept.push_back(c);
  }
  return kept;
}

namespace {

Patch resample(const Patch& src, int w, int h) {
  if (w == src.width && h == src.height) return src;
  Patch out(w, h);
  const double sx = static_cast<double>(src.width) / w, sy = static_cast<double>(src.height) / h;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at(x, y) = sample_bilinear(src, (x + 0.5) * sx - 0.5, (y + 0.5) * sy - 0.5);
  return out;
}

}  // namespace

std::vector<Detection> detect_ncc(const NccConfig& config, const Frame& frame) {
  config.validate();
  if (config.templ.width > frame.width || config.templ.height > frame.height) {
    throw std::invalid_argument("detect_ncc: template larger than frame");
  }
  const Patch image = to_patch(frame);
  std::vector<Detection> candidates;
  for (double s : config.scales) {
    const int tw = static_cast<int>(std::lround(config.templ.width * s));
    const int th = static_cast<int>(std::lround(config.templ.height * s));
    if (tw < 2 || th < 2 || tw > frame.width || th > frame.height) continue;
    const Patch map = kernels::ncc_map(image, resample(config.templ, tw, th), config.stride);
    for (int j = 0; j < map.height; ++j) {
      for (int i = 0; i < map.width; ++i) {
        const double score = map.at(i, j);
        if (score > config.score_threshold) {
          candidates.push_back({BoundingBox{static_cast<double>(i * config.stride),
                                            static_cast<double>(j * config.stride),
                                            static_cast<double>(tw), static_cast<double>(th)},
                                score});
        }
      }
    }
  }
  return non_max_suppression(std::move(candidates), config.nms_jaccard);
}

NccDetector::NccDetector(NccConfig config) : config_(std::move(config)) { config_.validate(); }

DetectResult NccDetector::detect(const Frame& frame) const {
  return {detect_ncc(config_, frame), config_.latency_ms};
}

}  // namespace uavtrack
