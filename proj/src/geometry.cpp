#include "uavtrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavtrack {

bool BoundingBox::valid() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h) && w > 0.0 &&
         h > 0.0;
}

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double iy = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  return ix * iy;
}

double jaccard(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersection_area(a, b);
  // Areas from the same corner differences as the intersection, so that
  // identical boxes give exactly 1.
  const auto extent_area = [](const BoundingBox& r) { return ((r.x + r.w) - r.x) * ((r.y + r.h) - r.y); };
  const double uni = extent_area(a) + extent_area(b) - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

FrameClass classify_frame(const std::optional<BoundingBox>& pred,
                          const std::optional<BoundingBox>& truth, double threshold) {
  if (pred && truth) {
    return jaccard(*pred, *truth) > threshold ? FrameClass::TruePositive
                                              : FrameClass::FalsePositive;
  }
  if (pred) return FrameClass::FalsePositive;
  if (truth) return FrameClass::FalseNegative;
  return FrameClass::Excluded;
}

MatchCounts& MatchCounts::operator+=(const MatchCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  excluded += o.excluded;
  return *this;
}

MatchCounts accumulate(std::span<const FrameClass> outcomes) {
  MatchCounts c;
  for (FrameClass k : outcomes) {
    switch (k) {
      case FrameClass::TruePositive: ++c.tp; break;
      case FrameClass::FalsePositive: ++c.fp; break;
      case FrameClass::FalseNegative: ++c.fn; break;
      case FrameClass::Excluded: ++c.excluded; break;
    }
  }
  return c;
}

double precision(const MatchCounts& c) {
  const auto d = c.tp + c.fp;
  return d == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double recall(const MatchCounts& c) {
  const auto d = c.tp + c.fn;
  return d == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double f_score(const MatchCounts& c) {
  const double p = precision(c);
  const double r = recall(c);
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

MetricsReport MetricsReport::from_counts(const MatchCounts& c, double iou_threshold) {
  return {c, uavtrack::precision(c), uavtrack::recall(c), uavtrack::f_score(c), iou_threshold};
}

MatchCounts pool(std::span<const MatchCounts> counts) {
  MatchCounts total;
  for (const auto& c : counts) total += c;
  return total;
}

MetricsReport pool(std::span<const MetricsReport> reports) {
  if (reports.empty()) return MetricsReport::from_counts({}, kDefaultIouThreshold);
  const double thr = reports.front().iou_threshold;
  MatchCounts total;
  for (const auto& r : reports) {
    if (r.iou_threshold != thr) {
      throw std::invalid_argument("pool: reports were evaluated at different IoU thresholds");
    }
    total += r.counts;
  }
  return MetricsReport::from_counts(total, thr);
}

double macro_f_score(std::span<const MetricsReport> reports) {
  if (reports.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : reports) sum += r.f_score;
  return sum / static_cast<double>(reports.size());
}

}  // namespace uavtrack
